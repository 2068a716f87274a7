//! Closed-form displaced-parity correlators for the N-mode W state.
//!
//! With `S` the measured subset (`m = |S|`), `sigma = sum_{i in S} alpha_i`
//! and `q = sum_{i in S} |alpha_i|^2`, every correlator is
//!
//! ```text
//! (1/N) (4 eta^2 |sigma|^2 + N - 2 m eta) exp(-2 eta q)
//! ```
//!
//! which reduces to `(1/N)(4|sigma|^2 - N) exp(-2q)` for a full ideal measurement.
//! Only measured modes carry a detector, so `eta` never touches unmeasured ones.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{oracle_for_alphas, FockCutoff, SinglePhotonState};
use crate::source::w_state;

/// Detector quantum efficiency in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Efficiency(f64);

impl Efficiency {
    pub const IDEAL: Efficiency = Efficiency(1.0);

    pub fn new(eta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&eta) {
            Ok(Self(eta))
        } else {
            Err(Error::Efficiency(eta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Efficiency {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// Per-mode displacement, or `None` for a party that does not measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementAssignment {
    entries: Vec<Option<C64>>,
}

impl MeasurementAssignment {
    pub fn new(entries: Vec<Option<C64>>) -> Result<Self> {
        if entries.iter().all(Option::is_none) {
            return Err(Error::EmptySubset);
        }
        Ok(Self { entries })
    }

    pub fn full(alphas: &[C64]) -> Result<Self> {
        Self::new(alphas.iter().copied().map(Some).collect())
    }

    /// Measure only the modes in `subset`, using `alphas[i]` for mode `subset[i]`.
    pub fn subset(n_modes: usize, subset: &[usize], alphas: &[C64]) -> Result<Self> {
        if subset.len() != alphas.len() {
            return Err(Error::LengthMismatch {
                expected: subset.len(),
                got: alphas.len(),
            });
        }
        let mut entries = vec![None; n_modes];
        for (&index, &a) in subset.iter().zip(alphas) {
            if index >= n_modes {
                return Err(Error::ModeIndex { index, n_modes });
            }
            entries[index] = Some(a);
        }
        Self::new(entries)
    }

    pub fn n_modes(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Option<C64>] {
        &self.entries
    }

    pub fn measured(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|a| (i, a)))
    }

    pub fn measured_count(&self) -> usize {
        self.entries.iter().filter(|a| a.is_some()).count()
    }
}

/// Shared kernel: `n` modes, `m` measured, `sum_abs2 = |sigma|^2`, `sq = q`.
#[inline]
pub(crate) fn kernel(n: usize, m: usize, sum_abs2: f64, sq: f64, eta: f64) -> f64 {
    let n = n as f64;
    (4.0 * eta * eta * sum_abs2 + (n - 2.0 * m as f64 * eta)) * (-2.0 * eta * sq).exp() / n
}

fn stats<'a>(alphas: impl Iterator<Item = &'a C64>) -> (C64, f64) {
    alphas.fold((C64::new(0.0, 0.0), 0.0), |(s, q), a| {
        (s + a, q + a.norm_sqr())
    })
}

pub fn full_correlation(alphas: &[C64]) -> Result<f64> {
    let n = alphas.len();
    if n < 2 {
        return Err(Error::TooFewModes(n));
    }
    let (s, q) = stats(alphas.iter());
    let nf = n as f64;
    Ok((4.0 * s.norm_sqr() - nf) * (-2.0 * q).exp() / nf)
}

pub fn full_correlation_eta(alphas: &[C64], eff: Efficiency) -> Result<f64> {
    let n = alphas.len();
    if n < 2 {
        return Err(Error::TooFewModes(n));
    }
    let (s, q) = stats(alphas.iter());
    let eta = eff.value();
    let nf = n as f64;
    Ok((4.0 * eta * eta * s.norm_sqr() + nf * (1.0 - 2.0 * eta)) * (-2.0 * eta * q).exp() / nf)
}

pub fn reduced_correlation(assignment: &MeasurementAssignment) -> Result<f64> {
    reduced_correlation_eta(assignment, Efficiency::IDEAL)
}

pub fn reduced_correlation_eta(assignment: &MeasurementAssignment, eff: Efficiency) -> Result<f64> {
    let n = assignment.n_modes();
    if n < 2 {
        return Err(Error::TooFewModes(n));
    }
    let m = assignment.measured_count();
    if m == 0 {
        return Err(Error::EmptySubset);
    }
    let (s, q) = stats(assignment.entries().iter().flatten());
    Ok(kernel(n, m, s.norm_sqr(), q, eff.value()))
}

/// Something that can evaluate a W-state correlator for an assignment.
pub trait CorrelationBackend {
    fn correlation(&self, assignment: &MeasurementAssignment, eff: Efficiency) -> Result<f64>;
}

/// The closed forms above.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl CorrelationBackend for ClosedForm {
    fn correlation(&self, assignment: &MeasurementAssignment, eff: Efficiency) -> Result<f64> {
        reduced_correlation_eta(assignment, eff)
    }
}

/// Truncated Fock-space brute force on an arbitrary single-photon state.
#[derive(Debug, Clone)]
pub struct FockOracle {
    pub state: SinglePhotonState,
    pub cutoff: FockCutoff,
}

impl FockOracle {
    pub fn w(n_modes: usize) -> Result<Self> {
        Ok(Self {
            state: w_state(n_modes)?,
            cutoff: FockCutoff::default(),
        })
    }
}

impl CorrelationBackend for FockOracle {
    fn correlation(&self, assignment: &MeasurementAssignment, eff: Efficiency) -> Result<f64> {
        let max_abs = assignment
            .measured()
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        let cutoff = self.cutoff.escalated_for(max_abs);
        oracle_for_alphas(&self.state, assignment.entries(), eff.value(), &cutoff)
    }
}
