//! Two-setting correlation Bell expressions.
//!
//! A [`BellExpression`] is a flat list of signed correlator terms. Each term
//! says, per mode, whether that party uses setting 1, setting 2, or does not
//! measure at all; the last case is what lets three-, two- and one-party
//! correlators live in the same expression.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::correlators::{kernel, CorrelationBackend, Efficiency, MeasurementAssignment};
use crate::error::{Error, Result};
use crate::settings::SettingsMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    First,
    Second,
    Identity,
}

impl Slot {
    fn index(self) -> Option<usize> {
        match self {
            Slot::First => Some(0),
            Slot::Second => Some(1),
            Slot::Identity => None,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::First => "1",
            Slot::Second => "2",
            Slot::Identity => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellTerm {
    pub coefficient: f64,
    pub slots: Vec<Slot>,
}

impl BellTerm {
    pub fn new(coefficient: f64, slots: Vec<Slot>) -> Self {
        Self { coefficient, slots }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellExpression {
    name: String,
    n_modes: usize,
    terms: Vec<BellTerm>,
    classical_bound: f64,
}

impl BellExpression {
    pub fn new(
        name: impl Into<String>,
        n_modes: usize,
        terms: Vec<BellTerm>,
        classical_bound: f64,
    ) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::TooFewModes(n_modes));
        }
        if classical_bound.is_nan() || classical_bound <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "classical bound must be positive, got {classical_bound}"
            )));
        }
        for term in &terms {
            if term.slots.len() != n_modes {
                return Err(Error::LengthMismatch {
                    expected: n_modes,
                    got: term.slots.len(),
                });
            }
            if term.coefficient == 0.0 {
                return Err(Error::InvalidConfig("zero coefficient in Bell term".into()));
            }
            if term.slots.iter().all(|s| *s == Slot::Identity) {
                return Err(Error::EmptySubset);
            }
        }
        Ok(Self {
            name: name.into(),
            n_modes,
            terms,
            classical_bound,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[BellTerm] {
        &self.terms
    }

    pub fn classical_bound(&self) -> f64 {
        self.classical_bound
    }

    /// Multiplies every coefficient and the bound by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if factor.is_nan() || factor <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "scale must be positive, got {factor}"
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| BellTerm::new(t.coefficient * factor, t.slots.clone()))
            .collect();
        Self::new(
            self.name.clone(),
            self.n_modes,
            terms,
            self.classical_bound * factor,
        )
    }

    /// Divides by the largest |coefficient| and fixes the overall sign so the
    /// first term is positive. The bound is rescaled by the same magnitude;
    /// flipping the sign is harmless because these inequalities bound `|expr|`.
    pub fn normalized(&self) -> Self {
        let max = self
            .terms
            .iter()
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max);
        let sign = self.terms.first().map_or(1.0, |t| t.coefficient.signum());
        let terms = self
            .terms
            .iter()
            .map(|t| BellTerm::new(sign * t.coefficient / max, t.slots.clone()))
            .collect();
        Self {
            name: self.name.clone(),
            n_modes: self.n_modes,
            terms,
            classical_bound: self.classical_bound / max,
        }
    }

    pub fn coefficient_map(&self) -> BTreeMap<Vec<Slot>, f64> {
        let mut map = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.slots.clone()).or_insert(0.0) += t.coefficient;
        }
        map
    }

    /// Value under the closed-form W-state correlators.
    pub fn evaluate(&self, settings: &SettingsMatrix, eff: Efficiency) -> Result<f64> {
        self.check_settings(settings)?;
        Ok(self.evaluate_unchecked(settings, eff.value()))
    }

    pub(crate) fn evaluate_unchecked(&self, settings: &SettingsMatrix, eta: f64) -> f64 {
        let modes = settings.modes();
        self.terms
            .iter()
            .map(|term| {
                let mut sum = num_complex::Complex64::new(0.0, 0.0);
                let mut sq = 0.0;
                let mut m = 0;
                for (mode, slot) in modes.iter().zip(&term.slots) {
                    if let Some(k) = slot.index() {
                        let a = mode[k];
                        sum += a;
                        sq += a.norm_sqr();
                        m += 1;
                    }
                }
                term.coefficient * kernel(self.n_modes, m, sum.norm_sqr(), sq, eta)
            })
            .sum()
    }

    /// Value under an arbitrary correlator backend (e.g. the Fock-space oracle).
    pub fn evaluate_with<B: CorrelationBackend + ?Sized>(
        &self,
        backend: &B,
        settings: &SettingsMatrix,
        eff: Efficiency,
    ) -> Result<f64> {
        self.check_settings(settings)?;
        self.terms.iter().try_fold(0.0, |acc, term| {
            let entries = term
                .slots
                .iter()
                .enumerate()
                .map(|(j, s)| s.index().map(|k| settings.get(j, k)))
                .collect();
            let a = MeasurementAssignment::new(entries)?;
            Ok(acc + term.coefficient * backend.correlation(&a, eff)?)
        })
    }

    fn check_settings(&self, settings: &SettingsMatrix) -> Result<()> {
        if settings.n_modes() != self.n_modes {
            return Err(Error::LengthMismatch {
                expected: self.n_modes,
                got: settings.n_modes(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BellExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} ({} modes, {} terms, bound {})",
            self.name,
            self.n_modes,
            self.terms.len(),
            self.classical_bound
        )?;
        for t in &self.terms {
            let slots: String = t.slots.iter().map(Slot::to_string).collect();
            writeln!(f, "  {:+.6} E({slots})", t.coefficient)?;
        }
        Ok(())
    }
}

/// A real function on `{-1, +1}^N`, stored as a table indexed by bitmask
/// (bit `j` set means `s_j = -1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SignFunction {
    n_modes: usize,
    values: Vec<f64>,
}

impl SignFunction {
    pub fn from_fn(n_modes: usize, f: impl Fn(&[i8]) -> f64) -> Self {
        let values = (0..1usize << n_modes)
            .map(|mask| f(&signs_of(mask, n_modes)))
            .collect();
        Self { n_modes, values }
    }

    pub fn from_table(n_modes: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << n_modes {
            return Err(Error::LengthMismatch {
                expected: 1 << n_modes,
                got: values.len(),
            });
        }
        Ok(Self { n_modes, values })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn eval(&self, s: &[i8]) -> f64 {
        let mask = s
            .iter()
            .enumerate()
            .fold(0usize, |m, (j, &v)| if v < 0 { m | (1 << j) } else { m });
        self.values[mask]
    }
}

fn signs_of(mask: usize, n: usize) -> Vec<i8> {
    (0..n)
        .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// `sqrt(2) cos(k pi/4)`, tabulated so integer multiples come out exact.
fn sqrt2_cos_quarter_turns(k: i32) -> f64 {
    match k.rem_euclid(8) {
        0 => SQRT_2,
        1 | 7 => 1.0,
        2 | 6 => 0.0,
        3 | 5 => -1.0,
        _ => -SQRT_2,
    }
}

/// `s -> sqrt(2) cos(-pi/4 + (sum s - N) pi/4)`.
pub fn mabk_sign_function(n_modes: usize) -> SignFunction {
    SignFunction::from_fn(n_modes, |s| {
        let total: i32 = s.iter().map(|&x| x as i32).sum();
        sqrt2_cos_quarter_turns(total - n_modes as i32 - 1)
    })
}

/// Builds `sum_s S(s) sum_k prod_j w_j(s_j, k_j) E(k)` with bound `2^N`.
///
/// Setting 1 of party `j` is weighted by `s_j` and setting 2 by 1. Terms are
/// listed lexicographically (setting 1 before setting 2, first mode most
/// significant) and vanishing coefficients are dropped.
pub fn zb_expression(s_fn: &SignFunction, n_modes: usize) -> Result<BellExpression> {
    if n_modes < 2 {
        return Err(Error::TooFewModes(n_modes));
    }
    if s_fn.n_modes() != n_modes {
        return Err(Error::LengthMismatch {
            expected: n_modes,
            got: s_fn.n_modes(),
        });
    }
    let sign_vectors: Vec<Vec<i8>> = (0..1usize << n_modes)
        .map(|m| signs_of(m, n_modes))
        .collect();
    let mut terms = Vec::new();
    for k in 0..1usize << n_modes {
        // bit (N-1-j) of k set means party j uses setting 2
        let slots: Vec<Slot> = (0..n_modes)
            .map(|j| {
                if k >> (n_modes - 1 - j) & 1 == 1 {
                    Slot::Second
                } else {
                    Slot::First
                }
            })
            .collect();
        let coefficient: f64 = sign_vectors
            .iter()
            .map(|s| {
                let weight: i32 = s
                    .iter()
                    .zip(&slots)
                    .map(|(&sj, slot)| if *slot == Slot::First { sj as i32 } else { 1 })
                    .product();
                s_fn.eval(s) * weight as f64
            })
            .sum();
        if coefficient.abs() > 1e-9 {
            terms.push(BellTerm::new(coefficient, slots));
        }
    }
    BellExpression::new("zb", n_modes, terms, (1u64 << n_modes) as f64)
}

fn parse_slots(pattern: &str) -> Vec<Slot> {
    pattern
        .chars()
        .map(|c| match c {
            '1' => Slot::First,
            '2' => Slot::Second,
            _ => Slot::Identity,
        })
        .collect()
}

fn from_patterns(name: &str, n: usize, rows: &[(f64, &str)], bound: f64) -> BellExpression {
    let terms = rows
        .iter()
        .map(|&(c, p)| BellTerm::new(c, parse_slots(p)))
        .collect();
    BellExpression::new(name, n, terms, bound).expect("built-in expression is well formed")
}

/// Three-party MABK quantity; local bound 2.
pub fn paper_b3_zb() -> BellExpression {
    from_patterns(
        "b3zb",
        3,
        &[(1.0, "112"), (1.0, "121"), (1.0, "211"), (-1.0, "222")],
        2.0,
    )
}

/// The 17-term three-party quantity mixing full, pair and single-party
/// correlators; local bound 3.
pub fn paper_b3_prime() -> BellExpression {
    from_patterns(
        "b3prime",
        3,
        &[
            (-1.0, "111"),
            (1.0, "112"),
            (1.0, "121"),
            (1.0, "211"),
            (-1.0, "222"),
            (-1.0, "12-"),
            (-1.0, "21-"),
            (-1.0, "22-"),
            (-1.0, "1-2"),
            (-1.0, "2-1"),
            (-1.0, "2-2"),
            (-1.0, "-12"),
            (-1.0, "-21"),
            (-1.0, "-22"),
            (1.0, "1--"),
            (1.0, "-1-"),
            (1.0, "--1"),
        ],
        3.0,
    )
}

/// Four-party MABK quantity; local bound 4.
pub fn paper_b4_zb() -> BellExpression {
    const SIGNS: [f64; 16] = [
        1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0, -1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0,
    ];
    let rows: Vec<(f64, String)> = SIGNS
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let p: String = (0..4)
                .map(|j| if k >> (3 - j) & 1 == 1 { '2' } else { '1' })
                .collect();
            (c, p)
        })
        .collect();
    let rows: Vec<(f64, &str)> = rows.iter().map(|(c, p)| (*c, p.as_str())).collect();
    from_patterns("b4zb", 4, &rows, 4.0)
}

/// Looks up `b3zb`, `b3prime`, `b4zb` or `mabk:N`.
pub fn by_name(name: &str) -> Result<BellExpression> {
    match name {
        "b3zb" => Ok(paper_b3_zb()),
        "b3prime" => Ok(paper_b3_prime()),
        "b4zb" => Ok(paper_b4_zb()),
        other => {
            let n: usize = other
                .strip_prefix("mabk:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::UnknownInequality(other.to_string()))?;
            let mut expr = zb_expression(&mabk_sign_function(n), n)?.normalized();
            expr.name = other.to_string();
            Ok(expr)
        }
    }
}

pub const MAX_LHV_MODES: usize = 8;

/// Maximum over all deterministic local strategies (each party fixes a ±1
/// outcome per setting; a non-measuring party contributes 1).
pub fn enumerate_lhv_bound(expr: &BellExpression) -> Result<f64> {
    let n = expr.n_modes();
    if n > MAX_LHV_MODES {
        return Err(Error::EnumerationTooLarge {
            max: MAX_LHV_MODES,
            got: n,
        });
    }
    let mut best = f64::NEG_INFINITY;
    for strategy in 0..1usize << (2 * n) {
        let outcome = |j: usize, k: usize| {
            if strategy >> (2 * j + k) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        };
        let value: f64 = expr
            .terms()
            .iter()
            .map(|t| {
                t.slots
                    .iter()
                    .enumerate()
                    .filter_map(|(j, s)| s.index().map(|k| outcome(j, k)))
                    .product::<f64>()
                    * t.coefficient
            })
            .sum();
        best = best.max(value);
    }
    Ok(best)
}
