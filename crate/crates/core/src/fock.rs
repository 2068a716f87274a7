//! Brute-force correlation functions in a truncated Fock space.
//!
//! Each mode carries at most one photon in the W-state sector, so the
//! measurement on mode `j` only enters through the 2x2 block
//! `M_pq = <p| D(alpha) (1 - 2 eta)^n D^dagger(alpha) |q>` with `p, q` in
//! `{0, 1}`. The block is summed term by term from the number-basis
//! expansion of `D^dagger(alpha)|q>`; nothing here uses the closed-form
//! correlators, which is what makes this module usable as their oracle.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Highest retained photon number per mode, plus the tail tolerance that
/// any displacement used with it must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCutoff {
    n_max: usize,
    tail_tol: f64,
}

impl FockCutoff {
    pub const DEFAULT_N_MAX: usize = 30;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::CutoffTooSmall(n_max));
        }
        Ok(Self { n_max, tail_tol })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Poisson tail `e^{-|a|^2} sum_{m > n_max} |a|^{2m} / m!`, i.e. the
    /// weight of the displaced vacuum lost to truncation.
    pub fn tail(&self, alpha_abs: f64) -> f64 {
        let x = alpha_abs * alpha_abs;
        if x == 0.0 {
            return 0.0;
        }
        let ln_x = x.ln();
        let mut ln_fact = 0.0;
        for m in 1..=self.n_max {
            ln_fact += (m as f64).ln();
        }
        let mut sum = 0.0;
        let mut m = self.n_max + 1;
        loop {
            ln_fact += (m as f64).ln();
            let term = (m as f64 * ln_x - ln_fact - x).exp();
            sum += term;
            // terms are decreasing once m > x
            if (m as f64) > x && (term <= sum * 1e-17 || term == 0.0) {
                break;
            }
            m += 1;
        }
        sum
    }

    pub fn check(&self, alpha_abs: f64) -> Result<()> {
        let tail = self.tail(alpha_abs);
        if tail < self.tail_tol {
            Ok(())
        } else {
            Err(Error::CutoffTail {
                n_max: self.n_max,
                alpha_abs,
                tail,
                tail_tol: self.tail_tol,
            })
        }
    }

    /// Smallest cutoff at or above this one whose tail is below tolerance for `alpha_abs`.
    pub fn escalated_for(&self, alpha_abs: f64) -> Self {
        let mut out = *self;
        while out.tail(alpha_abs) >= out.tail_tol {
            out.n_max += 5;
        }
        out
    }

    /// Default cutoff, escalated if `alpha_abs` requires it.
    pub fn covering(alpha_abs: f64) -> Self {
        Self::default().escalated_for(alpha_abs)
    }
}

impl Default for FockCutoff {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
            tail_tol: Self::DEFAULT_TAIL_TOL,
        }
    }
}

/// Number-basis coefficients `<m| D^dagger(alpha) |q>` for `m = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementColumn {
    pub q: usize,
    pub alpha: C64,
    pub coeffs: Vec<C64>,
}

/// Expands `D^dagger(alpha)|q>` for `q` in `{0, 1}`.
///
/// `D^dagger(alpha)|0>` is the coherent state `|-alpha>`; `D^dagger(alpha)|1>`
/// is `conj(alpha)|-alpha> + a^dagger|-alpha>`. The `(-alpha)^m / sqrt(m!)`
/// factors are accumulated as a running product, so large cutoffs never
/// form a factorial explicitly.
pub fn displacement_column(
    alpha: C64,
    q: usize,
    cutoff: &FockCutoff,
) -> Result<DisplacementColumn> {
    if q > 1 {
        return Err(Error::PhotonIndex(q));
    }
    cutoff.check(alpha.norm())?;
    let n = cutoff.n_max();
    let mut base = Vec::with_capacity(n + 1);
    let mut t = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    base.push(t);
    for m in 1..=n {
        t = t * (-alpha) / (m as f64).sqrt();
        base.push(t);
    }
    let coeffs = if q == 0 {
        base
    } else {
        let conj = alpha.conj();
        (0..=n)
            .map(|m| {
                let shifted = if m == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    base[m - 1] * (m as f64).sqrt()
                };
                conj * base[m] + shifted
            })
            .collect()
    };
    Ok(DisplacementColumn { q, alpha, coeffs })
}

/// Per-mode measurement operator restricted to `{|0>, |1>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedParityBlock {
    pub alpha: C64,
    pub eta: f64,
    pub m: [[C64; 2]; 2],
}

impl DisplacedParityBlock {
    pub fn entry(&self, p: usize, q: usize) -> C64 {
        self.m[p][q]
    }
}

pub fn displaced_parity_block(
    alpha: C64,
    eta: f64,
    cutoff: &FockCutoff,
) -> Result<DisplacedParityBlock> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Efficiency(eta));
    }
    let cols = [
        displacement_column(alpha, 0, cutoff)?,
        displacement_column(alpha, 1, cutoff)?,
    ];
    let x = 1.0 - 2.0 * eta;
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for (p, row) in m.iter_mut().enumerate() {
        for (q, entry) in row.iter_mut().enumerate() {
            *entry = cols[p]
                .coeffs
                .iter()
                .zip(&cols[q].coeffs)
                .enumerate()
                .map(|(k, (cp, cq))| cp.conj() * cq * x.powi(k as i32))
                .sum();
        }
    }
    Ok(DisplacedParityBlock { alpha, eta, m })
}

/// What a party does to its mode: measure a displaced parity block, or nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeOperator {
    Parity(DisplacedParityBlock),
    Identity,
}

impl ModeOperator {
    fn matrix(&self) -> [[C64; 2]; 2] {
        match self {
            ModeOperator::Parity(b) => b.m,
            ModeOperator::Identity => {
                let one = C64::new(1.0, 0.0);
                let zero = C64::new(0.0, 0.0);
                [[one, zero], [zero, one]]
            }
        }
    }
}

/// A one-photon superposition over N modes: `sum_j w_j |0..1_j..0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonState {
    amplitudes: Vec<C64>,
}

impl SinglePhotonState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::TooFewModes(0));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    pub fn n_modes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// `<psi| O_1 x ... x O_N |psi>` for a single-photon state.
///
/// In the one-photon sector `<1_i| (x) O |1_j>` is `O_i[1][1] prod_{k != i} O_k[0][0]`
/// on the diagonal and `O_i[1][0] O_j[0][1] prod_{k != i,j} O_k[0][0]` off it.
pub fn oracle_correlation(state: &SinglePhotonState, ops: &[ModeOperator]) -> Result<f64> {
    let n = state.n_modes();
    if ops.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: ops.len(),
        });
    }
    let mats: Vec<_> = ops.iter().map(ModeOperator::matrix).collect();
    let w = state.amplitudes();
    let mut total = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let mut t = if i == j {
                mats[i][1][1]
            } else {
                mats[i][1][0] * mats[j][0][1]
            };
            for (k, mk) in mats.iter().enumerate() {
                if k != i && k != j {
                    t *= mk[0][0];
                }
            }
            total += w[i].conj() * w[j] * t;
        }
    }
    if total.im.abs() >= 1e-12 {
        return Err(Error::ImaginaryPart(total.im));
    }
    Ok(total.re)
}

/// Convenience wrapper: build blocks for `alphas` (None = unmeasured) at efficiency `eta`.
pub fn oracle_for_alphas(
    state: &SinglePhotonState,
    alphas: &[Option<C64>],
    eta: f64,
    cutoff: &FockCutoff,
) -> Result<f64> {
    let ops = alphas
        .iter()
        .map(|a| match a {
            Some(a) => displaced_parity_block(*a, eta, cutoff).map(ModeOperator::Parity),
            None => Ok(ModeOperator::Identity),
        })
        .collect::<Result<Vec<_>>>()?;
    oracle_correlation(state, &ops)
}

/// One-photon action of a lossless beam splitter on a pair of modes.
///
/// Real rotation `[[sqrt(T), sqrt(R)], [-sqrt(R), sqrt(T)]]` with `R = 1 - T`.
pub fn beam_splitter_single_photon(transmittance: f64) -> Result<[[f64; 2]; 2]> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(Error::Transmittance(transmittance));
    }
    let t = transmittance.sqrt();
    let r = (1.0 - transmittance).sqrt();
    Ok([[t, r], [-r, t]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn w(n: usize) -> SinglePhotonState {
        SinglePhotonState::new(vec![c(1.0 / (n as f64).sqrt()); n]).unwrap()
    }

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n, FockCutoff::DEFAULT_TAIL_TOL).unwrap()
    }

    #[test]
    fn zero_displacement_columns_are_number_states() {
        let col0 = displacement_column(c(0.0), 0, &cut(4)).unwrap();
        let col1 = displacement_column(c(0.0), 1, &cut(4)).unwrap();
        let e = |k: usize| {
            (0..5)
                .map(|m| c(if m == k { 1.0 } else { 0.0 }))
                .collect::<Vec<_>>()
        };
        assert_eq!(col0.coeffs, e(0));
        assert_eq!(col1.coeffs, e(1));
    }

    #[test]
    fn vacuum_column_matches_series() {
        let col = displacement_column(c(0.5), 0, &cut(20)).unwrap();
        let mut fact = 1.0_f64;
        for (m, coef) in col.coeffs.iter().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            let expect = (-0.125_f64).exp() * (-0.5_f64).powi(m as i32) / fact.sqrt();
            assert!((coef.re - expect).abs() < 1e-15 && coef.im == 0.0);
        }
        assert!((col.coeffs[0].re - 0.882_496_902_584_595).abs() < 1e-12);
        let norm: f64 = col.coeffs.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_photon_column_is_normalized() {
        let col = displacement_column(C64::new(0.7, -0.4), 1, &cut(40)).unwrap();
        let norm: f64 = col.coeffs.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm <= 1.0 + 1e-14);
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_photon_index_two() {
        assert!(matches!(
            displacement_column(c(0.1), 2, &cut(10)),
            Err(Error::PhotonIndex(2))
        ));
    }

    #[test]
    fn rejects_cutoff_tail_violation() {
        assert!(matches!(
            displacement_column(c(3.0), 0, &cut(5)),
            Err(Error::CutoffTail { .. })
        ));
        assert!(FockCutoff::new(0, 1e-14).is_err());
    }

    #[test]
    fn default_cutoff_covers_unit_and_a_half() {
        FockCutoff::default().check(1.5).unwrap();
        let big = FockCutoff::covering(6.0);
        assert!(big.n_max() > FockCutoff::DEFAULT_N_MAX);
        big.check(6.0).unwrap();
    }

    #[test]
    fn large_cutoff_does_not_overflow() {
        let cutoff = cut(250);
        let col = displacement_column(c(4.0), 1, &cutoff).unwrap();
        assert!(col
            .coeffs
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite()));
        let norm: f64 = col.coeffs.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_displacement_blocks() {
        let b = displaced_parity_block(c(0.0), 1.0, &cut(10)).unwrap();
        assert_eq!(b.m, [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]);
        let b = displaced_parity_block(c(0.0), 0.0, &cut(10)).unwrap();
        assert_eq!(b.m, [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]);
    }

    #[test]
    fn diagonal_entries_at_unit_efficiency() {
        let b = displaced_parity_block(c(0.3), 1.0, &FockCutoff::default()).unwrap();
        let g = (-0.18_f64).exp();
        assert!((b.entry(0, 0).re - g).abs() < 1e-12);
        assert!((b.entry(1, 1).re - g * (4.0 * 0.09 - 1.0)).abs() < 1e-12);
        assert!((b.entry(0, 0).re - 0.835_270_211_411_272).abs() < 1e-12);
        assert!((b.entry(1, 1).re + 0.534_572_935_303_214).abs() < 1e-12);
    }

    #[test]
    fn blocks_are_hermitian_and_bounded() {
        for &(re, im) in &[(0.3, 0.0), (-0.8, 0.4), (1.2, -1.1), (0.0, 0.5)] {
            for &eta in &[0.0, 0.3, 0.5, 0.9, 1.0] {
                let b =
                    displaced_parity_block(C64::new(re, im), eta, &FockCutoff::default()).unwrap();
                assert_eq!(b.entry(0, 1), b.entry(1, 0).conj());
                assert_eq!(b.entry(0, 0).im, 0.0);
                assert_eq!(b.entry(1, 1).im, 0.0);
                for p in 0..2 {
                    for q in 0..2 {
                        assert!(b.entry(p, q).norm() <= 1.0 + 1e-12);
                    }
                }
            }
        }
        assert!(displaced_parity_block(c(0.1), 1.5, &FockCutoff::default()).is_err());
    }

    #[test]
    fn all_modes_at_origin_give_total_parity() {
        let cutoff = FockCutoff::default();
        let v = oracle_for_alphas(&w(3), &[Some(c(0.0)); 3], 1.0, &cutoff).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
        let v = oracle_for_alphas(&w(3), &[Some(c(0.0)), None, None], 1.0, &cutoff).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_matches_closed_three_mode_form() {
        let a = [0.471669, 0.471669, -0.0205849];
        let alphas: Vec<_> = a.iter().map(|&x| Some(c(x))).collect();
        let v = oracle_for_alphas(&w(3), &alphas, 1.0, &FockCutoff::default()).unwrap();
        let s: f64 = a.iter().sum();
        let q: f64 = a.iter().map(|x| x * x).sum();
        let expect = (-2.0 * q).exp() * (4.0 * s * s - 3.0) / 3.0;
        assert!((v - expect).abs() < 1e-10);
    }

    #[test]
    fn oracle_rejects_bad_inputs() {
        let ops = vec![ModeOperator::Identity; 2];
        assert!(matches!(
            oracle_correlation(&w(3), &ops),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            SinglePhotonState::new(vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn beam_splitter_matrices() {
        assert_eq!(
            beam_splitter_single_photon(1.0).unwrap(),
            [[1.0, 0.0], [-0.0, 1.0]]
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = beam_splitter_single_photon(0.5).unwrap();
        for (row, exp) in m.iter().zip([[h, h], [-h, h]]) {
            for (x, y) in row.iter().zip(exp) {
                assert!((x - y).abs() < 1e-15);
            }
        }
        let m = beam_splitter_single_photon(2.0 / 3.0).unwrap();
        assert!((m[0][0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((m[0][1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((m[1][0] + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(beam_splitter_single_photon(1.01).is_err());
        assert!(beam_splitter_single_photon(-0.1).is_err());
    }
}
