//! Maximizing Bell expressions over displacement settings.
//!
//! [`maximize`] runs independent simplex searches from random starts; each
//! restart seeds its own ChaCha stream from `(seed, restart index)` so serial
//! and parallel runs agree bit for bit. [`eta_threshold`] bisects the detector
//! efficiency at which the best value crosses the classical bound.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlators::Efficiency;
use crate::error::{Error, Result};
use crate::inequalities::BellExpression;
use crate::settings::SettingsMatrix;
use crate::simplex::{self, SimplexOptions};

#[derive(Debug, Clone, Serialize)]
pub struct MaximizeConfig {
    pub restarts: usize,
    pub seed: u64,
    pub alpha_max: f64,
    pub real_only: bool,
    pub tol: f64,
    pub max_evals_per_restart: usize,
    /// Replaces the random start of restart 0.
    pub warm_start: Option<SettingsMatrix>,
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            alpha_max: 2.0,
            real_only: true,
            tol: 1e-9,
            max_evals_per_restart: 20_000,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationReport {
    pub best_value: f64,
    pub best_settings: SettingsMatrix,
    pub restarts: usize,
    pub evaluations: usize,
    /// Whether the restart that produced `best_value` met the simplex tolerance.
    pub converged: bool,
    pub converged_restarts: usize,
    pub best_restart: usize,
    pub seed: u64,
}

struct RestartResult {
    value: f64,
    settings: SettingsMatrix,
    evaluations: usize,
    converged: bool,
}

fn random_start(
    rng: &mut ChaCha8Rng,
    n_modes: usize,
    alpha_max: f64,
    real_only: bool,
) -> SettingsMatrix {
    let mut draw = || {
        if real_only {
            C64::new(rng.random_range(-alpha_max..=alpha_max), 0.0)
        } else {
            // uniform on the disk
            let r = alpha_max * rng.random::<f64>().sqrt();
            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        }
    };
    let modes = (0..n_modes).map(|_| [draw(), draw()]).collect();
    SettingsMatrix::new(modes).expect("n_modes >= 2")
}

fn run_restart(
    expr: &BellExpression,
    eta: f64,
    config: &MaximizeConfig,
    index: usize,
) -> RestartResult {
    let n = expr.n_modes();
    let start = match (&config.warm_start, index) {
        (Some(w), 0) => w.projected(config.alpha_max),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            random_start(&mut rng, n, config.alpha_max, config.real_only)
        }
    };
    let to_settings = |p: &[f64]| {
        SettingsMatrix::from_params(n, p, config.real_only)
            .expect("parameter length fixed by layout")
            .projected(config.alpha_max)
    };
    let opts = SimplexOptions {
        initial_step: 0.1 * config.alpha_max.min(1.0),
        tol: config.tol,
        max_evals: config.max_evals_per_restart,
    };
    let out = simplex::minimize(
        |p| -expr.evaluate_unchecked(&to_settings(p), eta),
        &start.to_params(config.real_only),
        &opts,
    );
    let settings = to_settings(&out.x);
    RestartResult {
        value: expr.evaluate_unchecked(&settings, eta),
        settings,
        evaluations: out.evaluations,
        converged: out.converged,
    }
}

pub fn maximize(
    expr: &BellExpression,
    eff: Efficiency,
    config: &MaximizeConfig,
) -> Result<OptimizationReport> {
    if config.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    if config.alpha_max.is_nan() || config.alpha_max <= 0.0 {
        return Err(Error::InvalidConfig("alpha_max must be positive".into()));
    }
    if let Some(w) = &config.warm_start {
        if w.n_modes() != expr.n_modes() {
            return Err(Error::LengthMismatch {
                expected: expr.n_modes(),
                got: w.n_modes(),
            });
        }
    }
    let eta = eff.value();
    let results: Vec<RestartResult> = (0..config.restarts)
        .into_par_iter()
        .map(|i| run_restart(expr, eta, config, i))
        .collect();

    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let converged_restarts = results.iter().filter(|r| r.converged).count();
    let winner = &results[best];
    Ok(OptimizationReport {
        best_value: winner.value,
        best_settings: winner.settings.clone(),
        restarts: config.restarts,
        evaluations,
        converged: winner.converged,
        converged_restarts,
        best_restart: best,
        seed: config.seed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GridConfig {
    pub grid_points: usize,
    pub alpha_range: (f64, f64),
    /// Scan only the family where every mode shares setting 1 and setting 2.
    pub symmetric: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            grid_points: 201,
            alpha_range: (-1.0, 1.0),
            symmetric: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridResult {
    pub value: f64,
    pub settings: SettingsMatrix,
    pub points: usize,
}

/// Largest grid the non-symmetric scan will walk.
pub const MAX_GRID_POINTS: usize = 20_000_000;

/// Real grid scan; the best point is a natural `warm_start` for [`maximize`].
pub fn grid_scan(
    expr: &BellExpression,
    eff: Efficiency,
    config: &GridConfig,
) -> Result<GridResult> {
    let k = config.grid_points;
    if k < 2 {
        return Err(Error::InvalidConfig(
            "grid_points must be at least 2".into(),
        ));
    }
    let (lo, hi) = config.alpha_range;
    if lo.is_nan() || hi.is_nan() || hi <= lo {
        return Err(Error::InvalidConfig(
            "alpha_range must be increasing".into(),
        ));
    }
    let n = expr.n_modes();
    let node = |i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
    let dims = if config.symmetric { 2 } else { 2 * n };
    let total = (0..dims)
        .try_fold(1usize, |acc, _| acc.checked_mul(k))
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "grid of {k}^{dims} points exceeds the limit of {MAX_GRID_POINTS}"
            ))
        })?;
    let eta = eff.value();

    let point = |flat: usize| -> SettingsMatrix {
        let mut digits = Vec::with_capacity(dims);
        let mut rest = flat;
        for _ in 0..dims {
            digits.push(node(rest % k));
            rest /= k;
        }
        digits.reverse();
        if config.symmetric {
            SettingsMatrix::symmetric(n, C64::new(digits[0], 0.0), C64::new(digits[1], 0.0))
                .expect("n >= 2")
        } else {
            SettingsMatrix::from_params(n, &digits, true).expect("length 2n")
        }
    };

    let (best_idx, value) = (0..total)
        .into_par_iter()
        .map(|i| (i, expr.evaluate_unchecked(&point(i), eta)))
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| {
                // max value, lowest index on ties
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(GridResult {
        value,
        settings: point(best_idx),
        points: total,
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum ThresholdMode {
    /// Evaluate at these settings for every efficiency.
    Fixed(SettingsMatrix),
    /// Re-maximize over settings at every efficiency.
    Reoptimize(MaximizeConfig),
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdConfig {
    pub mode: ThresholdMode,
    pub eta_tol: f64,
    pub bracket: (f64, f64),
    /// Evenly spaced efficiencies used to check monotonicity before bisecting.
    pub monotone_samples: usize,
}

impl ThresholdConfig {
    pub fn fixed(settings: SettingsMatrix) -> Self {
        Self {
            mode: ThresholdMode::Fixed(settings),
            eta_tol: 1e-4,
            bracket: (0.5, 1.0),
            monotone_samples: 11,
        }
    }

    pub fn reoptimize(config: MaximizeConfig) -> Self {
        Self {
            mode: ThresholdMode::Reoptimize(config),
            ..Self::fixed(SettingsMatrix::zeros(1).expect("one mode"))
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BisectionStep {
    pub lo: f64,
    pub hi: f64,
    pub mid: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub eta_star: f64,
    /// `value - bound` at eta = 1.
    pub excess_at_one: f64,
    pub samples: Vec<(f64, f64)>,
    pub trace: Vec<BisectionStep>,
}

/// Efficiency at which the (fixed or re-optimized) value equals the classical bound.
pub fn eta_threshold(expr: &BellExpression, config: &ThresholdConfig) -> Result<ThresholdReport> {
    if config.eta_tol.is_nan() || config.eta_tol <= 0.0 {
        return Err(Error::InvalidConfig("eta_tol must be positive".into()));
    }
    let (lo, hi) = config.bracket;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "bad efficiency bracket [{lo}, {hi}]"
        )));
    }
    let bound = expr.classical_bound();

    let (excess, slack): (Box<dyn Fn(f64) -> Result<f64> + '_>, f64) = match &config.mode {
        ThresholdMode::Fixed(settings) => {
            let settings = settings.clone();
            (
                Box::new(move |eta| Ok(expr.evaluate(&settings, Efficiency::new(eta)?)? - bound)),
                0.0,
            )
        }
        ThresholdMode::Reoptimize(mc) => {
            let at_one = maximize(expr, Efficiency::new(hi)?, mc)?;
            let mc = MaximizeConfig {
                warm_start: Some(at_one.best_settings),
                ..mc.clone()
            };
            (
                Box::new(move |eta| {
                    Ok(maximize(expr, Efficiency::new(eta)?, &mc)?.best_value - bound)
                }),
                1e-6,
            )
        }
    };

    let f_hi = excess(hi)?;
    if f_hi <= 0.0 {
        return Err(Error::NoViolation {
            value: f_hi + bound,
            bound,
        });
    }
    let f_lo = excess(lo)?;
    if f_lo >= 0.0 {
        return Err(Error::ThresholdBelowBracket {
            eta: lo,
            value: f_lo + bound,
            bound,
        });
    }

    let k = config.monotone_samples.max(2);
    let samples = (0..k)
        .map(|i| {
            let eta = lo + (hi - lo) * i as f64 / (k - 1) as f64;
            excess(eta).map(|f| (eta, f))
        })
        .collect::<Result<Vec<_>>>()?;
    for w in samples.windows(2) {
        if w[1].1 < w[0].1 - slack {
            return Err(Error::NonMonotone {
                eta_lo: w[0].0,
                f_lo: w[0].1,
                eta_hi: w[1].0,
                f_hi: w[1].1,
            });
        }
    }

    let (mut a, mut b) = (lo, hi);
    let mut trace = Vec::new();
    while b - a > config.eta_tol {
        let mid = 0.5 * (a + b);
        let f = excess(mid)?;
        trace.push(BisectionStep {
            lo: a,
            hi: b,
            mid,
            excess: f,
        });
        if f > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(ThresholdReport {
        eta_star: 0.5 * (a + b),
        excess_at_one: f_hi,
        samples,
        trace,
    })
}
