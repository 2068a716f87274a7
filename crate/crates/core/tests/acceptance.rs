//! Acceptance suite. Runs every criterion in sequence (so wall-clock limits
//! are measured without contention), prints one line each, and exits non-zero
//! if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wbell::correlators::{
    full_correlation, full_correlation_eta, reduced_correlation, reduced_correlation_eta,
    ClosedForm, CorrelationBackend, Efficiency, MeasurementAssignment,
};
use wbell::inequalities::{
    enumerate_lhv_bound, mabk_sign_function, paper_b3_prime, paper_b3_zb, paper_b4_zb,
    zb_expression, BellExpression,
};
use wbell::optimizer::{eta_threshold, maximize, MaximizeConfig, ThresholdConfig};
use wbell::report::{b3_prime_settings, b4_settings, verify_oracle};
use wbell::source::{apply_cascade, build_cascade, w_state};

const SEED: u64 = 0;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> wbell::Result<Verdict> {
    Ok(Verdict {
        ok,
        detail: detail.into(),
    })
}

fn b3_prime_value() -> wbell::Result<Verdict> {
    let v = paper_b3_prime().evaluate(&b3_prime_settings(), Efficiency::IDEAL)?;
    verdict(
        (v - 3.1605).abs() <= 5e-4,
        format!("value {v:.8}, ref 3.1605 +/- 5e-4"),
    )
}

fn b4_value() -> wbell::Result<Verdict> {
    let expr = paper_b4_zb();
    let cfg = MaximizeConfig {
        restarts: 200,
        seed: SEED,
        ..Default::default()
    };
    let r = maximize(&expr, Efficiency::IDEAL, &cfg)?;
    let reference = expr.evaluate(&b4_settings(), Efficiency::IDEAL)?;
    let ok = (r.best_value - 5.14529).abs() <= 1e-3 && (reference - 5.14529).abs() <= 1e-3;
    verdict(
        ok,
        format!(
            "maximum {:.8}, at reference settings {reference:.8}, ref 5.14529 +/- 1e-3",
            r.best_value
        ),
    )
}

fn b3_zb_no_violation() -> wbell::Result<Verdict> {
    let cfg = MaximizeConfig {
        restarts: 500,
        seed: SEED,
        alpha_max: 2.0,
        real_only: false,
        ..Default::default()
    };
    let r = maximize(&paper_b3_zb(), Efficiency::IDEAL, &cfg)?;
    verdict(
        r.best_value <= 2.0 + 1e-6,
        format!(
            "complex maximum {:.8} <= 2 + 1e-6 over {} restarts (numerical evidence, not a proof)",
            r.best_value, r.restarts
        ),
    )
}

fn threshold_fixed() -> wbell::Result<Verdict> {
    let r = eta_threshold(
        &paper_b3_prime(),
        &ThresholdConfig::fixed(b3_prime_settings()),
    )?;
    verdict(
        (r.eta_star - 0.9804).abs() <= 5e-3,
        format!("eta* {:.6}, ref 0.9804 +/- 5e-3", r.eta_star),
    )
}

/// Reported only; there is no pass bound on the re-optimized threshold.
fn threshold_reoptimized() -> wbell::Result<Verdict> {
    let cfg = ThresholdConfig::reoptimize(MaximizeConfig {
        restarts: 200,
        seed: SEED,
        ..Default::default()
    });
    let r = eta_threshold(&paper_b3_prime(), &cfg)?;
    verdict(
        true,
        format!("re-optimized eta* {:.6} (reported, no bound)", r.eta_star),
    )
}

fn oracle_equivalence() -> wbell::Result<Verdict> {
    let r = verify_oracle(1000, SEED)?;
    verdict(
        r.passed(),
        format!(
            "{} trials, max deviation {:.3e} < {:.0e}",
            r.trials, r.max_deviation, r.tolerance
        ),
    )
}

fn lhv_bounds() -> wbell::Result<Verdict> {
    let got = [
        enumerate_lhv_bound(&paper_b3_zb())?,
        enumerate_lhv_bound(&paper_b3_prime())?,
        enumerate_lhv_bound(&paper_b4_zb())?,
    ];
    verdict(
        got == [2.0, 3.0, 4.0],
        format!("bounds {got:?}, expected [2.0, 3.0, 4.0]"),
    )
}

fn same_terms(a: &BellExpression, b: &BellExpression) -> bool {
    let (ma, mb) = (
        a.normalized().coefficient_map(),
        b.normalized().coefficient_map(),
    );
    ma.len() == mb.len()
        && ma
            .iter()
            .zip(&mb)
            .all(|((ka, va), (kb, vb))| ka == kb && (va - vb).abs() < 1e-12)
}

fn generator_matches() -> wbell::Result<Verdict> {
    let g3 = zb_expression(&mabk_sign_function(3), 3)?;
    let g4 = zb_expression(&mabk_sign_function(4), 4)?;
    let (ok3, ok4) = (
        same_terms(&g3, &paper_b3_zb()),
        same_terms(&g4, &paper_b4_zb()),
    );
    verdict(
        ok3 && ok4,
        format!(
            "N=3 {} terms match: {ok3}, N=4 {} terms match: {ok4}",
            g3.terms().len(),
            g4.terms().len()
        ),
    )
}

fn source_matches() -> wbell::Result<Verdict> {
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        let built = apply_cascade(&build_cascade(n)?)?;
        let target = w_state(n)?;
        for (a, b) in built.amplitudes().iter().zip(target.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    verdict(
        worst < 1e-12,
        format!("N=2..12, max amplitude error {worst:.3e} < 1e-12"),
    )
}

fn disk(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::from_polar(
        r * rng.random::<f64>().sqrt(),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

fn draw(rng: &mut ChaCha8Rng) -> (usize, Vec<usize>, Vec<C64>) {
    let n = rng.random_range(2..=8);
    let m = rng.random_range(1..=n);
    let mut subset = rand::seq::index::sample(rng, n, m).into_vec();
    subset.sort_unstable();
    let alphas = (0..m).map(|_| disk(rng, 1.5)).collect();
    (n, subset, alphas)
}

fn property_suite() -> wbell::Result<Verdict> {
    const DRAWS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = [0usize; 5];
    for _ in 0..DRAWS {
        let (n, subset, alphas) = draw(&mut rng);
        let eta = rng.random_range(0.5..=1.0);
        let eff = Efficiency::new(eta)?;
        let base = MeasurementAssignment::subset(n, &subset, &alphas)?;
        let v = ClosedForm.correlation(&base, eff)?;

        // global phase, 1e-14
        let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let rotated: Vec<C64> = alphas.iter().map(|a| a * phase).collect();
        let vr =
            ClosedForm.correlation(&MeasurementAssignment::subset(n, &subset, &rotated)?, eff)?;
        failures[0] += usize::from((v - vr).abs() > 1e-14);

        // permutation of modes together with their displacements, 1e-14
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let mut entries = vec![None; n];
        for (mode, a) in base.measured() {
            entries[perm[mode]] = Some(a);
        }
        let vp = ClosedForm.correlation(&MeasurementAssignment::new(entries)?, eff)?;
        failures[1] += usize::from((v - vp).abs() > 1e-14);

        // |Pi| <= 1 at eta = 1
        let full: Vec<C64> = (0..n).map(|_| disk(&mut rng, 1.5)).collect();
        let ideal = full_correlation(&full)?;
        let ideal_sub = reduced_correlation(&base)?;
        failures[2] += usize::from(ideal.abs() > 1.0 + 1e-12 || ideal_sub.abs() > 1.0 + 1e-12);

        // the efficiency formulas reduce exactly at eta = 1
        let same = full_correlation_eta(&full, Efficiency::IDEAL)? == ideal
            && reduced_correlation_eta(&base, Efficiency::IDEAL)? == ideal_sub;
        failures[3] += usize::from(!same);

        // every mode measured at eta = 0.5 gives a non-negative correlator
        let half = full_correlation_eta(&full, Efficiency::new(0.5)?)?;
        failures[4] += usize::from(half < -1e-12);
    }
    let names = [
        "phase",
        "permutation",
        "|Pi|<=1",
        "eta=1 reduction",
        "eta=0.5 sign",
    ];
    let summary: Vec<String> = names
        .iter()
        .zip(failures)
        .map(|(n, f)| format!("{n} {f}"))
        .collect();
    verdict(
        failures.iter().all(|&f| f == 0),
        format!("{DRAWS} draws each, failures: {}", summary.join(", ")),
    )
}

type Check = fn() -> wbell::Result<Verdict>;

fn main() -> ExitCode {
    let criteria: [(&str, Check, Option<Duration>); 10] = [
        (
            "1 B'_3 at reference settings",
            b3_prime_value,
            Some(Duration::from_millis(1)),
        ),
        ("2 B_4 maximum", b4_value, Some(Duration::from_secs(10))),
        (
            "3 B_3 complex no-violation",
            b3_zb_no_violation,
            Some(Duration::from_secs(30)),
        ),
        (
            "4 efficiency threshold (fixed)",
            threshold_fixed,
            Some(Duration::from_secs(10)),
        ),
        (
            "4 efficiency threshold (re-opt)",
            threshold_reoptimized,
            Some(Duration::from_secs(300)),
        ),
        (
            "5 oracle equivalence",
            oracle_equivalence,
            Some(Duration::from_secs(60)),
        ),
        (
            "6 LHV bound certification",
            lhv_bounds,
            Some(Duration::from_secs(1)),
        ),
        (
            "7 generator vs transcription",
            generator_matches,
            Some(Duration::from_secs(1)),
        ),
        (
            "8 source correctness",
            source_matches,
            Some(Duration::from_secs(1)),
        ),
        ("9 property suite", property_suite, None),
    ];

    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let (ok, detail) = match result {
            Ok(v) => (v.ok && in_time, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = limit.map_or(String::new(), |l| format!(" / {l:?}"));
        println!(
            "{} criterion {name}: {detail} [{:.3?}{budget}]",
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
        failed += usize::from(!ok);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion line(s) failed");
        ExitCode::FAILURE
    }
}
