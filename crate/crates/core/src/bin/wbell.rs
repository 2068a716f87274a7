//! Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde::Serialize;

use wbell::correlators::{
    ClosedForm, CorrelationBackend, Efficiency, FockOracle, MeasurementAssignment,
};
use wbell::inequalities::{by_name, enumerate_lhv_bound};
use wbell::optimizer::{eta_threshold, maximize, MaximizeConfig, ThresholdConfig};
use wbell::report::{self, write_document, ReproduceOptions};
use wbell::settings::SettingsMatrix;
use wbell::source::{apply_cascade, build_cascade};
use wbell::Error;

#[derive(Parser)]
#[command(
    name = "wbell",
    version,
    about = "Displaced-parity Bell tests on W states"
)]
struct Cli {
    /// Write a JSON document with the full config and results here.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Random seed for optimizer restarts and oracle draws.
    #[arg(long, global = true, env = "WBELL_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the beam-splitter cascade and its output state.
    Source(SourceArgs),
    /// Evaluate one correlator.
    Correlate(CorrelateArgs),
    /// Evaluate a Bell expression at given settings.
    BellEval(BellEvalArgs),
    /// Enumerate the local-hidden-variable bound.
    BellBound(IneqArgs),
    /// Maximize a Bell expression over displacement settings.
    Optimize(OptimizeArgs),
    /// Bisect the detector efficiency where the violation disappears.
    Threshold(ThresholdArgs),
    /// Compare closed-form correlators with the Fock-space brute force.
    VerifyOracle(VerifyArgs),
    /// Re-run the headline numbers and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Serialize)]
struct SourceArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Args, Serialize)]
struct CorrelateArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated displacements, each `re` or `re:im`; one per measured mode.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
    alphas: Vec<C64>,
    /// Zero-based measured modes (default: all).
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long)]
    check_oracle: bool,
}

#[derive(Args, Serialize)]
struct IneqArgs {
    /// b3zb, b3prime, b4zb or mabk:N
    #[arg(long)]
    ineq: String,
}

#[derive(Args, Serialize)]
struct BellEvalArgs {
    #[arg(long)]
    ineq: String,
    /// JSON settings file (or a saved optimize run).
    #[arg(long)]
    settings: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
}

#[derive(Args, Serialize)]
struct OptimizeArgs {
    #[arg(long)]
    ineq: String,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Search complex displacements instead of real ones.
    #[arg(long)]
    complex: bool,
    #[arg(long, default_value_t = 2.0)]
    alpha_max: f64,
}

#[derive(Args, Serialize)]
struct ThresholdArgs {
    #[arg(long)]
    ineq: String,
    /// Re-maximize over settings at every efficiency.
    #[arg(long)]
    reoptimize: bool,
    /// Fixed settings (default: the reference optimum for b3prime / b4zb, else the eta=1 optimum).
    #[arg(long)]
    settings: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-4)]
    eta_tol: f64,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

#[derive(Args, Serialize)]
struct ReproduceArgs {
    /// Evaluate the B' row at this efficiency.
    #[arg(long)]
    eta: Option<f64>,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match s.split_once(':') {
        Some((re, im)) => Ok(C64::new(num(re)?, num(im)?)),
        None => Ok(C64::new(num(s)?, 0.0)),
    }
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn emit<C: Serialize, R: Serialize>(
    cli_output: &Option<PathBuf>,
    command: &str,
    config: &C,
    results: &R,
) -> wbell::Result<()> {
    if let Some(path) = cli_output {
        write_document(path, command, config, results)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WithSeed<'a, A> {
    seed: u64,
    #[serde(flatten)]
    args: &'a A,
}

fn run(cli: &Cli) -> wbell::Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Source(args) => {
            let spec = build_cascade(args.n)?;
            let state = apply_cascade(&spec)?;
            println!(
                "{:>5} {:>5} {:>5} {:>12} {:>12}",
                "stage", "exit", "carry", "T", "R"
            );
            for (k, s) in spec.stages().iter().enumerate() {
                println!(
                    "{:>5} {:>5} {:>5} {:>12.9} {:>12.9}",
                    k + 1,
                    s.exit_mode,
                    s.carry_mode,
                    s.transmittance,
                    s.reflectivity()
                );
            }
            println!("amplitudes:");
            for (j, a) in state.amplitudes().iter().enumerate() {
                println!("  mode {j}: {:.12} {:+.12}i", a.re, a.im);
            }
            #[derive(Serialize)]
            struct Out<'a> {
                stages: Vec<(f64, f64)>,
                amplitudes: &'a [C64],
            }
            let out = Out {
                stages: spec
                    .stages()
                    .iter()
                    .map(|s| (s.transmittance, s.reflectivity()))
                    .collect(),
                amplitudes: state.amplitudes(),
            };
            emit(&cli.output, "source", args, &out)?;
            Ok(Outcome::Pass)
        }
        Command::Correlate(args) => {
            let subset: Vec<usize> = args.subset.clone().unwrap_or_else(|| (0..args.n).collect());
            let assignment = MeasurementAssignment::subset(args.n, &subset, &args.alphas)?;
            let eff = Efficiency::new(args.eta)?;
            let value = ClosedForm.correlation(&assignment, eff)?;
            println!("closed form: {value:.15}");
            let mut outcome = Outcome::Pass;
            let oracle = if args.check_oracle {
                let o = FockOracle::w(args.n)?.correlation(&assignment, eff)?;
                let diff = (value - o).abs();
                println!("oracle:      {o:.15}");
                println!("difference:  {diff:.3e}");
                if diff >= report::ORACLE_TOL {
                    outcome = Outcome::CheckFailed;
                }
                Some(o)
            } else {
                None
            };
            #[derive(Serialize)]
            struct Out {
                value: f64,
                oracle: Option<f64>,
            }
            emit(&cli.output, "correlate", args, &Out { value, oracle })?;
            Ok(outcome)
        }
        Command::BellEval(args) => {
            let expr = by_name(&args.ineq)?;
            let settings = SettingsMatrix::load(&args.settings)?;
            let value = expr.evaluate(&settings, Efficiency::new(args.eta)?)?;
            let bound = expr.classical_bound();
            println!("{}: value {value:.10} (local bound {bound})", expr.name());
            println!(
                "{}",
                if value > bound {
                    "violation"
                } else {
                    "no violation"
                }
            );
            #[derive(Serialize)]
            struct Out<'a> {
                value: f64,
                classical_bound: f64,
                settings: &'a SettingsMatrix,
            }
            emit(
                &cli.output,
                "bell-eval",
                args,
                &Out {
                    value,
                    classical_bound: bound,
                    settings: &settings,
                },
            )?;
            Ok(Outcome::Pass)
        }
        Command::BellBound(args) => {
            let expr = by_name(&args.ineq)?;
            let lhv = enumerate_lhv_bound(&expr)?;
            println!(
                "{}: enumerated LHV bound {lhv} (stated {})",
                expr.name(),
                expr.classical_bound()
            );
            emit(&cli.output, "bell-bound", args, &lhv)?;
            Ok(if (lhv - expr.classical_bound()).abs() < 1e-12 {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
        Command::Optimize(args) => {
            let expr = by_name(&args.ineq)?;
            let cfg = MaximizeConfig {
                restarts: args.restarts,
                seed,
                alpha_max: args.alpha_max,
                real_only: !args.complex,
                ..Default::default()
            };
            let r = maximize(&expr, Efficiency::new(args.eta)?, &cfg)?;
            println!(
                "{}: best value {:.10} (local bound {})",
                expr.name(),
                r.best_value,
                expr.classical_bound()
            );
            println!(
                "restarts {} (converged {}), evaluations {}, best restart {}, seed {}",
                r.restarts, r.converged_restarts, r.evaluations, r.best_restart, r.seed
            );
            for (j, m) in r.best_settings.modes().iter().enumerate() {
                println!(
                    "  mode {j}: setting1 {:+.9}{:+.9}i  setting2 {:+.9}{:+.9}i",
                    m[0].re, m[0].im, m[1].re, m[1].im
                );
            }
            emit(&cli.output, "optimize", &WithSeed { seed, args }, &r)?;
            Ok(Outcome::Pass)
        }
        Command::Threshold(args) => {
            let expr = by_name(&args.ineq)?;
            let mc = MaximizeConfig {
                restarts: args.restarts,
                seed,
                ..Default::default()
            };
            let mut cfg = if args.reoptimize {
                ThresholdConfig::reoptimize(mc)
            } else {
                let settings = match (&args.settings, expr.name()) {
                    (Some(p), _) => SettingsMatrix::load(p)?,
                    (None, "b3prime") => report::b3_prime_settings(),
                    (None, "b4zb") => report::b4_settings(),
                    (None, _) => maximize(&expr, Efficiency::IDEAL, &mc)?.best_settings,
                };
                ThresholdConfig::fixed(settings)
            };
            cfg.eta_tol = args.eta_tol;
            let r = match eta_threshold(&expr, &cfg) {
                Ok(r) => r,
                Err(
                    e @ (Error::NoViolation { .. }
                    | Error::NonMonotone { .. }
                    | Error::ThresholdBelowBracket { .. }),
                ) => {
                    eprintln!("threshold undefined: {e}");
                    return Ok(Outcome::CheckFailed);
                }
                Err(e) => return Err(e),
            };
            println!(
                "{:>10} {:>10} {:>10} {:>14}",
                "lo", "hi", "mid", "value-bound"
            );
            for s in &r.trace {
                println!(
                    "{:>10.6} {:>10.6} {:>10.6} {:>+14.8}",
                    s.lo, s.hi, s.mid, s.excess
                );
            }
            println!(
                "eta* = {:.6} ({})",
                r.eta_star,
                if args.reoptimize {
                    "re-optimized"
                } else {
                    "fixed settings"
                }
            );
            emit(&cli.output, "threshold", &WithSeed { seed, args }, &r)?;
            Ok(Outcome::Pass)
        }
        Command::VerifyOracle(args) => {
            let r = report::verify_oracle(args.trials, seed)?;
            println!(
                "{} trials, max |closed form - oracle| = {:.3e} (tolerance {:.0e})",
                r.trials, r.max_deviation, r.tolerance
            );
            println!(
                "worst: N={} subset={:?} eta={} closed={:.15} oracle={:.15}",
                r.worst.n_modes, r.worst.subset, r.worst.eta, r.worst.closed_form, r.worst.oracle
            );
            println!("{}", if r.passed() { "PASS" } else { "FAIL" });
            emit(&cli.output, "verify-oracle", &WithSeed { seed, args }, &r)?;
            Ok(if r.passed() {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
        Command::Reproduce(args) => {
            let opts = ReproduceOptions {
                seed,
                eta_override: args.eta,
                ..Default::default()
            };
            let r = report::reproduce(&opts)?;
            print!("{r}");
            emit(&cli.output, "reproduce", &opts, &r)?;
            Ok(if r.all_passed() {
                Outcome::Pass
            } else {
                Outcome::CheckFailed
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
