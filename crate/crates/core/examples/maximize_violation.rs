//! Multi-start Nelder-Mead over displacement settings. Restarts run in
//! parallel but each has its own seeded stream, so results are identical
//! across thread counts.
//!
//! ```bash
//! cargo run --release --example maximize_violation -- b4zb 0.95
//! ```

use wbell::correlators::Efficiency;
use wbell::inequalities::by_name;
use wbell::optimizer::{maximize, MaximizeConfig};

fn main() -> wbell::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "b4zb".into());
    let eta: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1.0);

    let expr = by_name(&name)?;
    let cfg = MaximizeConfig {
        restarts: 100,
        seed: 1,
        ..Default::default()
    };
    let r = maximize(&expr, Efficiency::new(eta)?, &cfg)?;
    println!(
        "{name} at eta={eta}: max {:.8} vs local bound {} ({} of {} restarts converged)",
        r.best_value,
        expr.classical_bound(),
        r.converged_restarts,
        r.restarts
    );
    for (j, m) in r.best_settings.modes().iter().enumerate() {
        println!("  mode {j}: {:+.6}  {:+.6}", m[0].re, m[1].re);
    }
    Ok(())
}
