//! Coarse symmetric grid scan, then a local refinement started from the
//! best grid point.

use wbell::correlators::Efficiency;
use wbell::inequalities::paper_b3_prime;
use wbell::optimizer::{grid_scan, maximize, GridConfig, MaximizeConfig};

fn main() -> wbell::Result<()> {
    let expr = paper_b3_prime();
    let grid = grid_scan(
        &expr,
        Efficiency::IDEAL,
        &GridConfig {
            grid_points: 101,
            ..Default::default()
        },
    )?;
    let [a1, a2] = grid.settings.modes()[0];
    println!(
        "grid ({} points): {:.6} at ({:+.4}, {:+.4})",
        grid.points, grid.value, a1.re, a2.re
    );

    let refined = maximize(
        &expr,
        Efficiency::IDEAL,
        &MaximizeConfig {
            restarts: 1,
            warm_start: Some(grid.settings.clone()),
            ..Default::default()
        },
    )?;
    let [a1, a2] = refined.best_settings.modes()[0];
    println!(
        "refined: {:.8} at ({:+.6}, {:+.6})",
        refined.best_value, a1.re, a2.re
    );
    Ok(())
}
