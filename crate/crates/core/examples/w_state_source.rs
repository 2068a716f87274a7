//! Builds the beam-splitter cascade that spreads one photon over N rails and
//! checks the output against the ideal W state.
//!
//! ```bash
//! cargo run --example w_state_source -- 5
//! ```

use wbell::source::{apply_cascade, build_cascade, w_state};

fn main() -> wbell::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let spec = build_cascade(n)?;
    println!("photon enters on mode {}", spec.input_mode());
    for s in spec.stages() {
        println!(
            "  tap mode {} from carry rail {}: T = {:.6}, R = {:.6}",
            s.exit_mode,
            s.carry_mode,
            s.transmittance,
            s.reflectivity()
        );
    }
    let out = apply_cascade(&spec)?;
    let ideal = w_state(n)?;
    let err = out
        .amplitudes()
        .iter()
        .zip(ideal.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!(
        "each amplitude = {:.12}, max error vs 1/sqrt(N): {err:.2e}",
        out.amplitudes()[0].re
    );
    Ok(())
}
