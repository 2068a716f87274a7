//! W-state preparation by a cascade of beam splitters.
//!
//! The photon enters on the last mode (the "carry" rail). Stage `k` taps
//! mode `k` off the rail with reflectivity `1/(N-k)`, so after `N-1`
//! stages every mode holds amplitude `1/sqrt(N)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{beam_splitter_single_photon, SinglePhotonState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeStage {
    /// Mode that receives the reflected amplitude and leaves the cascade.
    pub exit_mode: usize,
    /// Mode carrying the transmitted amplitude to the next stage.
    pub carry_mode: usize,
    pub transmittance: f64,
}

impl CascadeStage {
    pub fn reflectivity(&self) -> f64 {
        1.0 - self.transmittance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSpec {
    n_modes: usize,
    stages: Vec<CascadeStage>,
}

impl CascadeSpec {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn stages(&self) -> &[CascadeStage] {
        &self.stages
    }

    pub fn input_mode(&self) -> usize {
        self.n_modes - 1
    }
}

pub fn w_state(n_modes: usize) -> Result<SinglePhotonState> {
    if n_modes < 2 {
        return Err(Error::TooFewModes(n_modes));
    }
    let a = 1.0 / (n_modes as f64).sqrt();
    SinglePhotonState::new(vec![C64::new(a, 0.0); n_modes])
}

pub fn build_cascade(n_modes: usize) -> Result<CascadeSpec> {
    if n_modes < 2 {
        return Err(Error::TooFewModes(n_modes));
    }
    let carry = n_modes - 1;
    let stages = (0..n_modes - 1)
        .map(|k| {
            let remaining = (n_modes - k) as f64;
            CascadeStage {
                exit_mode: k,
                carry_mode: carry,
                transmittance: (remaining - 1.0) / remaining,
            }
        })
        .collect();
    Ok(CascadeSpec { n_modes, stages })
}

pub fn apply_cascade(spec: &CascadeSpec) -> Result<SinglePhotonState> {
    let mut amp = vec![0.0_f64; spec.n_modes];
    amp[spec.input_mode()] = 1.0;
    for stage in &spec.stages {
        let u = beam_splitter_single_photon(stage.transmittance)?;
        let (x, y) = (amp[stage.exit_mode], amp[stage.carry_mode]);
        amp[stage.exit_mode] = u[0][0] * x + u[0][1] * y;
        amp[stage.carry_mode] = u[1][0] * x + u[1][1] * y;
    }
    SinglePhotonState::new(amp.into_iter().map(|a| C64::new(a, 0.0)).collect())
}
