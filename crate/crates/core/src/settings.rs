//! Two displacement settings per mode, and their on-disk form.
//!
//! Files are JSON: `{"modes": [[[re, im], [re, im]], ...]}`, one entry per
//! mode holding setting 1 then setting 2 as `(re, im)` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingsMatrix {
    modes: Vec<[C64; 2]>,
}

impl SettingsMatrix {
    pub fn new(modes: Vec<[C64; 2]>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::TooFewModes(0));
        }
        Ok(Self { modes })
    }

    /// Every mode uses `first` for setting 1 and `second` for setting 2.
    pub fn symmetric(n_modes: usize, first: C64, second: C64) -> Result<Self> {
        Self::new(vec![[first, second]; n_modes])
    }

    pub fn zeros(n_modes: usize) -> Result<Self> {
        Self::symmetric(n_modes, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// `setting` is 0 or 1.
    pub fn get(&self, mode: usize, setting: usize) -> C64 {
        self.modes[mode][setting]
    }

    pub fn modes(&self) -> &[[C64; 2]] {
        &self.modes
    }

    pub fn max_abs(&self) -> f64 {
        self.modes
            .iter()
            .flatten()
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }

    /// Number of real parameters describing a matrix of `n_modes` modes.
    pub fn param_len(n_modes: usize, real_only: bool) -> usize {
        if real_only {
            2 * n_modes
        } else {
            4 * n_modes
        }
    }

    /// Parameter layout: `[re s1 (N), re s2 (N)]`, followed by `[im s1 (N), im s2 (N)]` when complex.
    pub fn from_params(n_modes: usize, params: &[f64], real_only: bool) -> Result<Self> {
        let expected = Self::param_len(n_modes, real_only);
        if params.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: params.len(),
            });
        }
        let im = |k: usize| {
            if real_only {
                0.0
            } else {
                params[2 * n_modes + k]
            }
        };
        let modes = (0..n_modes)
            .map(|j| {
                [
                    C64::new(params[j], im(j)),
                    C64::new(params[n_modes + j], im(n_modes + j)),
                ]
            })
            .collect();
        Self::new(modes)
    }

    pub fn to_params(&self, real_only: bool) -> Vec<f64> {
        let n = self.n_modes();
        let mut out: Vec<f64> = (0..2)
            .flat_map(|s| self.modes.iter().map(move |m| m[s].re))
            .collect();
        if !real_only {
            out.extend((0..2).flat_map(|s| self.modes.iter().map(move |m| m[s].im)));
        }
        debug_assert_eq!(out.len(), Self::param_len(n, real_only));
        out
    }

    /// Radially clamps every amplitude into the disk `|alpha| <= alpha_max`.
    pub fn projected(&self, alpha_max: f64) -> Self {
        let clamp = |a: C64| {
            let r = a.norm();
            if r > alpha_max {
                a * (alpha_max / r)
            } else {
                a
            }
        };
        Self {
            modes: self
                .modes
                .iter()
                .map(|m| [clamp(m[0]), clamp(m[1])])
                .collect(),
        }
    }

    /// Reads a settings file, or the `best_settings` of a saved optimization run.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let body = match value.pointer("/results/best_settings") {
            Some(inner) if value.get("modes").is_none() => inner.clone(),
            _ => value,
        };
        let parsed: Self = serde_json::from_value(body)?;
        Self::new(parsed.modes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
