//! Displaced-parity Bell tests for N-mode single-photon W states.
//!
//! A single photon split over `N` modes by a beam-splitter cascade is probed
//! on every mode by a coherent displacement followed by photon-number parity.
//! The crate provides:
//!
//! - [`source`]: the cascade and the W state it produces;
//! - [`fock`]: a truncated Fock-space brute force for any correlator;
//! - [`correlators`]: closed forms for full, reduced and inefficient-detector correlators;
//! - [`inequalities`]: two-setting Bell expressions, the cosine-sign (MABK) generator,
//!   and local-hidden-variable bound enumeration;
//! - [`optimizer`]: multi-start simplex maximization, grid scans and the
//!   detector-efficiency threshold;
//! - [`report`]: end-to-end reproduction and oracle verification runs.
//!
//! ```
//! use num_complex::Complex64;
//! use wbell::{correlators::Efficiency, inequalities, settings::SettingsMatrix};
//!
//! let expr = inequalities::paper_b3_prime();
//! let s = SettingsMatrix::symmetric(3, Complex64::new(0.471669, 0.0), Complex64::new(-0.0205849, 0.0)).unwrap();
//! let value = expr.evaluate(&s, Efficiency::IDEAL).unwrap();
//! assert!(value > expr.classical_bound());
//! ```

pub mod correlators;
pub mod error;
pub mod fock;
pub mod inequalities;
pub mod optimizer;
pub mod report;
pub mod settings;
pub mod simplex;
pub mod source;

pub use error::{Error, Result};
