//! Dissipative optomechanics of a single-layer graphene membrane suspended
//! near a node of a Fabry-Pérot cavity field.
//!
//! The pipeline runs geometry → absorptive decay rate κ_e(x₀) → self-consistent
//! intracavity steady state → linearized quantum Langevin dynamics → steady-state
//! phonon occupancy → optimal-cooling sweeps.
//!
//! All quantities are SI internally and every frequency is angular (rad/s).
//! Helpers in [`units`] convert to and from "Hz (÷2π)" at the I/O boundary.

pub mod cavity;
pub mod cli;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod membrane;
pub mod model;
pub mod output;
pub mod par;
pub mod response;
pub mod spectrum;
pub mod sweep;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;
