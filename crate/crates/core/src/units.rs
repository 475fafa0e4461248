//! Conversions between angular frequency and "Hz (÷2π)" at the I/O boundary.

use std::f64::consts::TAU;

/// `f` in Hz → angular frequency in rad/s.
#[inline]
pub fn hz_to_rad(f_hz: f64) -> f64 {
    TAU * f_hz
}

/// Angular frequency in rad/s → Hz.
#[inline]
pub fn rad_to_hz(omega: f64) -> f64 {
    omega / TAU
}

pub const MICRO: f64 = 1e-6;
pub const NANO: f64 = 1e-9;

/// kg/μm² → kg/m².
pub const KG_PER_UM2: f64 = 1e12;
