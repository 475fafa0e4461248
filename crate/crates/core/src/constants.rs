//! Physical constants (CODATA 2018, SI).

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;
/// Fine-structure constant.
pub const ALPHA: f64 = 7.297_352_569_3e-3;

/// Graphene Fermi velocity relative to the speed of light.
pub const FERMI_VELOCITY_RATIO: f64 = 1.0 / 300.0;

/// Single-pass absorbance of clean, undoped graphene (πα ≈ 2.3%).
pub const UNIVERSAL_ABSORBANCE: f64 = std::f64::consts::PI * ALPHA;
