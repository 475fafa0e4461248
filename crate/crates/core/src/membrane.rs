//! Fundamental flexural mode of a suspended circular graphene sheet.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::constants::{HBAR, K_B};
use crate::error::{non_negative, positive, Error, Result};
use crate::units::{hz_to_rad, KG_PER_UM2, MICRO};

/// First zero of J0 divided by π, i.e. the prefactor of the lowest radially
/// symmetric mode of a circular membrane under tension.
pub const FUNDAMENTAL_MODE_FACTOR: f64 = 0.766;

/// Effective mass of the fundamental mode as a fraction of the membrane mass.
pub const EFFECTIVE_MASS_FRACTION: f64 = 0.27;

pub const MIN_STRAIN: f64 = 1e-4;
pub const MAX_STRAIN: f64 = 0.1;

/// Geometry, material and environment of the membrane (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembraneSpec {
    /// Diameter D (m).
    pub diameter: f64,
    /// Strain ξ (dimensionless).
    pub strain: f64,
    /// Two-dimensional elastic stiffness Ẽ (N/m).
    pub stiffness_2d: f64,
    /// Areal mass density ρ (kg/m²).
    pub areal_density: f64,
    /// Intrinsic mechanical damping γ_m (rad/s).
    pub intrinsic_damping: f64,
    /// Bath temperature T (K).
    pub temperature: f64,
}

impl Default for MembraneSpec {
    /// 30 μm sheet at 1% strain, measured graphene constants, 0.26 K bath.
    fn default() -> Self {
        Self {
            diameter: 30.0 * MICRO,
            strain: 0.01,
            stiffness_2d: 340.0,
            areal_density: 7.4e-19 * KG_PER_UM2,
            intrinsic_damping: hz_to_rad(10.0),
            temperature: 0.26,
        }
    }
}

impl MembraneSpec {
    pub fn validate(&self) -> Result<()> {
        positive("diameter", self.diameter)?;
        positive("stiffness_2d", self.stiffness_2d)?;
        positive("areal_density", self.areal_density)?;
        non_negative("intrinsic_damping", self.intrinsic_damping)?;
        non_negative("temperature", self.temperature)?;
        if !(MIN_STRAIN..=MAX_STRAIN).contains(&self.strain) {
            return Err(Error::domain(
                "strain",
                self.strain,
                "must lie in [1e-4, 0.1]",
            ));
        }
        Ok(())
    }

    /// Total mass of the suspended disc (kg).
    pub fn mass(&self) -> f64 {
        self.areal_density * PI * (self.diameter / 2.0).powi(2)
    }
}

/// The fundamental mode treated as a harmonic oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalMode {
    /// ω_m (rad/s).
    pub omega_m: f64,
    /// Effective mass (kg).
    pub m_eff: f64,
    /// Zero-point amplitude X_ZPF (m).
    pub x_zpf: f64,
    /// Thermal occupancy at the bath temperature.
    pub n_th: f64,
}

impl MechanicalMode {
    pub fn from_spec(spec: &MembraneSpec) -> Result<Self> {
        spec.validate()?;
        let omega_m = fundamental_frequency(spec)?;
        let m_eff = effective_mass(spec)?;
        Ok(Self {
            omega_m,
            m_eff,
            x_zpf: zero_point_amplitude(omega_m, m_eff)?,
            n_th: thermal_occupancy(spec.temperature, omega_m)?,
        })
    }

    /// Same mode with ω_m and n_th replaced by directly specified values;
    /// X_ZPF is recomputed for the new frequency.
    pub fn with_overrides(self, omega_m: Option<f64>, n_th: Option<f64>) -> Result<Self> {
        let omega_m = positive("omega_m", omega_m.unwrap_or(self.omega_m))?;
        let n_th = non_negative("n_th", n_th.unwrap_or(self.n_th))?;
        Ok(Self {
            omega_m,
            m_eff: self.m_eff,
            x_zpf: zero_point_amplitude(omega_m, self.m_eff)?,
            n_th,
        })
    }
}

/// ω_m = 2π · 0.766 · √(Ẽξ/ρ) / D.
pub fn fundamental_frequency(spec: &MembraneSpec) -> Result<f64> {
    let d = positive("diameter", spec.diameter)?;
    let e = positive("stiffness_2d", spec.stiffness_2d)?;
    let xi = positive("strain", spec.strain)?;
    let rho = positive("areal_density", spec.areal_density)?;
    Ok(TAU * FUNDAMENTAL_MODE_FACTOR * (e * xi / rho).sqrt() / d)
}

/// 0.27 × the membrane mass.
pub fn effective_mass(spec: &MembraneSpec) -> Result<f64> {
    positive("diameter", spec.diameter)?;
    positive("areal_density", spec.areal_density)?;
    Ok(EFFECTIVE_MASS_FRACTION * spec.mass())
}

/// X_ZPF = √(ħ / (2 m_eff ω_m)).
pub fn zero_point_amplitude(omega_m: f64, m_eff: f64) -> Result<f64> {
    let w = positive("omega_m", omega_m)?;
    let m = positive("m_eff", m_eff)?;
    Ok((HBAR / (2.0 * m * w)).sqrt())
}

/// Bose-Einstein occupancy 1/(exp(ħω/k_BT) − 1); exactly zero at T = 0.
pub fn thermal_occupancy(temperature: f64, omega: f64) -> Result<f64> {
    let t = non_negative("temperature", temperature)?;
    let w = positive("omega", omega)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * w / (K_B * t);
    Ok(1.0 / x.exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(a.abs())
    }

    #[test]
    fn reference_membrane_is_near_55_mhz() {
        let w = fundamental_frequency(&MembraneSpec::default()).unwrap();
        let f = w / TAU;
        assert!((f - 55e6).abs() / 55e6 < 0.02, "f = {f}");
    }

    #[test]
    fn diameter_scaling() {
        let base = MembraneSpec::default();
        let w30 = fundamental_frequency(&base).unwrap();
        let w60 = fundamental_frequency(&MembraneSpec {
            diameter: 60.0 * MICRO,
            ..base
        })
        .unwrap();
        let w10 = fundamental_frequency(&MembraneSpec {
            diameter: 10.0 * MICRO,
            ..base
        })
        .unwrap();
        assert!(close(w60, w30 / 2.0, 1e-15));
        // Direct evaluation of the formula for D = 10 μm.
        let direct = 2.0 * PI * 0.766 * (340.0_f64 * 0.01 / 7.4e-7).sqrt() / 10e-6;
        assert!(close(w10, direct, 1e-14));
        assert!(close(w10, 3.0 * w30, 1e-14));
    }

    #[test]
    fn nonpositive_inputs_are_rejected() {
        let base = MembraneSpec::default();
        for bad in [
            MembraneSpec {
                diameter: 0.0,
                ..base
            },
            MembraneSpec {
                stiffness_2d: -1.0,
                ..base
            },
            MembraneSpec {
                strain: 0.0,
                ..base
            },
            MembraneSpec {
                areal_density: 0.0,
                ..base
            },
        ] {
            assert!(matches!(
                fundamental_frequency(&bad),
                Err(Error::Domain { .. })
            ));
        }
        assert!(effective_mass(&MembraneSpec {
            areal_density: -1.0,
            ..base
        })
        .is_err());
        assert!(zero_point_amplitude(0.0, 1e-16).is_err());
        assert!(zero_point_amplitude(1.0, -1e-16).is_err());
        assert!(thermal_occupancy(-1.0, 1.0).is_err());
        assert!(thermal_occupancy(1.0, 0.0).is_err());
    }

    #[test]
    fn strain_range_is_validated() {
        let base = MembraneSpec::default();
        assert!(MembraneSpec {
            strain: 0.2,
            ..base
        }
        .validate()
        .is_err());
        assert!(MembraneSpec {
            strain: 5e-5,
            ..base
        }
        .validate()
        .is_err());
        assert!(MembraneSpec {
            strain: 1e-4,
            ..base
        }
        .validate()
        .is_ok());
        assert!(MembraneSpec {
            strain: 0.1,
            ..base
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn effective_mass_of_reference_membrane() {
        let spec = MembraneSpec::default();
        let m = effective_mass(&spec).unwrap();
        // 0.27 * 7.4e-7 kg/m^2 * π (15e-6 m)^2
        let direct = 0.27 * 7.4e-7 * PI * (15e-6_f64).powi(2);
        assert!(close(m, direct, 1e-14));
        assert!(close(m, 1.41e-16, 0.01), "m_eff = {m:e}");
        assert!(close(m / spec.mass(), 0.27, 1e-15));
        let tiny = effective_mass(&MembraneSpec {
            areal_density: 1e-300,
            ..spec
        })
        .unwrap();
        assert!(tiny < 1e-300);
    }

    #[test]
    fn zero_point_amplitude_values() {
        let w = hz_to_rad(55e6);
        let x = zero_point_amplitude(w, 1.41e-16).unwrap();
        let direct = (1.054_571_817e-34 / (2.0 * 1.41e-16 * w)).sqrt();
        assert!(close(x, direct, 1e-15));
        assert!(close(x, 3.3e-14, 0.02), "x_zpf = {x:e}");
        let x4 = zero_point_amplitude(w, 4.0 * 1.41e-16).unwrap();
        assert!(close(x4, x / 2.0, 1e-15));
    }

    #[test]
    fn thermal_anchor_and_limits() {
        let n = thermal_occupancy(0.26, hz_to_rad(55e6)).unwrap();
        assert!((n - 100.0).abs() / 100.0 < 0.05, "n_th = {n}");
        assert_eq!(thermal_occupancy(0.0, 1e9).unwrap(), 0.0);
        // Classical limit k_B T / ħω = 50.
        let w = 1e9;
        let t = 50.0 * HBAR * w / K_B;
        let n = thermal_occupancy(t, w).unwrap();
        assert!(close(n, 50.0, 0.01));
    }

    #[test]
    fn mode_from_default_spec() {
        let mode = MechanicalMode::from_spec(&MembraneSpec::default()).unwrap();
        assert!(mode.omega_m > 0.0 && mode.m_eff > 0.0 && mode.x_zpf > 0.0 && mode.n_th > 0.0);
        let cold = MechanicalMode::from_spec(&MembraneSpec {
            temperature: 0.0,
            ..MembraneSpec::default()
        })
        .unwrap();
        assert_eq!(cold.n_th, 0.0);
        let o = mode
            .with_overrides(Some(hz_to_rad(55e6)), Some(100.0))
            .unwrap();
        assert_eq!(o.n_th, 100.0);
        assert!(close(
            o.x_zpf.powi(2) * 2.0 * o.m_eff * o.omega_m,
            HBAR,
            1e-14
        ));
    }

    fn spec_strategy() -> impl Strategy<Value = MembraneSpec> {
        (
            1e-6..1e-4f64,
            1e-4..0.1f64,
            100.0..500.0f64,
            1e-7..1e-5f64,
            0.0..10.0f64,
        )
            .prop_map(|(d, xi, e, rho, t)| MembraneSpec {
                diameter: d,
                strain: xi,
                stiffness_2d: e,
                areal_density: rho,
                intrinsic_damping: 10.0,
                temperature: t,
            })
    }

    proptest! {
        #[test]
        fn hbar_closure(spec in spec_strategy()) {
            let mode = MechanicalMode::from_spec(&spec).unwrap();
            let lhs = mode.x_zpf.powi(2) * 2.0 * mode.m_eff * mode.omega_m;
            prop_assert!(close(lhs, HBAR, 1e-13));
        }

        #[test]
        fn frequency_times_diameter_is_invariant(spec in spec_strategy(), scale in 0.1..10.0f64) {
            let w1 = fundamental_frequency(&spec).unwrap();
            let w2 = fundamental_frequency(&MembraneSpec { diameter: spec.diameter * scale, ..spec }).unwrap();
            prop_assert!(close(w1 * spec.diameter, w2 * spec.diameter * scale, 1e-13));
        }

        #[test]
        fn frequency_goes_as_sqrt_strain(spec in spec_strategy()) {
            let xi = spec.strain.min(0.05);
            let w1 = fundamental_frequency(&MembraneSpec { strain: xi, ..spec }).unwrap();
            let w2 = fundamental_frequency(&MembraneSpec { strain: 2.0 * xi, ..spec }).unwrap();
            prop_assert!(close(w2, w1 * 2f64.sqrt(), 1e-14));
        }

        #[test]
        fn occupancy_is_monotone(t in 0.01..10.0f64, dt in 0.001..1.0f64, w in 1e6..1e10f64, dw in 1.001..2.0f64) {
            let n = thermal_occupancy(t, w).unwrap();
            prop_assert!(thermal_occupancy(t + dt, w).unwrap() > n);
            prop_assert!(thermal_occupancy(t, w * dw).unwrap() < n);
        }
    }
}
