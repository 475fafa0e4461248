//! A fully resolved operating point and its linearization.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cavity::CavitySpec;
use crate::dynamics::LinearizedSystem;
use crate::error::{non_negative, positive, Result};
use crate::membrane::{MechanicalMode, MembraneSpec};
use crate::response::{effective_couplings, steady_state, DriveSpec, SteadyState};
use crate::units::hz_to_rad;

/// Everything needed to build the linearized fluctuation dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub mode: MechanicalMode,
    /// γ_m (rad/s).
    pub gamma_m: f64,
    /// κ_c (rad/s).
    pub kappa_c: f64,
    /// κ_e (rad/s).
    pub kappa_e: f64,
    pub eta_kappa: f64,
    /// A_eff/A.
    pub area_ratio: f64,
    /// ω_cav (rad/s).
    pub omega_cav: f64,
    /// P (W).
    pub power: f64,
    /// Δ = ω_cav − ω_p (rad/s).
    pub detuning: f64,
}

impl OperatingPoint {
    /// Damping-curve parameter block: P = 5 μW, D = 30 μm, A_eff/A = 0.01,
    /// ω_m = 2π×55 MHz, κ_c = 2π×1 MHz, κ_e = 2π×45 MHz, η_κ = 2.2e-3, Δ = 0.
    pub fn damping_preset() -> Self {
        let membrane = MembraneSpec::default();
        let mode = MechanicalMode::from_spec(&membrane)
            .and_then(|m| m.with_overrides(Some(hz_to_rad(55e6)), Some(100.0)))
            .expect("default membrane is valid");
        Self {
            mode,
            gamma_m: membrane.intrinsic_damping,
            kappa_c: hz_to_rad(1e6),
            kappa_e: hz_to_rad(45e6),
            eta_kappa: 2.2e-3,
            area_ratio: 0.01,
            omega_cav: CavitySpec::default().omega_cav(),
            power: 5e-6,
            detuning: 0.0,
        }
    }

    /// Phonon-map parameter block: as [`Self::damping_preset`] with
    /// A_eff/A = 0.1, γ_m = 2π×10 Hz and n_th = 100.
    pub fn phonon_map_preset() -> Self {
        Self {
            area_ratio: 0.1,
            ..Self::damping_preset()
        }
    }

    /// Optimal-cooling parameter block: γ_m = π×10 Hz, n_th = 100.
    pub fn optimal_cooling_preset() -> Self {
        Self {
            gamma_m: PI * 10.0,
            ..Self::phonon_map_preset()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_m", self.mode.omega_m)?;
        positive("x_zpf", self.mode.x_zpf)?;
        non_negative("n_th", self.mode.n_th)?;
        positive("gamma_m", self.gamma_m)?;
        positive("kappa_c", self.kappa_c)?;
        non_negative("kappa_e", self.kappa_e)?;
        non_negative("power", self.power)?;
        positive("omega_cav", self.omega_cav)?;
        if !self.eta_kappa.is_finite() {
            return Err(crate::Error::domain(
                "eta_kappa",
                self.eta_kappa,
                "must be finite",
            ));
        }
        Ok(())
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        Self { detuning, ..self }
    }

    pub fn with_power(self, power: f64) -> Self {
        Self { power, ..self }
    }

    pub fn with_kappa_e(self, kappa_e: f64) -> Self {
        Self { kappa_e, ..self }
    }

    pub fn drive(&self) -> Result<DriveSpec> {
        DriveSpec::new(self.power, self.omega_cav, self.detuning, self.kappa_c)
    }

    pub fn steady_state(&self) -> Result<(DriveSpec, SteadyState)> {
        self.validate()?;
        let drive = self.drive()?;
        let ss = steady_state(&drive, self.kappa_c, self.kappa_e, self.area_ratio)?;
        Ok((drive, ss))
    }

    /// Solves the mean fields and collects the coefficients of the
    /// linearized fluctuation equations.
    pub fn linearize(&self) -> Result<LinearizedSystem> {
        let (drive, ss) = self.steady_state()?;
        let c = effective_couplings(&ss, self.eta_kappa, self.kappa_e, self.area_ratio)?;
        Ok(LinearizedSystem {
            detuning: self.detuning,
            kappa_c: self.kappa_c,
            kappa_e: self.kappa_e,
            kappa: self.kappa_c + self.kappa_e,
            omega_m: self.mode.omega_m,
            gamma_m: self.gamma_m,
            n_th: self.mode.n_th,
            g: c.g,
            g_e: c.g_e,
            drive_amplitude: drive.amplitude,
            sigma_bar: ss.sigma_bar,
            abar: ss.abar,
            x_zpf: self.mode.x_zpf,
            eta_kappa: self.eta_kappa,
        })
    }
}
