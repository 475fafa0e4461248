//! Pump amplitude, the graphene interband response σ̄_e and the
//! self-consistent intracavity steady state.
//!
//! Phase convention: the pump amplitude E is real and positive. The Kubo
//! response is taken verbatim as −(1/8)√(2κ_e)(v_F/c)²(A_eff/A)|ā|², a real
//! negative number proportional to |ā|² (not to ā), so the relative phase of
//! σ̄_e and ā is fixed by this convention.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{FERMI_VELOCITY_RATIO, HBAR};
use crate::error::{non_negative, positive, Error, Result};

/// Pump power above which the linear-response treatment is suspect (W).
pub const LINEAR_RESPONSE_POWER_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// P (W).
    pub power: f64,
    /// ω_p (rad/s).
    pub pump_frequency: f64,
    /// Δ = ω_cav − ω_p (rad/s). Negative Δ is blue detuning.
    pub detuning: f64,
    /// E = √(2Pκ_c/ħω_p), real positive.
    pub amplitude: Complex64,
}

impl DriveSpec {
    /// Pump at detuning `detuning` from a cavity at `omega_cav` with input
    /// coupling `kappa_c`.
    pub fn new(power: f64, omega_cav: f64, detuning: f64, kappa_c: f64) -> Result<Self> {
        let pump_frequency = omega_cav - detuning;
        let e = pump_amplitude(power, kappa_c, pump_frequency)?;
        if power > LINEAR_RESPONSE_POWER_LIMIT * (1.0 + 1e-9) {
            log::warn!("pump power {power:e} W exceeds the linear-response limit of 1 mW");
        }
        Ok(Self {
            power,
            pump_frequency,
            detuning,
            amplitude: Complex64::new(e, 0.0),
        })
    }
}

/// |E| = √(2Pκ_c/ħω_p) (s⁻¹·√photon).
pub fn pump_amplitude(power: f64, kappa_c: f64, pump_frequency: f64) -> Result<f64> {
    let p = non_negative("pump power", power)?;
    let k = positive("kappa_c", kappa_c)?;
    let w = positive("pump frequency", pump_frequency)?;
    Ok((2.0 * p * k / (HBAR * w)).sqrt())
}

/// σ̄_e = −(1/8)√(2κ_e)(v_F/c)²(A_eff/A)|ā|², as a rotating-frame constant.
pub fn sigma_response(abar: Complex64, kappa_e: f64, area_ratio: f64) -> Complex64 {
    let s = -0.125
        * (2.0 * kappa_e).sqrt()
        * FERMI_VELOCITY_RATIO.powi(2)
        * area_ratio
        * abar.norm_sqr();
    Complex64::new(s, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative change in ā that ends the iteration.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub abar: Complex64,
    pub sigma_bar: Complex64,
    /// κ = κ_c + κ_e.
    pub kappa_total: f64,
    /// |ā|².
    pub n_photon: f64,
    pub iterations: usize,
    pub converged: bool,
    /// |ā(iΔ+κ) − E − √(2κ_e)σ̄_e| / |E| (0 when E = 0).
    pub residual: f64,
}

/// Solves ā = (E + √(2κ_e)σ̄_e(ā)) / (iΔ + κ_c + κ_e) by fixed-point iteration
/// starting from the bare cavity response E/(iΔ+κ).
pub fn steady_state(
    drive: &DriveSpec,
    kappa_c: f64,
    kappa_e: f64,
    area_ratio: f64,
) -> Result<SteadyState> {
    steady_state_with(
        drive,
        kappa_c,
        kappa_e,
        area_ratio,
        &SolverOptions::default(),
    )
}

pub fn steady_state_with(
    drive: &DriveSpec,
    kappa_c: f64,
    kappa_e: f64,
    area_ratio: f64,
    opts: &SolverOptions,
) -> Result<SteadyState> {
    positive("kappa_c", kappa_c)?;
    non_negative("kappa_e", kappa_e)?;
    if !(area_ratio > 0.0 && area_ratio <= 1.0) {
        return Err(Error::domain(
            "area ratio",
            area_ratio,
            "must lie in (0, 1]",
        ));
    }
    let kappa = kappa_c + kappa_e;
    let denom = Complex64::new(kappa, drive.detuning);
    let root = (2.0 * kappa_e).sqrt();
    let e = drive.amplitude;

    let mut abar = e / denom;
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let next = (e + root * sigma_response(abar, kappa_e, area_ratio)) / denom;
        let scale = next.norm();
        change = if scale == 0.0 {
            0.0
        } else {
            (next - abar).norm() / scale
        };
        abar = next;
        if change <= opts.tolerance {
            break;
        }
    }
    if change > opts.tolerance {
        return Err(Error::NonConvergence {
            iterations,
            last_change: change,
        });
    }

    let sigma_bar = sigma_response(abar, kappa_e, area_ratio);
    let residual = if e.norm() == 0.0 {
        0.0
    } else {
        (abar * denom - e - root * sigma_bar).norm() / e.norm()
    };
    Ok(SteadyState {
        abar,
        sigma_bar,
        kappa_total: kappa,
        n_photon: abar.norm_sqr(),
        iterations,
        converged: true,
        residual,
    })
}

/// |E| / (√(2κ_e)|σ̄_e|); infinite when there is no response.
pub fn validity_ratio(drive: &DriveSpec, ss: &SteadyState, kappa_e: f64) -> f64 {
    let back = (2.0 * kappa_e).sqrt() * ss.sigma_bar.norm();
    if back == 0.0 {
        f64::INFINITY
    } else {
        drive.amplitude.norm() / back
    }
}

/// Linearized coupling coefficients of the fluctuation equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    /// G = (2āκ_e − √(2κ_e)σ̄_e)η_κ.
    pub g: Complex64,
    /// G_e = √(2κ_e)σ̄_e η_κ.
    pub g_e: Complex64,
    pub area_ratio: f64,
    pub fermi_velocity_ratio: f64,
}

pub fn effective_couplings(
    ss: &SteadyState,
    eta_kappa: f64,
    kappa_e: f64,
    area_ratio: f64,
) -> Result<EffectiveCouplings> {
    if !ss.converged {
        return Err(Error::NotConverged);
    }
    let root = (2.0 * kappa_e).sqrt();
    Ok(EffectiveCouplings {
        g: (2.0 * ss.abar * kappa_e - root * ss.sigma_bar) * eta_kappa,
        g_e: root * ss.sigma_bar * eta_kappa,
        area_ratio,
        fermi_velocity_ratio: FERMI_VELOCITY_RATIO,
    })
}
