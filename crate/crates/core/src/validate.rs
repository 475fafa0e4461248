//! Invariant suite run by the `validate` subcommand.
//!
//! Each check is cheap and independent; the report lists every outcome
//! rather than stopping at the first failure.

use serde::Serialize;
use std::f64::consts::TAU;

use crate::cavity::{coupling_product, fermi_factor};
use crate::constants::{HBAR, UNIVERSAL_ABSORBANCE};
use crate::dynamics::{optical_spring, phonon_number_analytic, SPRING_VALIDITY_RATIO};
use crate::error::Result;
use crate::membrane::{fundamental_frequency, thermal_occupancy, MembraneSpec};
use crate::model::OperatingPoint;
use crate::spectrum::{spectrum_oracle, SpectrumGrid};
use crate::units::hz_to_rad;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag}  {:<28} {}\n", c.name, c.detail));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        s
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn membrane_anchor() -> Result<(bool, String)> {
    let w = fundamental_frequency(&MembraneSpec::default())?;
    let r = rel(w, hz_to_rad(55e6));
    Ok((
        r < 0.02,
        format!("omega_m/2pi = {:.4} MHz (rel. dev. {r:.2e})", w / TAU / 1e6),
    ))
}

fn thermal_anchor() -> Result<(bool, String)> {
    let n = thermal_occupancy(0.26, hz_to_rad(55e6))?;
    Ok((rel(n, 100.0) < 0.05, format!("n_th(0.26 K) = {n:.3}")))
}

fn absorbance(config: &crate::config::RunConfig) -> Result<(bool, String)> {
    let photon = HBAR * config.cavity_spec().omega_cav();
    let a = fermi_factor(1e-3, 0.0, photon)? * UNIVERSAL_ABSORBANCE;
    Ok(((a - 0.0229).abs() <= 5e-4, format!("absorbance = {a:.5}")))
}

fn coupling_derivative(config: &crate::config::RunConfig) -> Result<(bool, String)> {
    let profile = config.absorption_profile()?;
    let x_zpf = config.mode()?.x_zpf;
    let lambda = config.cavity_spec().wavelength;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let x = 0.5e-9 + (lambda / 8.0 - 0.5e-9) * i as f64 / 19.0;
        let h = 1e-4 * lambda;
        let fd = x_zpf * (profile.signed_root(x + h) - profile.signed_root(x - h)) / (2.0 * h);
        worst = worst.max(rel(coupling_product(&profile, x, x_zpf), fd));
    }
    Ok((
        worst < 1e-6,
        format!("max rel. dev. vs finite difference {worst:.2e}"),
    ))
}

fn node_is_dark(config: &crate::config::RunConfig) -> Result<(bool, String)> {
    let profile = config.absorption_profile()?;
    let k0 = profile.kappa_e(0.0)?;
    let lambda = config.cavity_spec().wavelength;
    let kq = profile.kappa_e(lambda / 4.0)?;
    let ok = k0 == 0.0 && rel(kq, profile.kappa_max()) < 1e-12;
    Ok((
        ok,
        format!(
            "kappa_e(0) = {k0:e}, kappa_e(lambda/4)/kappa_max = {:.6}",
            kq / profile.kappa_max()
        ),
    ))
}

fn zero_power(op: &OperatingPoint) -> Result<(bool, String)> {
    let sys = op.with_power(0.0).linearize()?;
    let spring = optical_spring(&sys, sys.omega_m)?;
    let n = phonon_number_analytic(&sys, &spring)?.n_ss;
    Ok((
        rel(n, sys.n_th) < 1e-12,
        format!("n_ss(P=0) = {n:.6}, n_th = {:.6}", sys.n_th),
    ))
}

fn zero_kappa_e(op: &OperatingPoint) -> Result<(bool, String)> {
    let sys = op.with_kappa_e(0.0).linearize()?;
    let spring = optical_spring(&sys, sys.omega_m)?;
    let ok = sys.g.norm() == 0.0
        && sys.g_e.norm() == 0.0
        && spring.gamma_o == 0.0
        && spring.omega_o == 0.0;
    Ok((
        ok,
        format!(
            "|G| = {:e}, |G_e| = {:e}, gamma_o = {:e}",
            sys.g.norm(),
            sys.g_e.norm(),
            spring.gamma_o
        ),
    ))
}

fn cold_and_dark(op: &OperatingPoint) -> Result<(bool, String)> {
    let mut sys = op.with_power(0.0).linearize()?;
    sys.n_th = 0.0;
    let spring = optical_spring(&sys, sys.omega_m)?;
    let n = phonon_number_analytic(&sys, &spring)?.n_ss;
    Ok((n == 0.0, format!("n_ss = {n:e}")))
}

fn steady_state_residual(op: &OperatingPoint) -> Result<(bool, String)> {
    let (_, ss) = op.steady_state()?;
    Ok((
        ss.converged && ss.residual <= 1e-12,
        format!(
            "residual {:.2e} after {} iterations",
            ss.residual, ss.iterations
        ),
    ))
}

fn spring_validity(op: &OperatingPoint) -> Result<(bool, String)> {
    let r = op.linearize()?.validity_ratio();
    Ok((
        r > SPRING_VALIDITY_RATIO,
        format!("|E|/(sqrt(2 kappa_e)|sigma|) = {r:.3e}"),
    ))
}

fn oracle_spot_check(op: &OperatingPoint) -> Result<(bool, String)> {
    // a weakly pumped copy of the run's parameter block
    let sys = op
        .with_power(1e-11)
        .with_detuning(0.5 * op.mode.omega_m)
        .linearize()?;
    let spring = optical_spring(&sys, sys.omega_m)?;
    let n = phonon_number_analytic(&sys, &spring)?.n_ss;
    let oracle = spectrum_oracle(&sys, &SpectrumGrid::default())?.integrated_n;
    let r = rel(oracle, n);
    Ok((
        r < 0.05,
        format!("oracle {oracle:.5} vs analytic {n:.5} (rel. dev. {r:.2e})"),
    ))
}

/// Runs the suite against a resolved configuration.
pub fn run_suite(config: &crate::config::RunConfig) -> ValidationReport {
    let op = config.operating_point();
    let with_op = |name: &str, f: fn(&OperatingPoint) -> Result<(bool, String)>| match &op {
        Ok(op) => Check::from_result(name, f(op)),
        Err(e) => Check::new(name, false, format!("configuration does not resolve: {e}")),
    };
    let checks = vec![
        Check::from_result("membrane frequency anchor", membrane_anchor()),
        Check::from_result("thermal occupancy anchor", thermal_anchor()),
        Check::from_result("universal absorbance", absorbance(config)),
        Check::from_result("absorption node/antinode", node_is_dark(config)),
        Check::from_result("coupling derivative", coupling_derivative(config)),
        with_op("zero power -> n_th", zero_power),
        with_op("kappa_e = 0 decouples", zero_kappa_e),
        with_op("cold and dark -> 0", cold_and_dark),
        with_op("steady-state residual", steady_state_residual),
        with_op("optical spring validity", spring_validity),
        with_op("oracle spot check", oracle_spot_check),
    ];
    ValidationReport { checks }
}
