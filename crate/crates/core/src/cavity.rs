//! Gaussian standing-wave cavity mode and the graphene absorption channel.
//!
//! The membrane sits at x₀ along the cavity axis (x₀ = 0 is a field node).
//! Interband absorption removes energy at the rate fixed by the local energy
//! density, which gives an absorptive decay rate κ_e(x₀) with the sin² shape
//! of the standing wave. Its gradient is the dissipative coupling.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::constants::{C, K_B, UNIVERSAL_ABSORBANCE};
use crate::error::{non_negative, positive, Error, Result};
use crate::par;
use crate::units::{hz_to_rad, MICRO, NANO};

/// |sin kx₀| below which η_κ is reported as singular.
pub const NODE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    /// Effective cavity length L (m).
    pub length: f64,
    /// Resonant wavelength λ_cav (m).
    pub wavelength: f64,
    /// Input-coupling (amplitude) decay rate κ_c (rad/s).
    pub coupling_decay: f64,
    /// Beam waist; `None` selects the near-confocal default.
    pub waist_override: Option<f64>,
    /// `beam_waist` fails when L/2 exceeds the Rayleigh range by more than
    /// this factor.
    pub max_rayleigh_deficit: f64,
}

impl Default for CavitySpec {
    fn default() -> Self {
        Self {
            length: 30.0 * MICRO,
            wavelength: 600.0 * NANO,
            coupling_decay: hz_to_rad(1e6),
            waist_override: None,
            max_rayleigh_deficit: 10.0,
        }
    }
}

impl CavitySpec {
    pub fn validate(&self) -> Result<()> {
        positive("cavity length", self.length)?;
        positive("wavelength", self.wavelength)?;
        positive("kappa_c", self.coupling_decay)?;
        positive("max_rayleigh_deficit", self.max_rayleigh_deficit)?;
        if let Some(w) = self.waist_override {
            positive("waist", w)?;
        }
        if self.wavelength * 10.0 > self.length {
            return Err(Error::domain(
                "wavelength",
                self.wavelength,
                "must be at least 10x shorter than the cavity",
            ));
        }
        Ok(())
    }

    /// k = 2π/λ_cav (1/m).
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }

    /// ω_cav = 2πc/λ_cav (rad/s).
    pub fn omega_cav(&self) -> f64 {
        TAU * C / self.wavelength
    }

    pub fn half_length(&self) -> f64 {
        self.length / 2.0
    }
}

/// Gaussian beam parameters of the cavity mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGeometry {
    /// Waist w₀ (m).
    pub waist: f64,
    /// z_R = π w₀²/λ (m).
    pub rayleigh_range: f64,
    /// k (1/m).
    pub wavenumber: f64,
}

impl BeamGeometry {
    /// w(x)² = w₀²(1 + (x/z_R)²).
    pub fn width_sq(&self, x: f64) -> f64 {
        self.waist.powi(2) * (1.0 + (x / self.rayleigh_range).powi(2))
    }

    pub fn wavelength(&self) -> f64 {
        TAU / self.wavenumber
    }
}

/// Waist from the override, or the near-confocal default w₀ = √(λL/2π).
pub fn beam_waist(spec: &CavitySpec) -> Result<BeamGeometry> {
    spec.validate()?;
    let waist = spec
        .waist_override
        .unwrap_or_else(|| (spec.wavelength * spec.length / TAU).sqrt());
    let rayleigh_range = PI * waist * waist / spec.wavelength;
    let half = spec.half_length();
    if half > spec.max_rayleigh_deficit * rayleigh_range {
        return Err(Error::GeometryInconsistent {
            rayleigh_range,
            half_length: half,
            factor: spec.max_rayleigh_deficit,
        });
    }
    Ok(BeamGeometry {
        waist,
        rayleigh_range,
        wavenumber: spec.wavenumber(),
    })
}

/// Energy density relative to the on-axis antinode peak at the waist:
/// sin²(kx) · (w₀²/w(x)²) · exp(−2r²/w(x)²).
pub fn energy_density(geom: &BeamGeometry, x: f64, r: f64) -> f64 {
    let w2 = geom.width_sq(x);
    (geom.wavenumber * x).sin().powi(2) * (geom.waist.powi(2) / w2) * (-2.0 * r * r / w2).exp()
}

/// A_eff(x) = ∫u dy dz / u_max(x) = π w(x)²/2.
pub fn effective_area(geom: &BeamGeometry, x: f64) -> f64 {
    PI * geom.width_sq(x) / 2.0
}

/// ∫u dV over the cavity in units of the peak density: (πw₀²/2)(L/2).
pub fn mode_integral(spec: &CavitySpec, geom: &BeamGeometry) -> f64 {
    PI * geom.waist.powi(2) / 2.0 * spec.half_length()
}

/// Interband occupation factor f(E_v) − f(E_c) for the transition at photon
/// energy ħω, with E_c,v = ±ħω/2 about the Dirac point and chemical potential μ.
pub fn fermi_factor(temperature: f64, chemical_potential: f64, photon_energy: f64) -> Result<f64> {
    let t = non_negative("temperature", temperature)?;
    let e = positive("photon energy", photon_energy)?;
    let (ec, ev) = (e / 2.0, -e / 2.0);
    if t == 0.0 {
        let step = |en: f64| {
            if en < chemical_potential {
                1.0
            } else if en > chemical_potential {
                0.0
            } else {
                0.5
            }
        };
        return Ok(step(ev) - step(ec));
    }
    let kt2 = 2.0 * K_B * t;
    // f(E) = (1 - tanh((E-μ)/2kT)) / 2
    let f =
        0.5 * (((ec - chemical_potential) / kt2).tanh() - ((ev - chemical_potential) / kt2).tanh());
    Ok(f.clamp(0.0, 1.0))
}

/// The absorptive decay-rate profile κ_e(x) of one cavity/graphene pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionProfile {
    pub cavity: CavitySpec,
    pub geometry: BeamGeometry,
    /// f(E_v) − f(E_c), 1 for clean undoped graphene at low temperature.
    pub fermi: f64,
}

impl AbsorptionProfile {
    pub fn new(cavity: CavitySpec, geometry: BeamGeometry, fermi: f64) -> Result<Self> {
        cavity.validate()?;
        check_fermi(fermi)?;
        Ok(Self {
            cavity,
            geometry,
            fermi,
        })
    }

    /// κ_e at the antinode, fermi · πα · c/L.
    pub fn kappa_max(&self) -> f64 {
        self.fermi * UNIVERSAL_ABSORBANCE * C / self.cavity.length
    }

    /// κ_e(x); see [`absorption_rate`].
    pub fn kappa_e(&self, x: f64) -> Result<f64> {
        absorption_rate(&self.cavity, &self.geometry, x, self.fermi)
    }

    /// √(2κ_e(x)) continued through the node as the signed field amplitude.
    pub fn signed_root(&self, x: f64) -> f64 {
        (2.0 * self.kappa_max()).sqrt() * (self.geometry.wavenumber * x).sin()
    }

    /// d/dx of [`Self::signed_root`].
    pub fn signed_root_slope(&self, x: f64) -> f64 {
        let k = self.geometry.wavenumber;
        (2.0 * self.kappa_max()).sqrt() * k * (k * x).cos()
    }

    /// dκ_e/dx (rad/s per m).
    pub fn kappa_e_slope(&self, x: f64) -> f64 {
        self.signed_root(x) * self.signed_root_slope(x)
    }

    /// Position in [0, λ/4] where κ_e equals `target`.
    pub fn position_for(&self, target: f64) -> Result<f64> {
        let kmax = self.kappa_max();
        non_negative("target kappa_e", target)?;
        if target > kmax {
            return Err(Error::domain(
                "target kappa_e",
                target,
                "exceeds the antinode value",
            ));
        }
        Ok((target / kmax).sqrt().asin() / self.geometry.wavenumber)
    }
}

fn check_fermi(fermi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&fermi) {
        Ok(())
    } else {
        Err(Error::domain("fermi factor", fermi, "must lie in [0, 1]"))
    }
}

/// κ_e(x₀) = W_max A_eff / ∫u dV, halved to an amplitude rate.
///
/// u_max(x₀)·A_eff(x₀) = sin²(kx₀)·πw₀²/2 because the on-axis density falls
/// as w₀²/w² while the area grows as w², so the result reduces to
/// fermi · πα · (c/L) · sin²(kx₀).
pub fn absorption_rate(spec: &CavitySpec, geom: &BeamGeometry, x0: f64, fermi: f64) -> Result<f64> {
    if !x0.is_finite() || x0.abs() > spec.half_length() {
        return Err(Error::domain("x0", x0, "must satisfy |x0| <= L/2"));
    }
    check_fermi(fermi)?;
    let w_max = UNIVERSAL_ABSORBANCE * C * fermi * energy_density(geom, x0, 0.0);
    let a_eff = effective_area(geom, x0);
    Ok(w_max * a_eff / mode_integral(spec, geom) / 2.0)
}

/// X_ZPF · d√(2κ_e)/dx, finite everywhere including at nodes.
pub fn coupling_product(profile: &AbsorptionProfile, x0: f64, x_zpf: f64) -> f64 {
    x_zpf * profile.signed_root_slope(x0)
}

/// η_κ = X_ZPF · d√(2κ_e)/dx / √(2κ_e) = X_ZPF · k · cot(kx₀).
///
/// The waist expansion drops out of κ_e, so there is no d ln w/dx term.
pub fn coupling_eta(profile: &AbsorptionProfile, x0: f64, x_zpf: f64) -> Result<f64> {
    let k = profile.geometry.wavenumber;
    let s = (k * x0).sin();
    if s.abs() < NODE_FLOOR {
        return Err(Error::NodeSingularity {
            x0,
            sin_kx: s.abs(),
        });
    }
    Ok(x_zpf * k * (k * x0).cos() / s)
}

/// One sample of the coupling profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingPoint {
    pub x0: f64,
    pub kappa_e: f64,
    pub d_kappa_e_dx: f64,
    pub a_eff: f64,
    /// `None` at a field node, where η_κ diverges.
    pub eta_kappa: Option<f64>,
    /// η_κ·√(2κ_e) (√(rad/s)).
    pub eta_sqrt2ke: f64,
}

pub fn coupling_point(profile: &AbsorptionProfile, x0: f64, x_zpf: f64) -> Result<CouplingPoint> {
    Ok(CouplingPoint {
        x0,
        kappa_e: profile.kappa_e(x0)?,
        d_kappa_e_dx: profile.kappa_e_slope(x0),
        a_eff: effective_area(&profile.geometry, x0),
        eta_kappa: coupling_eta(profile, x0, x_zpf).ok(),
        eta_sqrt2ke: coupling_product(profile, x0, x_zpf),
    })
}

/// Uniformly sampled profile over `range` (inclusive), `n_points ≥ 2`.
pub fn coupling_profile(
    profile: &AbsorptionProfile,
    x_zpf: f64,
    range: (f64, f64),
    n_points: usize,
) -> Result<Vec<CouplingPoint>> {
    if n_points < 2 {
        return Err(Error::Sweep(format!(
            "profile needs at least 2 points, got {n_points}"
        )));
    }
    let (lo, hi) = range;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Sweep(format!(
            "profile range [{lo:e}, {hi:e}] is empty"
        )));
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    par::map_range(n_points, |i| {
        let x = if i == n_points - 1 {
            hi
        } else {
            lo + step * i as f64
        };
        coupling_point(profile, x, x_zpf)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use proptest::prelude::*;

    fn default_profile() -> AbsorptionProfile {
        let spec = CavitySpec::default();
        AbsorptionProfile::new(spec, beam_waist(&spec).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn confocal_default_waist() {
        let g = beam_waist(&CavitySpec::default()).unwrap();
        let direct = (600e-9 * 30e-6 / (2.0 * PI)).sqrt();
        assert!((g.waist - direct).abs() < 1e-20);
        assert!((g.waist - 1.69e-6).abs() < 0.01e-6);
        assert!((g.rayleigh_range - 15e-6).abs() / 15e-6 < 1e-12);
    }

    #[test]
    fn waist_override_passes_through() {
        let spec = CavitySpec {
            waist_override: Some(2e-6),
            ..CavitySpec::default()
        };
        assert_eq!(beam_waist(&spec).unwrap().waist, 2e-6);
    }

    #[test]
    fn tiny_waist_is_geometrically_inconsistent() {
        let spec = CavitySpec {
            waist_override: Some(0.2e-6),
            ..CavitySpec::default()
        };
        assert!(matches!(
            beam_waist(&spec),
            Err(Error::GeometryInconsistent { .. })
        ));
    }

    #[test]
    fn invalid_cavity_rejected() {
        let base = CavitySpec::default();
        assert!(CavitySpec {
            length: -1.0,
            ..base
        }
        .validate()
        .is_err());
        assert!(CavitySpec {
            coupling_decay: 0.0,
            ..base
        }
        .validate()
        .is_err());
        assert!(CavitySpec {
            wavelength: 5e-6,
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn energy_density_shape() {
        let g = beam_waist(&CavitySpec::default()).unwrap();
        assert_eq!(energy_density(&g, 0.0, 0.3e-6), 0.0);
        let quarter = g.wavelength() / 4.0;
        let peak = energy_density(&g, quarter, 0.0);
        // waist approximation: (λ/4 / z_R)² = 1e-4
        assert!((peak - 1.0).abs() < 2e-4, "peak = {peak}");
        let edge = energy_density(&g, quarter, g.waist);
        let axial = g.waist.powi(2) / g.width_sq(quarter);
        let expect = (-2.0 * g.waist.powi(2) / g.width_sq(quarter)).exp() * axial;
        assert!((edge - expect).abs() < 1e-15);
        assert!((edge - (-2.0f64).exp()).abs() < 1e-4);
    }

    #[test]
    fn effective_area_values() {
        let g = beam_waist(&CavitySpec::default()).unwrap();
        let a0 = effective_area(&g, 0.0);
        assert!((a0 - PI * g.waist.powi(2) / 2.0).abs() < 1e-25);
        assert!((a0 - 4.5e-12).abs() / 4.5e-12 < 0.01, "A_eff = {a0:e}");
        let x = 7e-6;
        let ratio = effective_area(&g, x) / a0;
        assert!((ratio - g.width_sq(x) / g.waist.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn fermi_factor_limits() {
        let hw = HBAR * TAU * C / 600e-9;
        assert_eq!(fermi_factor(0.0, 0.0, hw).unwrap(), 1.0);
        assert_eq!(fermi_factor(0.0, 0.6 * hw, hw).unwrap(), 0.0);
        assert_eq!(fermi_factor(1e-3, 0.6 * hw, hw).unwrap(), 0.0);
        let room = fermi_factor(300.0, 0.0, hw).unwrap();
        assert!((1.0 - room).abs() < 1e-3);
        assert!(fermi_factor(1.0, 0.0, 0.0).is_err());
        assert!(fermi_factor(-1.0, 0.0, hw).is_err());
    }

    #[test]
    fn absorption_at_node_and_antinode() {
        let p = default_profile();
        assert_eq!(p.kappa_e(0.0).unwrap(), 0.0);
        let quarter = p.geometry.wavelength() / 4.0;
        let kq = p.kappa_e(quarter).unwrap();
        for dx in [-20e-9, -5e-9, 5e-9, 20e-9] {
            assert!(p.kappa_e(quarter + dx).unwrap() < kq);
        }
        assert!((kq - p.kappa_max()).abs() / kq < 1e-12);
        assert!(p.kappa_e(p.cavity.length).is_err());
        assert!(absorption_rate(&p.cavity, &p.geometry, 1e-9, 1.5).is_err());
    }

    #[test]
    fn kappa_ratio_follows_sin_squared() {
        let p = default_profile();
        let k = p.geometry.wavenumber;
        let quarter = p.geometry.wavelength() / 4.0;
        for x in [3e-9, 40e-9, 90e-9, 1.3e-6, 9.1e-6] {
            let r = p.kappa_e(x).unwrap() / p.kappa_e(quarter).unwrap();
            assert!((r - (k * x).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_near_node_and_antinode() {
        let p = default_profile();
        let xz = 3.3e-14;
        assert!(matches!(
            coupling_eta(&p, 0.0, xz),
            Err(Error::NodeSingularity { .. })
        ));
        let x = 0.5e-9;
        let eta = coupling_eta(&p, x, xz).unwrap();
        assert!((eta - xz / x).abs() / (xz / x) < 1e-4);
        let quarter = p.geometry.wavelength() / 4.0;
        assert!(coupling_product(&p, quarter, xz).abs() < 1e-12 * coupling_product(&p, 0.0, xz));
    }

    #[test]
    fn eta_matches_finite_difference() {
        let p = default_profile();
        let xz = 3.3e-14;
        let h = 1e-12;
        let root = |x: f64| (2.0 * p.kappa_e(x).unwrap()).sqrt();
        for i in 0..50 {
            let x = 0.5e-9 + (75e-9 - 0.5e-9) * i as f64 / 49.0;
            let fd = xz * (root(x + h) - root(x - h)) / (2.0 * h);
            let an = coupling_product(&p, x, xz);
            assert!(
                (an - fd).abs() / an.abs() < 1e-6,
                "x = {x:e}: {an:e} vs {fd:e}"
            );
        }
    }

    #[test]
    fn profile_over_half_wavelength() {
        let p = default_profile();
        let lam = p.geometry.wavelength();
        let prof = coupling_profile(&p, 3.3e-14, (0.0, lam / 2.0), 201).unwrap();
        assert_eq!(prof.len(), 201);
        assert_eq!(prof[0].kappa_e, 0.0);
        assert!(prof[200].kappa_e < 1e-20 * p.kappa_max());
        let imax = prof
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.kappa_e.total_cmp(&b.1.kappa_e))
            .unwrap()
            .0;
        assert_eq!(imax, 100);
        // single interior maximum: increasing then decreasing
        assert!(prof[..=100]
            .windows(2)
            .all(|w| w[1].kappa_e >= w[0].kappa_e));
        assert!(prof[100..].windows(2).all(|w| w[1].kappa_e <= w[0].kappa_e));
        assert!(coupling_profile(&p, 3.3e-14, (0.0, lam), 1).is_err());
    }

    #[test]
    fn operating_point_for_45_mhz() {
        let p = default_profile();
        let target = hz_to_rad(45e6);
        let x = p.position_for(target).unwrap();
        // independent bisection on the closed form
        let (mut lo, mut hi) = (0.0, p.geometry.wavelength() / 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p.kappa_e(mid).unwrap() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((x - lo).abs() < 1e-18);
        assert!(x > 1e-9 && x < 10e-9, "x0 = {x:e}");
    }

    #[test]
    fn stored_point_fields_are_consistent() {
        let p = default_profile();
        let xz = 3.3e-14;
        for x in [2e-9, 30e-9, 100e-9] {
            let pt = coupling_point(&p, x, xz).unwrap();
            let rhs = pt.d_kappa_e_dx * xz / (2.0 * pt.kappa_e).sqrt();
            assert!((pt.eta_sqrt2ke - rhs).abs() / rhs.abs() < 1e-12);
            assert!(pt.a_eff > 0.0);
        }
    }

    proptest! {
        #[test]
        fn kappa_is_nonnegative_and_even(x in 0.0..15e-6f64) {
            let p = default_profile();
            let a = p.kappa_e(x).unwrap();
            let b = p.kappa_e(-x).unwrap();
            prop_assert!(a >= 0.0);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }

        #[test]
        fn product_is_bounded(x in -15e-6..15e-6f64) {
            let p = default_profile();
            let bound = 3.3e-14 * (2.0 * p.kappa_max()).sqrt() * p.geometry.wavenumber;
            prop_assert!(coupling_product(&p, x, 3.3e-14).abs() <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn fermi_factor_bounded_and_monotone(t in 1.0..3000.0f64, mu in 0.0..1.5f64, dmu in 0.01..0.5f64) {
            let hw = 2.07 * 1.602_176_634e-19;
            let ev = 1.602_176_634e-19;
            let f = fermi_factor(t, mu * ev, hw).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(fermi_factor(t, (mu + dmu) * ev, hw).unwrap() <= f + 1e-15);
        }
    }
}
