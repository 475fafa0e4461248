//! Phonon noise spectrum from the full linear system, integrated numerically.
//!
//! This is the brute-force counterpart of the analytic occupancy: at each ω the
//! 4×4 system is solved for the response of b(ω) to every noise input, the
//! input correlators turn those responses into S_nm(ω), and
//! ⟨b†b⟩ = (1/2π)∫S_nm dω.
//!
//! S_nm is a Lorentzian of width γ̃_m (Hz scale) centred on ±ω̃_m (tens of
//! MHz). Each half-line is integrated on the substitution ω = ±ω̃_m + γ̃_m tan θ
//! with the midpoint rule in θ, which integrates a pure Lorentzian exactly and
//! reaches ω → ±∞ without truncation.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::dynamics::{solve_response, LinearizedSystem, NoiseInput, B_INDEX};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    /// Midpoint nodes per half-line on the coarse pass. The refined pass
    /// doubles this.
    pub points_per_half: usize,
    /// Largest accepted relative change between coarse and refined integrals.
    pub refinement_tolerance: f64,
}

impl Default for SpectrumGrid {
    fn default() -> Self {
        Self {
            points_per_half: 2000,
            refinement_tolerance: 5e-3,
        }
    }
}

/// Two-frequency correlators of one noise input, as multiples of δ(ω+ω′).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlator {
    pub input: String,
    /// ⟨ξ(ω) ξ†(ω′)⟩
    pub anti_normal: f64,
    /// ⟨ξ†(ω) ξ(ω′)⟩
    pub normal: f64,
}

/// Vacuum optical and electronic reservoirs, thermal mechanical bath.
pub fn correlator_table(n_th: f64) -> Vec<Correlator> {
    vec![
        Correlator {
            input: "a_in".into(),
            anti_normal: 1.0,
            normal: 0.0,
        },
        Correlator {
            input: "sigma_in".into(),
            anti_normal: 1.0,
            normal: 0.0,
        },
        Correlator {
            input: "b_in".into(),
            anti_normal: n_th + 1.0,
            normal: n_th,
        },
    ]
}

/// Weight of |T_k|² in S_nm for each column of the input matrix: the number
/// ⟨ξ_k† ξ_k⟩ where ξ_k is the operator multiplying the column.
fn spectral_weights(n_th: f64) -> [f64; 6] {
    let mut w = [0.0; 6];
    for input in NoiseInput::ALL {
        w[input.index()] = match input {
            NoiseInput::AIn | NoiseInput::SigmaIn => 0.0,
            NoiseInput::AInDag | NoiseInput::SigmaInDag => 1.0,
            NoiseInput::BIn => n_th,
            NoiseInput::BInDag => n_th + 1.0,
        };
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Sample frequencies of the refined pass, ascending (rad/s).
    pub omega: Vec<f64>,
    /// S_nm at each sample (per rad/s).
    pub s_nm: Vec<f64>,
    /// (1/2π)∫S_nm dω from the refined pass.
    pub integrated_n: f64,
    /// Same integral on the coarse pass.
    pub coarse_n: f64,
    pub correlators: Vec<Correlator>,
    /// ω̃_m and γ̃_m used to place the grid.
    pub peak_center: f64,
    pub peak_width: f64,
}

/// S_nm(ω) = Σ_k ⟨ξ_k†ξ_k⟩ |T_bk(ω)|².
pub fn spectral_density(sys: &LinearizedSystem, omega: f64) -> Result<f64> {
    let weights = spectral_weights(sys.n_th);
    let t = solve_response(sys, omega)?;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(k, w)| w * t[(B_INDEX, k)].norm_sqr())
        .sum())
}

/// Peak position and width of the dressed mechanical resonance, from the
/// exact cavity self-energy iterated to self-consistency in ω.
pub fn dressed_resonance(sys: &LinearizedSystem) -> (f64, f64) {
    let mut center = sys.omega_m;
    for _ in 0..3 {
        center = sys.omega_m + sys.mechanical_self_energy(center).im;
    }
    let width = sys.gamma_m + sys.mechanical_self_energy(center).re;
    (center, width)
}

struct Pass {
    omega: Vec<f64>,
    s_nm: Vec<f64>,
    integral: f64,
}

fn integrate(sys: &LinearizedSystem, center: f64, width: f64, n: usize) -> Result<Pass> {
    // Positive half: ω = center + width·tanθ, θ ∈ [atan(−center/width), π/2).
    // Negative half mirrors it about ω = 0 around −center.
    let theta_edge = (center / width).atan();
    let span = FRAC_PI_2 + theta_edge;
    let h = span / n as f64;
    let nodes: Vec<(f64, f64)> = (0..2 * n)
        .map(|i| {
            let (sign, j) = if i < n {
                (-1.0, n - 1 - i)
            } else {
                (1.0, i - n)
            };
            // j-th midpoint from ω = 0 outwards
            let theta = -theta_edge + (j as f64 + 0.5) * h;
            let omega = sign * (center + width * theta.tan());
            let jac = width / theta.cos().powi(2) * h;
            (omega, jac)
        })
        .collect();
    let s: Vec<Result<f64>> = par::map(&nodes, |&(w, _)| spectral_density(sys, w));
    let s_nm = s.into_iter().collect::<Result<Vec<_>>>()?;
    let integral = nodes
        .iter()
        .zip(&s_nm)
        .map(|((_, jac), s)| s * jac)
        .sum::<f64>()
        / TAU;
    Ok(Pass {
        omega: nodes.into_iter().map(|(w, _)| w).collect(),
        s_nm,
        integral,
    })
}

/// Integrates the full-system phonon spectrum; fails when the dressed
/// damping is not positive or the refinement check does not hold.
pub fn spectrum_oracle(sys: &LinearizedSystem, grid: &SpectrumGrid) -> Result<SpectrumResult> {
    if grid.points_per_half < 16 {
        return Err(Error::Sweep(format!(
            "spectrum grid needs at least 16 points per half-line, got {}",
            grid.points_per_half
        )));
    }
    let (center, width) = dressed_resonance(sys);
    if width.is_nan() || width <= 0.0 {
        return Err(Error::AntiDamped { gamma_eff: width });
    }
    let coarse = integrate(sys, center, width, grid.points_per_half)?;
    let fine = integrate(sys, center, width, 2 * grid.points_per_half)?;
    let change = if fine.integral == 0.0 {
        (fine.integral - coarse.integral).abs()
    } else {
        ((fine.integral - coarse.integral) / fine.integral).abs()
    };
    if change > grid.refinement_tolerance {
        return Err(Error::QuadratureConvergence {
            coarse: coarse.integral,
            fine: fine.integral,
            change,
        });
    }
    Ok(SpectrumResult {
        omega: fine.omega,
        s_nm: fine.s_nm,
        integrated_n: fine.integral,
        coarse_n: coarse.integral,
        correlators: correlator_table(sys.n_th),
        peak_center: center,
        peak_width: width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{optical_spring, phonon_number_analytic};
    use crate::model::OperatingPoint;
    use crate::units::hz_to_rad;

    #[test]
    fn free_oscillator_integrates_to_n_th() {
        let sys = OperatingPoint::phonon_map_preset()
            .with_power(0.0)
            .linearize()
            .unwrap();
        let r = spectrum_oracle(&sys, &SpectrumGrid::default()).unwrap();
        assert!(
            (r.integrated_n - sys.n_th).abs() / sys.n_th < 1e-6,
            "{}",
            r.integrated_n
        );

        let cold = LinearizedSystem { n_th: 0.0, ..sys };
        let r = spectrum_oracle(&cold, &SpectrumGrid::default()).unwrap();
        assert!(r.integrated_n.abs() < 1e-9);
    }

    #[test]
    fn grid_is_sorted_and_spectrum_nonnegative() {
        let sys = OperatingPoint::damping_preset()
            .with_power(1e-10)
            .with_detuning(hz_to_rad(30e6))
            .linearize()
            .unwrap();
        let r = spectrum_oracle(&sys, &SpectrumGrid::default()).unwrap();
        assert!(r.omega.windows(2).all(|w| w[0] < w[1]));
        assert!(r.s_nm.iter().all(|s| *s >= 0.0));
        assert_eq!(
            r.omega.len(),
            2 * 2 * SpectrumGrid::default().points_per_half
        );
    }

    #[test]
    fn agrees_with_analytic_occupancy() {
        for (p, d) in [(1e-11, 0.4), (3e-11, -0.8), (5e-12, 1.5)] {
            let sys = OperatingPoint::phonon_map_preset()
                .with_power(p)
                .with_detuning(d * hz_to_rad(55e6))
                .linearize()
                .unwrap();
            let spring = optical_spring(&sys, sys.omega_m).unwrap();
            let n = phonon_number_analytic(&sys, &spring).unwrap().n_ss;
            let r = spectrum_oracle(&sys, &SpectrumGrid::default()).unwrap();
            assert!(
                (r.integrated_n - n).abs() / n < 0.05,
                "P={p} d={d}: {} vs {n}",
                r.integrated_n
            );
        }
    }

    #[test]
    fn anti_damped_system_is_rejected() {
        let sys = OperatingPoint::phonon_map_preset()
            .with_power(0.0)
            .linearize()
            .unwrap();
        let bad = LinearizedSystem {
            gamma_m: -1.0,
            ..sys
        };
        assert!(matches!(
            spectrum_oracle(&bad, &SpectrumGrid::default()),
            Err(Error::AntiDamped { .. })
        ));
    }

    #[test]
    fn correlators_listed() {
        let t = correlator_table(100.0);
        assert_eq!(t.len(), 3);
        assert_eq!(t[2].normal, 100.0);
        assert_eq!(t[2].anti_normal, 101.0);
    }
}
