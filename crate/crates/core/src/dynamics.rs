//! Linearized quantum Langevin dynamics in the frequency domain.
//!
//! Fourier convention: every operator obeys d/dt → −iω, so the bare
//! mechanical response 1/(−iω + iω_m + γ_m) peaks at ω = +ω_m. Daggered
//! amplitudes a†(ω), b†(ω) are the transforms of a†(t), b†(t); their
//! equations follow by conjugating in time before transforming.

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// Default |G|/κ, |G_e|/κ ceiling for the analytic weak-coupling results.
pub const WEAK_COUPLING_THRESHOLD: f64 = 0.01;

/// The optical-spring formulas assume |E| ≫ √(2κ_e)|σ̄_e|; below this ratio
/// a warning is logged.
pub const SPRING_VALIDITY_RATIO: f64 = 1e3;

/// Coefficients of the linearized fluctuation equations at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedSystem {
    /// Δ (rad/s).
    pub detuning: f64,
    pub kappa_c: f64,
    pub kappa_e: f64,
    /// κ = κ_c + κ_e.
    pub kappa: f64,
    pub omega_m: f64,
    pub gamma_m: f64,
    pub n_th: f64,
    pub g: Complex64,
    pub g_e: Complex64,
    /// E.
    pub drive_amplitude: Complex64,
    pub sigma_bar: Complex64,
    pub abar: Complex64,
    pub x_zpf: f64,
    pub eta_kappa: f64,
}

impl LinearizedSystem {
    /// max(|G|, |G_e|)/κ.
    pub fn weak_coupling_ratio(&self) -> f64 {
        self.g.norm().max(self.g_e.norm()) / self.kappa
    }

    pub fn is_weak(&self, threshold: f64) -> bool {
        self.weak_coupling_ratio() <= threshold
    }

    pub fn check_weak(&self, threshold: f64) -> Result<()> {
        let ratio = self.weak_coupling_ratio();
        if ratio <= threshold {
            Ok(())
        } else {
            Err(Error::WeakCoupling { ratio, threshold })
        }
    }

    /// |E| / (√(2κ_e)|σ̄_e|).
    pub fn validity_ratio(&self) -> f64 {
        let back = (2.0 * self.kappa_e).sqrt() * self.sigma_bar.norm();
        if back == 0.0 {
            f64::INFINITY
        } else {
            self.drive_amplitude.norm() / back
        }
    }

    /// Cavity response denominators (−iω + iΔ + κ) and (−iω − iΔ + κ).
    fn cavity_denominators(&self, omega: f64) -> (Complex64, Complex64) {
        (
            Complex64::new(self.kappa, self.detuning - omega),
            Complex64::new(self.kappa, -self.detuning - omega),
        )
    }

    /// Self-energy Σ(ω) that the cavity adds to the mechanical response,
    /// (−iω + iω_m + γ_m + Σ) b, from eliminating a and a† exactly.
    pub fn mechanical_self_energy(&self, omega: f64) -> Complex64 {
        let (dp, dm) = self.cavity_denominators(omega);
        self.g_e * self.g.conj() / dm - self.g_e.conj() * self.g / dp
    }
}

/// Pump-induced shift of the mechanical frequency and damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalSpring {
    pub omega_o: f64,
    pub gamma_o: f64,
    /// ω̃_m = ω_m + ω_o.
    pub omega_eff: f64,
    /// γ̃_m = γ_m + γ_o. Negative values (anti-damping) are physical.
    pub gamma_eff: f64,
    /// Frequency at which the formulas were evaluated.
    pub eval_frequency: f64,
    /// |E| / (√(2κ_e)|σ̄_e|).
    pub validity_ratio: f64,
}

/// Optical spring at ω = `omega_eval`:
///
/// γ_o = (2κ_e)^{3/2} η_κ² Re[E σ̄*/((−iω−iΔ+κ)(−iΔ+κ)) − E* σ̄/((−iω+iΔ+κ)(iΔ+κ))]
/// and ω_o the imaginary part of the same bracket.
pub fn optical_spring(sys: &LinearizedSystem, omega_eval: f64) -> Result<OpticalSpring> {
    positive("evaluation frequency", omega_eval)?;
    let (d, k, w) = (sys.detuning, sys.kappa, omega_eval);
    let e = sys.drive_amplitude;
    let s = sys.sigma_bar;
    let first = e * s.conj() / (Complex64::new(k, -w - d) * Complex64::new(k, -d));
    let second = e.conj() * s / (Complex64::new(k, -w + d) * Complex64::new(k, d));
    let bracket = first - second;
    let prefactor = (2.0 * sys.kappa_e).powf(1.5) * sys.eta_kappa * sys.eta_kappa;
    let omega_o = prefactor * bracket.im;
    let gamma_o = prefactor * bracket.re;
    let validity_ratio = sys.validity_ratio();
    if validity_ratio < SPRING_VALIDITY_RATIO {
        log::debug!("optical spring outside its validity range: |E|/(sqrt(2 kappa_e)|sigma|) = {validity_ratio:e}");
    }
    Ok(OpticalSpring {
        omega_o,
        gamma_o,
        omega_eff: sys.omega_m + omega_o,
        gamma_eff: sys.gamma_m + gamma_o,
        eval_frequency: omega_eval,
        validity_ratio,
    })
}

/// How the squared couplings in the occupancy formula are read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingSquare {
    /// |G|², |G_e|² (real addends for any phase of ā).
    #[default]
    Modulus,
    /// Re(G²), Re(G_e²); only differs from `Modulus` when G is complex.
    Literal,
}

impl CouplingSquare {
    fn apply(self, z: Complex64) -> f64 {
        match self {
            CouplingSquare::Modulus => z.norm_sqr(),
            CouplingSquare::Literal => (z * z).re,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticOptions {
    pub square: CouplingSquare,
    pub weak_threshold: f64,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self {
            square: CouplingSquare::Modulus,
            weak_threshold: WEAK_COUPLING_THRESHOLD,
        }
    }
}

/// Steady-state phonon number and its three noise channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononResult {
    pub n_ss: f64,
    /// (γ_m/γ̃_m) n_th
    pub term_thermal: f64,
    /// |G|²/(4κ_e γ̃_m)
    pub term_sigma_noise: f64,
    /// (γ̃_m+κ)κ_c|G_e|² / (γ̃_m κ[(γ̃_m+κ)² + (Δ+ω̃_m)²])
    pub term_light_noise: f64,
}

pub fn phonon_number_analytic(
    sys: &LinearizedSystem,
    spring: &OpticalSpring,
) -> Result<PhononResult> {
    phonon_number_analytic_with(sys, spring, &AnalyticOptions::default())
}

/// Weak-coupling occupancy. The Lorentzian of the light-noise term is
/// centred on the renormalized ω̃_m.
pub fn phonon_number_analytic_with(
    sys: &LinearizedSystem,
    spring: &OpticalSpring,
    opts: &AnalyticOptions,
) -> Result<PhononResult> {
    sys.check_weak(opts.weak_threshold)?;
    phonon_terms(sys, spring, opts.square)
}

/// The occupancy formula without the weak-coupling guard; still requires
/// γ̃_m > 0.
pub fn phonon_terms(
    sys: &LinearizedSystem,
    spring: &OpticalSpring,
    square: CouplingSquare,
) -> Result<PhononResult> {
    let gt = spring.gamma_eff;
    if gt.is_nan() || gt <= 0.0 {
        return Err(Error::AntiDamped { gamma_eff: gt });
    }
    let k = sys.kappa;
    let term_thermal = sys.gamma_m / gt * sys.n_th;
    let term_sigma_noise = if sys.kappa_e > 0.0 {
        square.apply(sys.g) / (4.0 * sys.kappa_e * gt)
    } else {
        0.0
    };
    let detune = sys.detuning + spring.omega_eff;
    let term_light_noise = (gt + k) * sys.kappa_c * square.apply(sys.g_e)
        / (gt * k * ((gt + k).powi(2) + detune * detune));
    Ok(PhononResult {
        n_ss: term_thermal + term_sigma_noise + term_light_noise,
        term_thermal,
        term_sigma_noise,
        term_light_noise,
    })
}

/// Noise inputs, in the column order of [`LinearSystem::inputs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseInput {
    AIn,
    AInDag,
    SigmaIn,
    SigmaInDag,
    BIn,
    BInDag,
}

impl NoiseInput {
    pub const ALL: [NoiseInput; 6] = [
        NoiseInput::AIn,
        NoiseInput::AInDag,
        NoiseInput::SigmaIn,
        NoiseInput::SigmaInDag,
        NoiseInput::BIn,
        NoiseInput::BInDag,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Row/column index of b(ω) in the unknown vector (a, a†, b, b†).
pub const B_INDEX: usize = 2;

pub type InputMatrix = SMatrix<Complex64, 4, 6>;

/// M(ω)·(a, a†, b, b†)ᵀ = B·(a_in, a_in†, σ_in, σ_in†, b_in, b_in†)ᵀ.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: Matrix4<Complex64>,
    pub inputs: InputMatrix,
}

/// Builds the 4×4 coefficient matrix and 4×6 input matrix at ω.
///
/// Rows:
///   (−iω+iΔ+κ) a  + G (b + b†)                 = √(2κ_c) a_in  + √(2κ_e) σ_in
///   (−iω−iΔ+κ) a† + G*(b + b†)                 = √(2κ_c) a_in† + √(2κ_e) σ_in†
///   (−iω+iω_m+γ_m) b  − G_e a† + G_e* a        = √(2γ_m) b_in  + √(2κ_e)η_κ(ā* σ_in − ā σ_in†)
///   (−iω−iω_m+γ_m) b† − G_e* a + G_e a†        = √(2γ_m) b_in† + √(2κ_e)η_κ(ā σ_in† − ā* σ_in)
pub fn build_linear_system(sys: &LinearizedSystem, omega: f64) -> LinearSystem {
    let zero = Complex64::new(0.0, 0.0);
    let (dp, dm) = sys.cavity_denominators(omega);
    let mech = Complex64::new(sys.gamma_m, sys.omega_m - omega);
    let mech_dag = Complex64::new(sys.gamma_m, -sys.omega_m - omega);
    let (g, ge) = (sys.g, sys.g_e);

    #[rustfmt::skip]
    let matrix = Matrix4::new(
        dp,         zero,      g,    g,
        zero,       dm,        g.conj(), g.conj(),
        ge.conj(),  -ge,       mech, zero,
        -ge.conj(), ge,        zero, mech_dag,
    );

    let rc = Complex64::from((2.0 * sys.kappa_c).sqrt());
    let re = Complex64::from((2.0 * sys.kappa_e).sqrt());
    let rm = Complex64::from((2.0 * sys.gamma_m).sqrt());
    let force = re * sys.eta_kappa;
    let (ab, abc) = (sys.abar, sys.abar.conj());

    #[rustfmt::skip]
    let inputs = InputMatrix::from_row_slice(&[
        rc,   zero, re,           zero,        zero, zero,
        zero, rc,   zero,         re,          zero, zero,
        zero, zero, force * abc,  -force * ab, rm,   zero,
        zero, zero, -force * abc, force * ab,  zero, rm,
    ]);
    LinearSystem { matrix, inputs }
}

/// Response of (a, a†, b, b†)(ω) to each unit noise input: M⁻¹B.
pub fn solve_response(sys: &LinearizedSystem, omega: f64) -> Result<InputMatrix> {
    let LinearSystem { matrix, inputs } = build_linear_system(sys, omega);
    matrix
        .lu()
        .solve(&inputs)
        .filter(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .ok_or(Error::Singular { omega })
}

/// Transfer coefficients from each noise input into b(ω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BTransfer {
    pub b_in: Complex64,
    pub sigma_in: Complex64,
    pub sigma_in_dag: Complex64,
    pub a_in: Complex64,
    pub a_in_dag: Complex64,
}

/// Weak-coupling solution for b(ω) with the renormalized response
/// χ = 1/(−iω + iω̃_m + γ̃_m):
///
/// b = χ[√(2γ_m) b_in + (G* σ_in − G σ_in†)/√(2κ_e)
///       + G_e √(2κ_c) a_in†/(−iω−iΔ+κ) − G_e* √(2κ_c) a_in/(−iω+iΔ+κ)]
pub fn weak_coupling_b(
    sys: &LinearizedSystem,
    spring: &OpticalSpring,
    omega: f64,
) -> Result<BTransfer> {
    sys.check_weak(WEAK_COUPLING_THRESHOLD)?;
    if spring.gamma_eff.is_nan() || spring.gamma_eff <= 0.0 {
        return Err(Error::AntiDamped {
            gamma_eff: spring.gamma_eff,
        });
    }
    let chi = 1.0 / Complex64::new(spring.gamma_eff, spring.omega_eff - omega);
    let (dp, dm) = sys.cavity_denominators(omega);
    let rc = (2.0 * sys.kappa_c).sqrt();
    let (sigma_in, sigma_in_dag) = if sys.kappa_e > 0.0 {
        let re = (2.0 * sys.kappa_e).sqrt();
        (sys.g.conj() / re * chi, -sys.g / re * chi)
    } else {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    };
    Ok(BTransfer {
        b_in: (2.0 * sys.gamma_m).sqrt() * chi,
        sigma_in,
        sigma_in_dag,
        a_in: -sys.g_e.conj() * rc / dp * chi,
        a_in_dag: sys.g_e * rc / dm * chi,
    })
}

/// The same coefficients read off the full 4×4 solve.
pub fn full_b_transfer(sys: &LinearizedSystem, omega: f64) -> Result<BTransfer> {
    let t = solve_response(sys, omega)?;
    let at = |input: NoiseInput| t[(B_INDEX, input.index())];
    Ok(BTransfer {
        b_in: at(NoiseInput::BIn),
        sigma_in: at(NoiseInput::SigmaIn),
        sigma_in_dag: at(NoiseInput::SigmaInDag),
        a_in: at(NoiseInput::AIn),
        a_in_dag: at(NoiseInput::AInDag),
    })
}
