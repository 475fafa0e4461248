//! Parameter scans and the optimal-cooling search.
//!
//! Every scan evaluates independent grid points through [`crate::par`] and
//! returns them in a fixed order (outer axis first), so identical inputs give
//! bit-identical tables with or without the `parallel` feature.

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    optical_spring, phonon_terms, CouplingSquare, PhononResult, WEAK_COUPLING_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::model::OperatingPoint;
use crate::par;
use crate::response::LINEAR_RESPONSE_POWER_LIMIT;

/// Parameters that may be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Detuning,
    Power,
    KappaE,
    X0,
    Diameter,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

/// One sampled axis in SI units (rad/s, W, m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl AxisSpec {
    pub fn new(
        param: SweepParam,
        min: f64,
        max: f64,
        count: usize,
        scale: AxisScale,
    ) -> Result<Self> {
        let axis = Self {
            param,
            min,
            max,
            count,
            scale,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn linear(param: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::new(param, min, max, count, AxisScale::Linear)
    }

    pub fn log(param: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::new(param, min, max, count, AxisScale::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Sweep(format!(
                "{:?} axis needs at least 2 points",
                self.param
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Sweep(format!(
                "{:?} axis needs min < max, got [{:e}, {:e}]",
                self.param, self.min, self.max
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::Sweep(format!(
                "{:?} log axis needs a positive minimum",
                self.param
            )));
        }
        Ok(())
    }

    /// Sample points; the endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + t * (self.max - self.min),
                    AxisScale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Fixed parameter block plus the axes of the dynamical sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: OperatingPoint,
    pub detuning: AxisSpec,
    pub power: AxisSpec,
    pub kappa_e: AxisSpec,
    /// Optical-spring evaluation frequency; `None` means ω_m.
    pub omega_eval: Option<f64>,
    pub weak_threshold: f64,
    pub square: CouplingSquare,
    /// Coarse grid of the optimal-cooling search (Δ × P).
    pub optimizer_grid: (usize, usize),
    pub optimizer_tolerance: f64,
    pub optimizer_max_cycles: usize,
}

impl SweepConfig {
    /// Defaults around `base`: Δ ∈ [−2ω_m, 2ω_m] for the damping curve and the
    /// map, P ∈ [1 nW, 1 mW] log, κ_e ∈ [0.05, 6]ω_m log.
    pub fn around(base: OperatingPoint) -> Self {
        let wm = base.mode.omega_m;
        Self {
            base,
            detuning: AxisSpec {
                param: SweepParam::Detuning,
                min: -2.0 * wm,
                max: 2.0 * wm,
                count: 401,
                scale: AxisScale::Linear,
            },
            power: AxisSpec {
                param: SweepParam::Power,
                min: 1e-9,
                max: LINEAR_RESPONSE_POWER_LIMIT,
                count: 64,
                scale: AxisScale::Log,
            },
            kappa_e: AxisSpec {
                param: SweepParam::KappaE,
                min: 0.05 * wm,
                max: 6.0 * wm,
                count: 40,
                scale: AxisScale::Log,
            },
            omega_eval: None,
            weak_threshold: WEAK_COUPLING_THRESHOLD,
            square: CouplingSquare::Modulus,
            optimizer_grid: (64, 64),
            optimizer_tolerance: 1e-4,
            optimizer_max_cycles: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (axis, want) in [
            (&self.detuning, SweepParam::Detuning),
            (&self.power, SweepParam::Power),
            (&self.kappa_e, SweepParam::KappaE),
        ] {
            axis.validate()?;
            if axis.param != want {
                return Err(Error::Sweep(format!(
                    "expected a {want:?} axis, got {:?}",
                    axis.param
                )));
            }
        }
        if self.power.min < 0.0 || self.kappa_e.min < 0.0 {
            return Err(Error::Sweep(
                "power and kappa_e axes must be non-negative".into(),
            ));
        }
        if self.optimizer_grid.0 < 2 || self.optimizer_grid.1 < 2 {
            return Err(Error::Sweep(
                "optimizer grid needs at least 2x2 points".into(),
            ));
        }
        Ok(())
    }

    fn omega_eval(&self, op: &OperatingPoint) -> f64 {
        self.omega_eval.unwrap_or(op.mode.omega_m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingRow {
    pub detuning: f64,
    pub omega_o: f64,
    pub gamma_o: f64,
}

/// γ_o and ω_o over the detuning axis.
pub fn detuning_scan(config: &SweepConfig) -> Result<Vec<DampingRow>> {
    config.validate()?;
    let base = config.base;
    par::map(&config.detuning.values(), |&d| {
        let op = base.with_detuning(d);
        let sys = op.linearize()?;
        let s = optical_spring(&sys, config.omega_eval(&op))?;
        Ok(DampingRow {
            detuning: d,
            omega_o: s.omega_o,
            gamma_o: s.gamma_o,
        })
    })
    .into_iter()
    .collect()
}

/// One (Δ, P) cell of the occupancy map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononCell {
    pub detuning: f64,
    pub power: f64,
    /// Occupancy terms; `None` when γ̃_m ≤ 0 (no steady state).
    pub result: Option<PhononResult>,
    /// max(|G|,|G_e|)/κ.
    pub weak_ratio: f64,
    pub gamma_eff: f64,
    /// Weak coupling holds and γ̃_m > 0.
    pub valid: bool,
}

impl PhononCell {
    pub fn n_ss(&self) -> Option<f64> {
        self.result.map(|r| r.n_ss)
    }

    /// n_ss < 1 in a valid cell.
    pub fn ground_state(&self) -> bool {
        self.valid && self.n_ss().is_some_and(|n| n < 1.0)
    }
}

/// Evaluates one cell; numerical failures of the mean-field solve propagate.
pub fn phonon_cell(config: &SweepConfig, op: &OperatingPoint) -> Result<PhononCell> {
    let sys = op.linearize()?;
    let spring = optical_spring(&sys, config.omega_eval(op))?;
    let result = phonon_terms(&sys, &spring, config.square).ok();
    let weak_ratio = sys.weak_coupling_ratio();
    Ok(PhononCell {
        detuning: op.detuning,
        power: op.power,
        result,
        weak_ratio,
        gamma_eff: spring.gamma_eff,
        valid: result.is_some() && weak_ratio <= config.weak_threshold,
    })
}

/// Occupancy over power (outer) × detuning (inner).
pub fn phonon_map(config: &SweepConfig) -> Result<Vec<PhononCell>> {
    config.validate()?;
    let dets = config.detuning.values();
    let pows = config.power.values();
    let nd = dets.len();
    par::map_range(nd * pows.len(), |i| {
        let op = config
            .base
            .with_power(pows[i / nd])
            .with_detuning(dets[i % nd]);
        phonon_cell(config, &op)
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub kappa_e: f64,
    pub detuning: f64,
    pub power: f64,
    /// Smallest valid occupancy found; +∞ when no cell was valid.
    pub n_min: f64,
    /// Minimum of the coarse grid alone.
    pub n_coarse: f64,
    /// Coordinate-descent cycles.
    pub iterations: usize,
    pub converged: bool,
    /// The optimum sits on the power cap.
    pub power_at_cap: bool,
}

/// Search box of the optimal-cooling problem, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoolingBounds {
    pub detuning: (f64, f64),
    pub power: (f64, f64),
}

impl CoolingBounds {
    /// Δ ∈ [−3ω_m, 0], P ∈ [1 nW, 1 mW].
    pub fn blue_side(omega_m: f64) -> Self {
        Self {
            detuning: (-3.0 * omega_m, 0.0),
            power: (1e-9, LINEAR_RESPONSE_POWER_LIMIT),
        }
    }
}

/// Valid occupancy at (Δ, ln P), +∞ elsewhere.
fn objective(config: &SweepConfig, base: &OperatingPoint, detuning: f64, log_power: f64) -> f64 {
    let op = base
        .with_detuning(detuning)
        .with_power(log_power.exp().min(LINEAR_RESPONSE_POWER_LIMIT));
    match phonon_cell(config, &op) {
        Ok(cell) if cell.valid => cell.n_ss().unwrap_or(f64::INFINITY),
        _ => f64::INFINITY,
    }
}

/// Golden-section search on [lo, hi]; returns the best point seen, which is
/// never worse than `start`.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, start: (f64, f64), tol: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut best = start;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Minimizes n_ss over (Δ, P) at one κ_e: coarse grid, then coordinate
/// descent in (Δ, ln P) with golden-section line searches of one grid cell
/// half-width, until a full cycle improves n_min by less than the relative
/// tolerance.
pub fn optimize_at(
    config: &SweepConfig,
    kappa_e: f64,
    bounds: &CoolingBounds,
) -> Result<OptimumRecord> {
    let base = config.base.with_kappa_e(kappa_e);
    let (dlo, dhi) = bounds.detuning;
    let p_cap = bounds.power.1.min(LINEAR_RESPONSE_POWER_LIMIT);
    let (llo, lhi) = (bounds.power.0.ln(), p_cap.ln());
    if !(dlo < dhi && llo < lhi) {
        return Err(Error::Sweep("optimizer bounds are empty".into()));
    }
    let (nd, np) = config.optimizer_grid;
    let dets = AxisSpec::linear(SweepParam::Detuning, dlo, dhi, nd)?.values();
    let logs = AxisSpec::linear(SweepParam::Power, llo, lhi, np)?.values();
    let coarse = par::map_range(nd * np, |i| {
        objective(config, &base, dets[i % nd], logs[i / nd])
    });
    let (imin, &n_coarse) = coarse
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");

    let mut x = (dets[imin % nd], logs[imin / nd], n_coarse);
    let mut iterations = 0;
    let mut converged = false;
    if n_coarse.is_finite() {
        let hd = (dhi - dlo) / (nd - 1) as f64;
        let hl = (lhi - llo) / (np - 1) as f64;
        while iterations < config.optimizer_max_cycles {
            iterations += 1;
            let before = x.2;
            let (d, f) = golden_min(
                |d| objective(config, &base, d, x.1),
                (x.0 - hd).max(dlo),
                (x.0 + hd).min(dhi),
                (x.0, x.2),
                hd * 1e-6,
            );
            x = (d, x.1, f);
            let (l, f) = golden_min(
                |l| objective(config, &base, x.0, l),
                (x.1 - hl).max(llo),
                (x.1 + hl).min(lhi),
                (x.1, x.2),
                hl * 1e-6,
            );
            x = (x.0, l, f);
            if (before - x.2) <= config.optimizer_tolerance * x.2.abs() {
                converged = true;
                break;
            }
        }
    }
    let power = x.1.exp().min(p_cap);
    Ok(OptimumRecord {
        kappa_e,
        detuning: x.0,
        power,
        n_min: x.2,
        n_coarse,
        iterations,
        converged,
        power_at_cap: power >= p_cap * (1.0 - 1e-9),
    })
}

/// n_min(κ_e) over the κ_e axis.
pub fn optimal_cooling(config: &SweepConfig, bounds: &CoolingBounds) -> Result<Vec<OptimumRecord>> {
    config.validate()?;
    par::map(&config.kappa_e.values(), |&k| {
        optimize_at(config, k, bounds)
    })
    .into_iter()
    .collect()
}
