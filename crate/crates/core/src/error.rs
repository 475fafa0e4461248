use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {what} = {value:e} ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("inconsistent cavity geometry: Rayleigh range {rayleigh_range:e} m is more than {factor}x short of L/2 = {half_length:e} m")]
    GeometryInconsistent {
        rayleigh_range: f64,
        half_length: f64,
        factor: f64,
    },

    /// η_κ itself diverges at a field node; use the product form instead.
    #[error("coupling parameter singular at x0 = {x0:e} m (|sin kx0| = {sin_kx:e} below floor)")]
    NodeSingularity { x0: f64, sin_kx: f64 },

    #[error("self-consistent steady state did not converge after {iterations} iterations (last relative change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("steady state is not converged")]
    NotConverged,

    #[error(
        "weak-coupling condition violated: max(|G|,|G_e|)/kappa = {ratio:e} exceeds {threshold:e}"
    )]
    WeakCoupling { ratio: f64, threshold: f64 },

    #[error("effective mechanical damping {gamma_eff:e} rad/s is not positive; no steady state")]
    AntiDamped { gamma_eff: f64 },

    #[error("linear system is singular at omega = {omega:e} rad/s")]
    Singular { omega: f64 },

    #[error("spectrum quadrature did not stabilize: {coarse:e} vs {fine:e} (relative change {change:e})")]
    QuadratureConvergence { coarse: f64, fine: f64, change: f64 },

    #[error("invalid sweep: {0}")]
    Sweep(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            reason,
        }
    }
}

/// Ensures `value > 0` (and finite).
pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(what, value, "must be positive"))
    }
}

/// Ensures `value >= 0` (and finite).
pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(what, value, "must be non-negative"))
    }
}
