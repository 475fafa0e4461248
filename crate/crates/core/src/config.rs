//! Run configuration: JSON with unit-suffixed keys, resolved to SI values.
//!
//! Every key carries its unit (`diameter_um`, `kappa_c_over_2pi_hz`, ...).
//! A key whose stem matches a known field but whose suffix does not is
//! reported as a unit mismatch rather than silently ignored.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

use crate::cavity::{beam_waist, coupling_eta, effective_area, AbsorptionProfile, CavitySpec};
use crate::dynamics::{CouplingSquare, WEAK_COUPLING_THRESHOLD};
use crate::membrane::{MechanicalMode, MembraneSpec};
use crate::model::OperatingPoint;
use crate::spectrum::SpectrumGrid;
use crate::sweep::{AxisScale, AxisSpec, CoolingBounds, SweepConfig, SweepParam};
use crate::units::{hz_to_rad, KG_PER_UM2, MICRO, NANO};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unit mismatch: `{key}` is not accepted, expected `{expected}`")]
    UnitMismatch { key: String, expected: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("`geometry_coupling` and `coupling_override` are mutually exclusive")]
    ExclusiveCoupling,
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

fn parse_error(e: serde_json::Error) -> ConfigError {
    ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MembraneBlock {
    pub diameter_um: f64,
    pub strain: f64,
    pub stiffness_2d_n_per_m: f64,
    pub areal_density_kg_per_um2: f64,
    pub gamma_m_over_2pi_hz: f64,
    pub temperature_k: f64,
}

impl Default for MembraneBlock {
    fn default() -> Self {
        Self {
            diameter_um: 30.0,
            strain: 0.01,
            stiffness_2d_n_per_m: 340.0,
            areal_density_kg_per_um2: 7.4e-19,
            gamma_m_over_2pi_hz: 10.0,
            temperature_k: 0.26,
        }
    }
}

/// Fixes ω_m and/or n_th directly instead of deriving them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MechanicsOverride {
    pub omega_m_over_2pi_hz: Option<f64>,
    pub n_th: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityBlock {
    pub length_um: f64,
    pub wavelength_nm: f64,
    pub kappa_c_over_2pi_hz: f64,
    pub waist_um: Option<f64>,
    pub max_rayleigh_deficit: f64,
    pub fermi_factor: f64,
}

impl Default for CavityBlock {
    fn default() -> Self {
        Self {
            length_um: 30.0,
            wavelength_nm: 600.0,
            kappa_c_over_2pi_hz: 1e6,
            waist_um: None,
            max_rayleigh_deficit: 10.0,
            fermi_factor: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveBlock {
    pub power_uw: f64,
    /// Δ = ω_cav − ω_p.
    pub detuning_over_2pi_hz: f64,
}

impl Default for DriveBlock {
    fn default() -> Self {
        Self {
            power_uw: 5.0,
            detuning_over_2pi_hz: 0.0,
        }
    }
}

/// κ_e and η_κ derived from the membrane position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryCoupling {
    pub x0_nm: f64,
    /// Defaults to A_eff(x₀) over the membrane area, capped at 1.
    #[serde(default)]
    pub area_ratio: Option<f64>,
}

/// κ_e, η_κ and A_eff/A given directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingOverride {
    pub kappa_e_over_2pi_hz: f64,
    pub eta_kappa: f64,
    pub area_ratio: f64,
}

impl Default for CouplingOverride {
    fn default() -> Self {
        Self {
            kappa_e_over_2pi_hz: 45e6,
            eta_kappa: 2.2e-3,
            area_ratio: 0.01,
        }
    }
}

/// An axis whose bounds are in units of ω_m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeAxis {
    pub min_over_omega_m: f64,
    pub max_over_omega_m: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerAxis {
    pub min_w: f64,
    pub max_w: f64,
    pub count: usize,
    #[serde(default = "log_scale")]
    pub scale: AxisScale,
}

fn log_scale() -> AxisScale {
    AxisScale::Log
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionAxis {
    pub min_nm: f64,
    pub max_nm: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerBlock {
    pub detuning_min_over_omega_m: f64,
    pub detuning_max_over_omega_m: f64,
    pub power_min_w: f64,
    pub power_max_w: f64,
    pub grid_detuning: usize,
    pub grid_power: usize,
    pub tolerance: f64,
    pub max_cycles: usize,
}

impl Default for OptimizerBlock {
    fn default() -> Self {
        Self {
            detuning_min_over_omega_m: -3.0,
            detuning_max_over_omega_m: 0.0,
            power_min_w: 1e-9,
            power_max_w: 1e-3,
            grid_detuning: 64,
            grid_power: 64,
            tolerance: 1e-4,
            max_cycles: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepBlock {
    pub detuning: RelativeAxis,
    pub power: PowerAxis,
    pub kappa_e: RelativeAxis,
    /// Coupling-profile positions; `None` means [0, λ/2].
    pub x0: Option<PositionAxis>,
    pub diameters_um: Vec<f64>,
    /// Optical-spring evaluation frequency; `None` means ω_m.
    pub omega_eval_over_omega_m: Option<f64>,
    pub weak_threshold: f64,
    pub coupling_square: CouplingSquare,
    pub optimizer: OptimizerBlock,
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self {
            detuning: RelativeAxis {
                min_over_omega_m: -2.0,
                max_over_omega_m: 2.0,
                count: 401,
                scale: AxisScale::Linear,
            },
            power: PowerAxis {
                min_w: 1e-9,
                max_w: 1e-3,
                count: 64,
                scale: AxisScale::Log,
            },
            kappa_e: RelativeAxis {
                min_over_omega_m: 0.05,
                max_over_omega_m: 6.0,
                count: 40,
                scale: AxisScale::Log,
            },
            x0: None,
            diameters_um: vec![30.0],
            omega_eval_over_omega_m: None,
            weak_threshold: WEAK_COUPLING_THRESHOLD,
            coupling_square: CouplingSquare::Modulus,
            optimizer: OptimizerBlock::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumBlock {
    pub points_per_half: usize,
    pub refinement_tolerance: f64,
}

impl Default for SpectrumBlock {
    fn default() -> Self {
        let g = SpectrumGrid::default();
        Self {
            points_per_half: g.points_per_half,
            refinement_tolerance: g.refinement_tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

/// The whole configuration file, with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub membrane: MembraneBlock,
    pub mechanics_override: Option<MechanicsOverride>,
    pub cavity: CavityBlock,
    pub drive: DriveBlock,
    pub geometry_coupling: Option<GeometryCoupling>,
    pub coupling_override: Option<CouplingOverride>,
    pub sweep: SweepBlock,
    pub spectrum: SpectrumBlock,
    pub output: OutputBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            membrane: MembraneBlock::default(),
            mechanics_override: None,
            cavity: CavityBlock::default(),
            drive: DriveBlock::default(),
            geometry_coupling: None,
            coupling_override: Some(CouplingOverride::default()),
            sweep: SweepBlock::default(),
            spectrum: SpectrumBlock::default(),
            output: OutputBlock::default(),
        }
    }
}

/// Known keys per block, used for the unit-mismatch scan.
const SCHEMA: &[(&str, &[&str])] = &[
    (
        "",
        &[
            "membrane",
            "mechanics_override",
            "cavity",
            "drive",
            "geometry_coupling",
            "coupling_override",
            "sweep",
            "spectrum",
            "output",
        ],
    ),
    (
        "membrane",
        &[
            "diameter_um",
            "strain",
            "stiffness_2d_n_per_m",
            "areal_density_kg_per_um2",
            "gamma_m_over_2pi_hz",
            "temperature_k",
        ],
    ),
    ("mechanics_override", &["omega_m_over_2pi_hz", "n_th"]),
    (
        "cavity",
        &[
            "length_um",
            "wavelength_nm",
            "kappa_c_over_2pi_hz",
            "waist_um",
            "max_rayleigh_deficit",
            "fermi_factor",
        ],
    ),
    ("drive", &["power_uw", "detuning_over_2pi_hz"]),
    ("geometry_coupling", &["x0_nm", "area_ratio"]),
    (
        "coupling_override",
        &["kappa_e_over_2pi_hz", "eta_kappa", "area_ratio"],
    ),
    (
        "sweep",
        &[
            "detuning",
            "power",
            "kappa_e",
            "x0",
            "diameters_um",
            "omega_eval_over_omega_m",
            "weak_threshold",
            "coupling_square",
            "optimizer",
        ],
    ),
    (
        "sweep.detuning",
        &["min_over_omega_m", "max_over_omega_m", "count", "scale"],
    ),
    (
        "sweep.kappa_e",
        &["min_over_omega_m", "max_over_omega_m", "count", "scale"],
    ),
    ("sweep.power", &["min_w", "max_w", "count", "scale"]),
    ("sweep.x0", &["min_nm", "max_nm", "count"]),
    (
        "sweep.optimizer",
        &[
            "detuning_min_over_omega_m",
            "detuning_max_over_omega_m",
            "power_min_w",
            "power_max_w",
            "grid_detuning",
            "grid_power",
            "tolerance",
            "max_cycles",
        ],
    ),
    ("spectrum", &["points_per_half", "refinement_tolerance"]),
    ("output", &["dir", "format"]),
];

/// Unit suffixes, longest first so that `_over_2pi_hz` wins over `_hz`.
const SUFFIXES: &[&str] = &[
    "_kg_per_um2",
    "_kg_per_m2",
    "_over_2pi_hz",
    "_over_omega_m",
    "_n_per_m",
    "_rad_s",
    "_ghz",
    "_mhz",
    "_khz",
    "_hz",
    "_um",
    "_nm",
    "_mm",
    "_uw",
    "_nw",
    "_mw",
    "_m",
    "_w",
    "_k",
    "_s",
];

fn stem(key: &str) -> &str {
    SUFFIXES
        .iter()
        .find_map(|s| key.strip_suffix(s))
        .unwrap_or(key)
}

fn scan_keys(value: &Value, path: &str) -> Result<(), ConfigError> {
    let Some(obj) = value.as_object() else {
        return Ok(());
    };
    let Some((_, known)) = SCHEMA.iter().find(|(p, _)| *p == path) else {
        return Ok(());
    };
    for (key, child) in obj {
        let full = if path.is_empty() {
            key.clone()
        } else {
            format!("{path}.{key}")
        };
        if known.contains(&key.as_str()) {
            scan_keys(child, &full)?;
            continue;
        }
        if let Some(expected) = known.iter().find(|k| stem(k) == stem(key)) {
            let expected = if path.is_empty() {
                expected.to_string()
            } else {
                format!("{path}.{expected}")
            };
            return Err(ConfigError::UnitMismatch {
                key: full,
                expected,
            });
        }
        return Err(ConfigError::UnknownKey(full));
    }
    Ok(())
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(parse_error)?;
    if !value.is_object() {
        return Err(ConfigError::invalid("<root>", "must be a JSON object"));
    }
    scan_keys(&value, "")?;
    let has = |k: &str| value.get(k).is_some_and(|v| !v.is_null());
    if has("geometry_coupling") && has("coupling_override") {
        return Err(ConfigError::ExclusiveCoupling);
    }
    let mut config: RunConfig = serde_json::from_str(text).map_err(parse_error)?;
    if has("geometry_coupling") {
        config.coupling_override = None;
    } else if config.coupling_override.is_none() {
        config.coupling_override = Some(CouplingOverride::default());
    }
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

fn check(field: &str, ok: bool, reason: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, reason))
    }
}

fn check_positive(field: &str, v: f64) -> Result<(), ConfigError> {
    check(field, v.is_finite() && v > 0.0, "must be positive")
}

fn check_non_negative(field: &str, v: f64) -> Result<(), ConfigError> {
    check(field, v.is_finite() && v >= 0.0, "must be non-negative")
}

fn check_axis(
    field: &str,
    min: f64,
    max: f64,
    count: usize,
    scale: AxisScale,
) -> Result<(), ConfigError> {
    check(field, count >= 2, "count must be at least 2")?;
    check(
        field,
        min.is_finite() && max.is_finite() && min < max,
        "min must be below max",
    )?;
    check(
        field,
        scale != AxisScale::Log || min > 0.0,
        "log axis needs a positive min",
    )
}

impl RunConfig {
    /// Field-level checks; physics-level consistency is checked by
    /// [`Self::operating_point`].
    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.membrane;
        check_positive("membrane.diameter_um", m.diameter_um)?;
        check(
            "membrane.strain",
            (1e-4..=0.1).contains(&m.strain),
            "must lie in [1e-4, 0.1]",
        )?;
        check_positive("membrane.stiffness_2d_n_per_m", m.stiffness_2d_n_per_m)?;
        check_positive(
            "membrane.areal_density_kg_per_um2",
            m.areal_density_kg_per_um2,
        )?;
        check_positive("membrane.gamma_m_over_2pi_hz", m.gamma_m_over_2pi_hz)?;
        check_non_negative("membrane.temperature_k", m.temperature_k)?;
        if let Some(o) = &self.mechanics_override {
            if let Some(w) = o.omega_m_over_2pi_hz {
                check_positive("mechanics_override.omega_m_over_2pi_hz", w)?;
            }
            if let Some(n) = o.n_th {
                check_non_negative("mechanics_override.n_th", n)?;
            }
        }
        let c = &self.cavity;
        check_positive("cavity.length_um", c.length_um)?;
        check_positive("cavity.wavelength_nm", c.wavelength_nm)?;
        check_positive("cavity.kappa_c_over_2pi_hz", c.kappa_c_over_2pi_hz)?;
        check_positive("cavity.max_rayleigh_deficit", c.max_rayleigh_deficit)?;
        check(
            "cavity.fermi_factor",
            (0.0..=1.0).contains(&c.fermi_factor),
            "must lie in [0, 1]",
        )?;
        if let Some(w) = c.waist_um {
            check_positive("cavity.waist_um", w)?;
        }
        check_non_negative("drive.power_uw", self.drive.power_uw)?;
        check(
            "drive.detuning_over_2pi_hz",
            self.drive.detuning_over_2pi_hz.is_finite(),
            "must be finite",
        )?;
        match (&self.geometry_coupling, &self.coupling_override) {
            (Some(_), Some(_)) => return Err(ConfigError::ExclusiveCoupling),
            (None, None) => {
                return Err(ConfigError::invalid(
                    "coupling",
                    "no coupling block is active",
                ))
            }
            (Some(g), None) => {
                check(
                    "geometry_coupling.x0_nm",
                    g.x0_nm.is_finite(),
                    "must be finite",
                )?;
                if let Some(r) = g.area_ratio {
                    check_non_negative("geometry_coupling.area_ratio", r)?;
                }
            }
            (None, Some(o)) => {
                check_non_negative(
                    "coupling_override.kappa_e_over_2pi_hz",
                    o.kappa_e_over_2pi_hz,
                )?;
                check(
                    "coupling_override.eta_kappa",
                    o.eta_kappa.is_finite(),
                    "must be finite",
                )?;
                check_non_negative("coupling_override.area_ratio", o.area_ratio)?;
            }
        }
        let s = &self.sweep;
        let d = &s.detuning;
        check_axis(
            "sweep.detuning",
            d.min_over_omega_m,
            d.max_over_omega_m,
            d.count,
            d.scale,
        )?;
        let k = &s.kappa_e;
        check_axis(
            "sweep.kappa_e",
            k.min_over_omega_m,
            k.max_over_omega_m,
            k.count,
            k.scale,
        )?;
        check_non_negative("sweep.kappa_e.min_over_omega_m", k.min_over_omega_m)?;
        let p = &s.power;
        check_axis("sweep.power", p.min_w, p.max_w, p.count, p.scale)?;
        check_non_negative("sweep.power.min_w", p.min_w)?;
        if let Some(x) = &s.x0 {
            check_axis("sweep.x0", x.min_nm, x.max_nm, x.count, AxisScale::Linear)?;
        }
        check(
            "sweep.diameters_um",
            !s.diameters_um.is_empty(),
            "needs at least one diameter",
        )?;
        for d in &s.diameters_um {
            check_positive("sweep.diameters_um", *d)?;
        }
        if let Some(w) = s.omega_eval_over_omega_m {
            check(
                "sweep.omega_eval_over_omega_m",
                w.is_finite(),
                "must be finite",
            )?;
        }
        check_positive("sweep.weak_threshold", s.weak_threshold)?;
        let o = &s.optimizer;
        check_axis(
            "sweep.optimizer.detuning",
            o.detuning_min_over_omega_m,
            o.detuning_max_over_omega_m,
            2,
            AxisScale::Linear,
        )?;
        check_axis(
            "sweep.optimizer.power",
            o.power_min_w,
            o.power_max_w,
            2,
            AxisScale::Log,
        )?;
        check(
            "sweep.optimizer.power_max_w",
            o.power_max_w <= 1e-3,
            "must not exceed the 1 mW cap",
        )?;
        check(
            "sweep.optimizer.grid_detuning",
            o.grid_detuning >= 2,
            "must be at least 2",
        )?;
        check(
            "sweep.optimizer.grid_power",
            o.grid_power >= 2,
            "must be at least 2",
        )?;
        check_positive("sweep.optimizer.tolerance", o.tolerance)?;
        check(
            "sweep.optimizer.max_cycles",
            o.max_cycles >= 1,
            "must be at least 1",
        )?;
        check(
            "spectrum.points_per_half",
            self.spectrum.points_per_half >= 16,
            "must be at least 16",
        )?;
        check_positive(
            "spectrum.refinement_tolerance",
            self.spectrum.refinement_tolerance,
        )?;
        Ok(())
    }

    pub fn membrane_spec(&self) -> MembraneSpec {
        self.membrane_spec_with_diameter(self.membrane.diameter_um)
    }

    pub fn membrane_spec_with_diameter(&self, diameter_um: f64) -> MembraneSpec {
        let m = &self.membrane;
        MembraneSpec {
            diameter: diameter_um * MICRO,
            strain: m.strain,
            stiffness_2d: m.stiffness_2d_n_per_m,
            areal_density: m.areal_density_kg_per_um2 * KG_PER_UM2,
            intrinsic_damping: hz_to_rad(m.gamma_m_over_2pi_hz),
            temperature: m.temperature_k,
        }
    }

    pub fn cavity_spec(&self) -> CavitySpec {
        let c = &self.cavity;
        CavitySpec {
            length: c.length_um * MICRO,
            wavelength: c.wavelength_nm * NANO,
            coupling_decay: hz_to_rad(c.kappa_c_over_2pi_hz),
            waist_override: c.waist_um.map(|w| w * MICRO),
            max_rayleigh_deficit: c.max_rayleigh_deficit,
        }
    }

    pub fn absorption_profile(&self) -> crate::Result<AbsorptionProfile> {
        let cavity = self.cavity_spec();
        AbsorptionProfile::new(cavity, beam_waist(&cavity)?, self.cavity.fermi_factor)
    }

    /// Mechanical mode of a membrane of the given diameter, with any override.
    pub fn mode_for_diameter(&self, diameter_um: f64) -> crate::Result<MechanicalMode> {
        let mode = MechanicalMode::from_spec(&self.membrane_spec_with_diameter(diameter_um))?;
        match &self.mechanics_override {
            Some(o) => mode.with_overrides(o.omega_m_over_2pi_hz.map(hz_to_rad), o.n_th),
            None => Ok(mode),
        }
    }

    pub fn mode(&self) -> crate::Result<MechanicalMode> {
        self.mode_for_diameter(self.membrane.diameter_um)
    }

    /// Resolves the fixed parameter block to SI values.
    pub fn operating_point(&self) -> crate::Result<OperatingPoint> {
        let mode = self.mode()?;
        let cavity = self.cavity_spec();
        cavity.validate()?;
        let (kappa_e, eta_kappa, area_ratio) =
            match (&self.geometry_coupling, &self.coupling_override) {
                (Some(g), _) => {
                    let profile = self.absorption_profile()?;
                    let x0 = g.x0_nm * NANO;
                    let kappa_e = profile.kappa_e(x0)?;
                    let eta = coupling_eta(&profile, x0, mode.x_zpf)?;
                    let area = self.membrane_spec().diameter.powi(2) * std::f64::consts::PI / 4.0;
                    let ratio = g
                        .area_ratio
                        .unwrap_or_else(|| (effective_area(&profile.geometry, x0) / area).min(1.0));
                    (kappa_e, eta, ratio)
                }
                (None, Some(o)) => (hz_to_rad(o.kappa_e_over_2pi_hz), o.eta_kappa, o.area_ratio),
                (None, None) => {
                    let o = CouplingOverride::default();
                    (hz_to_rad(o.kappa_e_over_2pi_hz), o.eta_kappa, o.area_ratio)
                }
            };
        let op = OperatingPoint {
            mode,
            gamma_m: hz_to_rad(self.membrane.gamma_m_over_2pi_hz),
            kappa_c: cavity.coupling_decay,
            kappa_e,
            eta_kappa,
            area_ratio,
            omega_cav: cavity.omega_cav(),
            power: self.drive.power_uw * MICRO,
            detuning: hz_to_rad(self.drive.detuning_over_2pi_hz),
        };
        op.validate()?;
        Ok(op)
    }

    /// Sweep axes resolved against ω_m of the operating point.
    pub fn sweep_config(&self, base: OperatingPoint) -> crate::Result<SweepConfig> {
        let wm = base.mode.omega_m;
        let s = &self.sweep;
        let rel = |param, a: &RelativeAxis| {
            AxisSpec::new(
                param,
                a.min_over_omega_m * wm,
                a.max_over_omega_m * wm,
                a.count,
                a.scale,
            )
        };
        let cfg = SweepConfig {
            base,
            detuning: rel(SweepParam::Detuning, &s.detuning)?,
            power: AxisSpec::new(
                SweepParam::Power,
                s.power.min_w,
                s.power.max_w,
                s.power.count,
                s.power.scale,
            )?,
            kappa_e: rel(SweepParam::KappaE, &s.kappa_e)?,
            omega_eval: s.omega_eval_over_omega_m.map(|r| r * wm),
            weak_threshold: s.weak_threshold,
            square: s.coupling_square,
            optimizer_grid: (s.optimizer.grid_detuning, s.optimizer.grid_power),
            optimizer_tolerance: s.optimizer.tolerance,
            optimizer_max_cycles: s.optimizer.max_cycles,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn cooling_bounds(&self, omega_m: f64) -> CoolingBounds {
        let o = &self.sweep.optimizer;
        CoolingBounds {
            detuning: (
                o.detuning_min_over_omega_m * omega_m,
                o.detuning_max_over_omega_m * omega_m,
            ),
            power: (o.power_min_w, o.power_max_w),
        }
    }

    /// Coupling-profile positions in metres.
    pub fn x0_axis(&self) -> crate::Result<AxisSpec> {
        match &self.sweep.x0 {
            Some(x) => AxisSpec::linear(SweepParam::X0, x.min_nm * NANO, x.max_nm * NANO, x.count),
            None => AxisSpec::linear(
                SweepParam::X0,
                0.0,
                self.cavity_spec().wavelength / 2.0,
                401,
            ),
        }
    }

    pub fn spectrum_grid(&self) -> SpectrumGrid {
        SpectrumGrid {
            points_per_half: self.spectrum.points_per_half,
            refinement_tolerance: self.spectrum.refinement_tolerance,
        }
    }
}
