//! CSV/JSON artifact writers and the run manifest.
//!
//! Column names carry units, and column order is fixed by the row structs.

use serde::Serialize;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::cavity::CouplingPoint;
use crate::config::{OutputFormat, RunConfig};
use crate::model::OperatingPoint;
use crate::spectrum::SpectrumResult;
use crate::sweep::{DampingRow, OptimumRecord, PhononCell};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig2Row {
    pub diameter_m: f64,
    pub x0_m: f64,
    pub kappa_e_rad_s: f64,
    pub eta_kappa: Option<f64>,
    pub eta_sqrt2ke: f64,
    #[serde(rename = "A_eff_m2")]
    pub a_eff_m2: f64,
}

impl Fig2Row {
    pub fn new(diameter: f64, p: &CouplingPoint) -> Self {
        Self {
            diameter_m: diameter,
            x0_m: p.x0,
            kappa_e_rad_s: p.kappa_e,
            eta_kappa: p.eta_kappa,
            eta_sqrt2ke: p.eta_sqrt2ke,
            a_eff_m2: p.a_eff,
        }
    }
}

/// Δ = ω_cav − ω_p throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row {
    pub delta_cav_minus_pump_rad_s: f64,
    pub gamma_o_rad_s: f64,
    pub omega_o_rad_s: f64,
}

impl From<&DampingRow> for Fig3Row {
    fn from(r: &DampingRow) -> Self {
        Self {
            delta_cav_minus_pump_rad_s: r.detuning,
            gamma_o_rad_s: r.gamma_o,
            omega_o_rad_s: r.omega_o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig4Row {
    pub delta_cav_minus_pump_rad_s: f64,
    pub power_w: f64,
    pub n_ss: Option<f64>,
    pub term_thermal: Option<f64>,
    pub term_sigma_noise: Option<f64>,
    pub term_light_noise: Option<f64>,
    pub weak_ratio: f64,
    pub gamma_eff_rad_s: f64,
    pub valid: bool,
    pub ground_state: bool,
}

impl From<&PhononCell> for Fig4Row {
    fn from(c: &PhononCell) -> Self {
        Self {
            delta_cav_minus_pump_rad_s: c.detuning,
            power_w: c.power,
            n_ss: c.n_ss(),
            term_thermal: c.result.map(|r| r.term_thermal),
            term_sigma_noise: c.result.map(|r| r.term_sigma_noise),
            term_light_noise: c.result.map(|r| r.term_light_noise),
            weak_ratio: c.weak_ratio,
            gamma_eff_rad_s: c.gamma_eff,
            valid: c.valid,
            ground_state: c.ground_state(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig5Row {
    pub kappa_e_rad_s: f64,
    pub kappa_e_over_omega_m: f64,
    pub delta_opt_rad_s: f64,
    pub power_opt_w: f64,
    pub n_min: f64,
    pub n_coarse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub power_at_cap: bool,
}

impl Fig5Row {
    pub fn new(r: &OptimumRecord, omega_m: f64) -> Self {
        Self {
            kappa_e_rad_s: r.kappa_e,
            kappa_e_over_omega_m: r.kappa_e / omega_m,
            delta_opt_rad_s: r.detuning,
            power_opt_w: r.power,
            n_min: r.n_min,
            n_coarse: r.n_coarse,
            iterations: r.iterations,
            converged: r.converged,
            power_at_cap: r.power_at_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub omega_rad_s: f64,
    #[serde(rename = "S_nm")]
    pub s_nm: f64,
}

pub fn spectrum_rows(r: &SpectrumResult) -> Vec<SpectrumRow> {
    r.omega
        .iter()
        .zip(&r.s_nm)
        .map(|(&omega_rad_s, &s_nm)| SpectrumRow { omega_rad_s, s_nm })
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot encode {path}: {message}")]
    Encode { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, OutputError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(path))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

/// Writes `rows` as `<stem>.csv` or `<stem>.json`; returns the path.
pub fn write_table<T: Serialize>(
    dir: &Path,
    stem: &str,
    rows: &[T],
    format: OutputFormat,
) -> Result<PathBuf, OutputError> {
    let path = match format {
        OutputFormat::Csv => dir.join(format!("{stem}.csv")),
        OutputFormat::Json => dir.join(format!("{stem}.json")),
    };
    let file = create(&path)?;
    let encode = |message: String| OutputError::Encode {
        path: path.clone(),
        message,
    };
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(file);
            for row in rows {
                w.serialize(row).map_err(|e| encode(e.to_string()))?;
            }
            w.flush().map_err(io_err(&path))?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(file, rows).map_err(|e| encode(e.to_string()))?;
        }
    }
    Ok(path)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), OutputError> {
    let file = create(path)?;
    serde_json::to_writer_pretty(file, value).map_err(|e| OutputError::Encode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub parallel: bool,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    /// Resolved configuration, defaults included.
    pub config: RunConfig,
    /// The same parameters in SI units.
    pub operating_point: Option<OperatingPoint>,
    pub outputs: Vec<PathBuf>,
    pub elapsed_s: f64,
    /// Subcommand-specific results.
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn new(subcommand: &str, config: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            parallel: crate::par::is_parallel(),
            threads: None,
            seed: None,
            config,
            operating_point: None,
            outputs: Vec::new(),
            elapsed_s: 0.0,
            summary: serde_json::Value::Null,
        }
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, OutputError> {
        let path = dir.join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_missing_values() {
        let dir = tempfile::tempdir().unwrap();
        let rows = [Fig2Row {
            diameter_m: 3e-5,
            x0_m: 0.0,
            kappa_e_rad_s: 0.0,
            eta_kappa: None,
            eta_sqrt2ke: 1.5,
            a_eff_m2: 2e-12,
        }];
        let p = write_table(dir.path(), "fig2", &rows, OutputFormat::Csv).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "diameter_m,x0_m,kappa_e_rad_s,eta_kappa,eta_sqrt2ke,A_eff_m2"
        );
        assert_eq!(lines.next().unwrap(), "0.00003,0.0,0.0,,1.5,2e-12");
    }

    #[test]
    fn json_table_is_array() {
        let dir = tempfile::tempdir().unwrap();
        let rows = [SpectrumRow {
            omega_rad_s: 1.0,
            s_nm: 2.0,
        }];
        let p = write_table(dir.path(), "spectrum", &rows, OutputFormat::Json).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(v[0]["S_nm"], 2.0);
    }
}
