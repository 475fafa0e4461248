//! Subcommand dispatch behind the `graphene-optomech` binary.

use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::cavity::coupling_profile;
use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::dynamics::{optical_spring, phonon_terms};
use crate::error::Error;
use crate::output::{
    spectrum_rows, write_table, Fig2Row, Fig3Row, Fig4Row, Fig5Row, Manifest, OutputError,
};
use crate::spectrum::spectrum_oracle;
use crate::sweep::{detuning_scan, optimal_cooling, phonon_map};
use crate::validate::run_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    /// κ_e(x₀) and η_κ profile (fig2)
    Coupling,
    /// Optical damping and spring versus detuning (fig3)
    Damping,
    /// Occupancy over detuning and power (fig4)
    PhononMap,
    /// Minimum occupancy versus κ_e (fig5)
    Optimal,
    /// Full-system noise spectrum at the configured operating point
    Spectrum,
    /// Invariant suite
    Validate,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Self::Coupling => "coupling",
            Self::Damping => "damping",
            Self::PhononMap => "phonon-map",
            Self::Optimal => "optimal",
            Self::Spectrum => "spectrum",
            Self::Validate => "validate",
        }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// A physics-level inconsistency in the resolved parameters.
    #[error("configuration does not resolve: {0}")]
    Resolve(Error),
    #[error(transparent)]
    Numerical(Error),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("validity guard failed: {0}")]
    Guard(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::WeakCoupling { .. } | Error::AntiDamped { .. } => CliError::Guard(e.to_string()),
            e => CliError::Numerical(e),
        }
    }
}

impl CliError {
    /// 2 config, 3 numerical (and I/O), 4 validity guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Resolve(_) => 2,
            CliError::Numerical(_) | CliError::Output(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}

/// What a successful (or guard-failed) run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
    /// Human-readable report printed by the binary.
    pub report: String,
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    Ok(match path {
        Some(p) => crate::config::parse_config(p)?,
        None => RunConfig::default(),
    })
}

/// Runs one subcommand and writes its artifacts plus `manifest.json`.
///
/// A failed `validate` suite still writes its manifest, then returns
/// [`CliError::Guard`].
pub fn run(cmd: Subcommand, mut config: RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let start = Instant::now();
    if let Some(out) = &opts.out {
        config.output.dir = out.clone();
    }
    if let Some(f) = opts.format {
        config.output.format = f;
    }
    if let Some(n) = opts.threads {
        crate::par::set_threads(n);
    }
    let dir = config.output.dir.clone();
    let format = config.output.format;

    let mut manifest = Manifest::new(cmd.name(), config.clone());
    manifest.threads = opts.threads;
    manifest.seed = opts.seed;

    if cmd == Subcommand::Validate {
        let report = run_suite(&config);
        manifest.summary = serde_json::to_value(&report).expect("report serializes");
        manifest.elapsed_s = start.elapsed().as_secs_f64();
        let manifest_path = manifest.write(&dir)?;
        let text = report.render();
        if !report.all_passed() {
            print!("{text}");
            return Err(CliError::Guard("invariant suite reported failures".into()));
        }
        return Ok(Outcome {
            manifest_path,
            manifest,
            report: text,
        });
    }

    let op = config.operating_point().map_err(CliError::Resolve)?;
    manifest.operating_point = Some(op);
    let wm = op.mode.omega_m;

    let report = match cmd {
        Subcommand::Coupling => {
            let profile = config.absorption_profile().map_err(CliError::Resolve)?;
            let axis = config.x0_axis().map_err(CliError::Resolve)?;
            let mut rows = Vec::new();
            for &d in &config.sweep.diameters_um {
                let x_zpf = config
                    .mode_for_diameter(d)
                    .map_err(CliError::Resolve)?
                    .x_zpf;
                let pts = coupling_profile(&profile, x_zpf, (axis.min, axis.max), axis.count)?;
                rows.extend(pts.iter().map(|p| Fig2Row::new(d * crate::units::MICRO, p)));
            }
            manifest
                .outputs
                .push(write_table(&dir, "fig2", &rows, format)?);
            let x_op = profile
                .position_for(op.kappa_e.min(profile.kappa_max()))
                .ok();
            manifest.summary = json!({
                "kappa_max_rad_s": profile.kappa_max(),
                "beam_waist_m": profile.geometry.waist,
                "rayleigh_range_m": profile.geometry.rayleigh_range,
                "x0_for_operating_kappa_e_m": x_op,
                "rows": rows.len(),
            });
            format!("wrote {} coupling-profile rows", rows.len())
        }
        Subcommand::Damping => {
            let sweep = config.sweep_config(op).map_err(CliError::Resolve)?;
            let rows = detuning_scan(&sweep)?;
            let table: Vec<Fig3Row> = rows.iter().map(Fig3Row::from).collect();
            manifest
                .outputs
                .push(write_table(&dir, "fig3", &table, format)?);
            let best = rows.iter().max_by(|a, b| a.gamma_o.total_cmp(&b.gamma_o));
            manifest.summary = json!({
                "detuning_convention": "delta = omega_cav - omega_pump",
                "max_gamma_o_rad_s": best.map(|r| r.gamma_o),
                "argmax_delta_rad_s": best.map(|r| r.detuning),
                "argmax_delta_over_omega_m": best.map(|r| r.detuning / wm),
                "cooling_points": rows.iter().filter(|r| r.gamma_o > 0.0).count(),
                "heating_points": rows.iter().filter(|r| r.gamma_o < 0.0).count(),
            });
            format!("wrote {} damping rows", rows.len())
        }
        Subcommand::PhononMap => {
            let sweep = config.sweep_config(op).map_err(CliError::Resolve)?;
            let cells = phonon_map(&sweep)?;
            let table: Vec<Fig4Row> = cells.iter().map(Fig4Row::from).collect();
            manifest
                .outputs
                .push(write_table(&dir, "fig4", &table, format)?);
            let best = cells
                .iter()
                .filter(|c| c.valid)
                .filter_map(|c| c.n_ss().map(|n| (c, n)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            manifest.summary = json!({
                "cells": cells.len(),
                "valid_cells": cells.iter().filter(|c| c.valid).count(),
                "ground_state_cells": cells.iter().filter(|c| c.ground_state()).count(),
                "min_valid_n_ss": best.map(|b| b.1),
                "min_at_delta_rad_s": best.map(|b| b.0.detuning),
                "min_at_power_w": best.map(|b| b.0.power),
            });
            format!("wrote {} map cells", cells.len())
        }
        Subcommand::Optimal => {
            let sweep = config.sweep_config(op).map_err(CliError::Resolve)?;
            let records = optimal_cooling(&sweep, &config.cooling_bounds(wm))?;
            let table: Vec<Fig5Row> = records.iter().map(|r| Fig5Row::new(r, wm)).collect();
            manifest
                .outputs
                .push(write_table(&dir, "fig5", &table, format)?);
            let best = records.iter().min_by(|a, b| a.n_min.total_cmp(&b.n_min));
            manifest.summary = json!({
                "points": records.len(),
                "converged": records.iter().filter(|r| r.converged).count(),
                "global_n_min": best.map(|r| r.n_min),
                "argmin_kappa_e_over_omega_m": best.map(|r| r.kappa_e / wm),
                "at_power_cap": records.iter().filter(|r| r.power_at_cap).count(),
            });
            format!("wrote {} optimum records", records.len())
        }
        Subcommand::Spectrum => {
            let sys = op.linearize()?;
            let result = spectrum_oracle(&sys, &config.spectrum_grid())?;
            manifest.outputs.push(write_table(
                &dir,
                "spectrum",
                &spectrum_rows(&result),
                format,
            )?);
            let spring = optical_spring(&sys, sys.omega_m)?;
            let analytic = phonon_terms(&sys, &spring, config.sweep.coupling_square).ok();
            let weak = sys.is_weak(config.sweep.weak_threshold);
            let summary = json!({
                "integrated_n": result.integrated_n,
                "coarse_n": result.coarse_n,
                "n_th": sys.n_th,
                "peak_center_rad_s": result.peak_center,
                "peak_width_rad_s": result.peak_width,
                "correlators": result.correlators,
                "weak_coupling_ratio": sys.weak_coupling_ratio(),
                "weak_coupling": weak,
                "analytic": analytic,
                "oracle_vs_analytic_rel": analytic.map(|a| (result.integrated_n - a.n_ss).abs() / a.n_ss),
            });
            let summary_path = dir.join("spectrum_summary.json");
            crate::output::write_json(&summary_path, &summary)?;
            manifest.outputs.push(summary_path);
            manifest.summary = summary;
            format!(
                "integrated n = {:.6} (n_th = {:.6})",
                result.integrated_n, sys.n_th
            )
        }
        Subcommand::Validate => unreachable!("handled above"),
    };

    manifest.elapsed_s = start.elapsed().as_secs_f64();
    let manifest_path = manifest.write(&dir)?;
    Ok(Outcome {
        manifest_path,
        manifest,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    fn opts(dir: &Path) -> RunOptions {
        RunOptions {
            out: Some(dir.to_path_buf()),
            ..Default::default()
        }
    }

    #[test]
    fn coupling_first_row_is_node() {
        let dir = tempfile::tempdir().unwrap();
        run(
            Subcommand::Coupling,
            RunConfig::default(),
            &opts(dir.path()),
        )
        .unwrap();
        let mut r = csv::Reader::from_path(dir.path().join("fig2.csv")).unwrap();
        let headers = r.headers().unwrap().clone();
        assert_eq!(&headers[2], "kappa_e_rad_s");
        let first = r.records().next().unwrap().unwrap();
        assert_eq!(first[2].parse::<f64>().unwrap(), 0.0);
        assert!(dir.path().join("manifest.json").exists());
    }

    #[test]
    fn zero_power_spectrum_matches_n_th() {
        let dir = tempfile::tempdir().unwrap();
        let config = parse_config_str(r#"{"drive": {"power_uw": 0}}"#).unwrap();
        let out = run(Subcommand::Spectrum, config, &opts(dir.path())).unwrap();
        let s = &out.manifest.summary;
        let n = s["integrated_n"].as_f64().unwrap();
        let n_th = s["n_th"].as_f64().unwrap();
        assert!((n - n_th).abs() / n_th < 5e-3);
    }

    #[test]
    fn unresolvable_config_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let config = parse_config_str(r#"{"geometry_coupling": {"x0_nm": 0}}"#).unwrap();
        let err = run(Subcommand::Damping, config, &opts(dir.path())).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{err}");
    }

    #[test]
    fn guard_errors_exit_4() {
        let e: CliError = Error::AntiDamped { gamma_eff: -1.0 }.into();
        assert_eq!(e.exit_code(), 4);
        let e: CliError = Error::NotConverged.into();
        assert_eq!(e.exit_code(), 3);
    }
}
