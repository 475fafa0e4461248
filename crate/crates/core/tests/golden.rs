//! Frozen fig3-fig5 tables from the first full run (reduced grids).
//! Regenerate with `GOLDEN_UPDATE=1 cargo test --test golden`.

use std::path::{Path, PathBuf};

use graphene_optomech::cli::{run, RunOptions, Subcommand};
use graphene_optomech::config::parse_config_str;

const FIG3: &str = r#"{
    "mechanics_override": {"omega_m_over_2pi_hz": 55e6, "n_th": 100},
    "coupling_override": {"kappa_e_over_2pi_hz": 45e6, "eta_kappa": 2.2e-3, "area_ratio": 0.01},
    "sweep": {"detuning": {"min_over_omega_m": -2, "max_over_omega_m": 2, "count": 81}}
}"#;

const FIG4: &str = r#"{
    "mechanics_override": {"omega_m_over_2pi_hz": 55e6, "n_th": 100},
    "coupling_override": {"kappa_e_over_2pi_hz": 45e6, "eta_kappa": 2.2e-3, "area_ratio": 0.1},
    "sweep": {"detuning": {"min_over_omega_m": -2, "max_over_omega_m": 2, "count": 21},
              "power": {"min_w": 1e-9, "max_w": 1e-3, "count": 13}}
}"#;

const FIG5: &str = r#"{
    "membrane": {"gamma_m_over_2pi_hz": 5},
    "mechanics_override": {"omega_m_over_2pi_hz": 55e6, "n_th": 100},
    "coupling_override": {"kappa_e_over_2pi_hz": 45e6, "eta_kappa": 2.2e-3, "area_ratio": 0.1},
    "sweep": {"kappa_e": {"min_over_omega_m": 0.1, "max_over_omega_m": 6, "count": 12, "scale": "log"},
              "optimizer": {"grid_detuning": 16, "grid_power": 16}}
}"#;

const REL_TOL: f64 = 1e-9;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn close(a: &str, b: &str) -> bool {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x == y || (x - y).abs() <= REL_TOL * x.abs().max(y.abs()),
        _ => a == b,
    }
}

fn check(cmd: Subcommand, config: &str, file: &str) {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        out: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    run(cmd, parse_config_str(config).unwrap(), &opts).unwrap();
    let fresh = std::fs::read_to_string(dir.path().join(file)).unwrap();
    let golden_path = golden_dir().join(file);
    if std::env::var_os("GOLDEN_UPDATE").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&golden_path, &fresh).unwrap();
        return;
    }
    let golden = std::fs::read_to_string(&golden_path).unwrap();
    let (g, f): (Vec<_>, Vec<_>) = (golden.lines().collect(), fresh.lines().collect());
    assert_eq!(g.len(), f.len(), "{file}: row count");
    assert_eq!(g[0], f[0], "{file}: header");
    for (i, (gl, fl)) in g.iter().zip(&f).enumerate().skip(1) {
        let (gs, fs): (Vec<_>, Vec<_>) = (gl.split(',').collect(), fl.split(',').collect());
        assert_eq!(gs.len(), fs.len(), "{file}:{i}");
        for (a, b) in gs.iter().zip(&fs) {
            assert!(close(a, b), "{file}:{}: golden {gl} vs fresh {fl}", i + 1);
        }
    }
}

#[test]
fn fig3_matches_golden() {
    check(Subcommand::Damping, FIG3, "fig3.csv");
}

#[test]
fn fig4_matches_golden() {
    check(Subcommand::PhononMap, FIG4, "fig4.csv");
}

#[test]
fn fig5_matches_golden() {
    check(Subcommand::Optimal, FIG5, "fig5.csv");
}
