use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

use graphene_optomech::cli::{load_config, run, RunOptions, Subcommand};
use graphene_optomech::config::OutputFormat;

/// Graphene membrane dissipative optomechanics: coupling profiles, optical
/// damping, phonon occupancy maps and cooling optimization.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,

    /// JSON config with unit-suffixed keys; defaults are used when omitted
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides output.dir)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Worker threads for the parallel sweeps
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Reserved; every computation is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let opts = RunOptions {
        out: args.out,
        format: args.format,
        threads: args.threads,
        seed: args.seed,
    };
    let result =
        load_config(args.config.as_deref()).and_then(|config| run(args.command, config, &opts));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if !outcome.report.ends_with('\n') {
                println!();
            }
            println!("manifest: {}", outcome.manifest_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
