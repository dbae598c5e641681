//! `sle-lab` command-line front-end.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "sle-lab",
    version,
    about = "Whole-plane SLE moments and integral means spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Dump log f and log f' of sampled whole-plane maps.
    Simulate,
    /// Monte Carlo one-point and moduli moments against closed forms.
    Moments,
    /// Two-point function at paired points.
    TwoPoint,
    /// Logarithmic coefficient statistics.
    LogCoeffs,
    /// Integral means over circles and the fitted growth exponent.
    MeansScan,
    /// Region and spectrum at one point.
    Spectrum,
    /// Region grid, separatrices and special points.
    PhaseDiagram,
    /// Spectra and quartic asymptotes in the (x, y) plane.
    XyGeometry,
    /// Universal spectrum partition and Koebe bound.
    Universal,
    /// Residual and identity suites.
    Check,
    /// Moduli moment across horizons.
    Diagnose,
}

fn run(command: Command, cfg: RunConfig) -> Result<(), CliError> {
    let cfg = cfg.resolve()?;
    let go = || match command {
        Command::Simulate => commands::simulate(&cfg),
        Command::Moments => commands::moments(&cfg),
        Command::TwoPoint => commands::two_point(&cfg),
        Command::LogCoeffs => commands::log_coeffs(&cfg),
        Command::MeansScan => commands::means_scan(&cfg),
        Command::Spectrum => commands::spectrum(&cfg),
        Command::PhaseDiagram => commands::phase_diagram_cmd(&cfg),
        Command::XyGeometry => commands::xy_geometry(&cfg),
        Command::Universal => commands::universal(&cfg),
        Command::Check => commands::check(&cfg),
        Command::Diagnose => commands::diagnose(&cfg),
    };
    match cfg.worker_count()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(format!("cannot start {n} workers: {e}")))?
            .install(go),
        None => go(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command, cli.run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sle-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
