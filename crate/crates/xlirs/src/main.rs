//! Command-line front end: scenario reports, parameter sweeps with CSV and
//! plot-script output, and the cross-model validation suite.
//!
//! Exit codes: 0 success, 1 failed validation checks, 2 config parse error,
//! 3 invalid configuration or arguments, 4 quadrature non-convergence,
//! 5 I/O error.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use xlirs::harness::config::ScenarioConfig;
use xlirs::harness::csv::write_csv;
use xlirs::harness::plot::write_plot_script;
use xlirs::harness::sweep::{parse_grid, run_scenario, run_sweep, ModelTag, SweepSpec, SweepVar};
use xlirs::harness::validate::run_checks;
use xlirs::{Error, UpwConfig};

#[derive(Parser)]
#[command(
    name = "xlirs",
    version,
    about = "Near-field SNR models for links assisted by an extremely large-scale reflecting surface",
    after_help = "The XLIRS_THREADS environment variable caps the worker pool (0 = auto)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate SNR models for one scenario config
    Snr {
        /// Scenario config file (flat key = value text)
        config: PathBuf,
        /// Comma-separated model tags (default: all, inapplicable ones are
        /// reported as skipped)
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
        /// Also print linear-scale values
        #[arg(long)]
        linear: bool,
        /// Override the plane-wave reference gain beta0^2 (m^4); default is
        /// the aperture-matched value, `isotropic` selects (lambda/4pi)^4
        #[arg(long)]
        upw_beta0_sq: Option<String>,
    },
    /// Sweep one scenario variable and write a CSV table
    Sweep {
        /// Scenario config file providing the base scenario
        config: PathBuf,
        /// Variable to sweep: L (square surface side), Lz (column length),
        /// or rq (transmitter range)
        #[arg(long)]
        var: String,
        /// Grid: `start:stop:steps` (inclusive, linear) or `v1,v2,...`
        #[arg(long)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated model tags (default depends on the variable)
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
        /// Also write a gnuplot script next to the CSV (same stem, .gp)
        #[arg(long)]
        emit_plotscript: bool,
        /// Override the plane-wave reference gain beta0^2 (m^4) or `isotropic`
        #[arg(long)]
        upw_beta0_sq: Option<String>,
    },
    /// Run the cross-model validation suite
    Validate {
        /// Only run checks whose name or tag matches one of these
        #[arg(long, value_delimiter = ',')]
        tags: Vec<String>,
        /// List available checks and exit
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    reset_sigpipe();
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Restore default SIGPIPE behavior so `xlirs ... | head` terminates
/// quietly instead of panicking on a closed pipe.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

/// XLIRS_THREADS caps the rayon pool; 0 or unset means automatic.
fn init_thread_pool() {
    if let Ok(raw) = std::env::var("XLIRS_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            Err(_) => eprintln!("warning: ignoring non-numeric XLIRS_THREADS={raw}"),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConfigParse { .. } => 2,
        Error::Validation(_)
        | Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch(_)
        | Error::Domain(_)
        | Error::NotApplicable(_) => 3,
        Error::QuadratureNonConvergence { .. } => 4,
        Error::Io { .. } => 5,
    }
}

fn parse_models(raw: Option<Vec<String>>) -> Result<Option<Vec<ModelTag>>, Error> {
    match raw {
        None => Ok(None),
        Some(names) => names
            .iter()
            .map(|n| ModelTag::parse(n.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
    }
}

/// `--upw-beta0-sq` accepts a positive number (m^4) or the word `isotropic`.
fn parse_upw(raw: Option<String>, wavelength_m: f64) -> Result<Option<UpwConfig>, Error> {
    match raw.as_deref() {
        None => Ok(None),
        Some("isotropic") => Ok(Some(UpwConfig::isotropic_reference(wavelength_m))),
        Some(text) => {
            let value: f64 = text.parse().map_err(|_| {
                Error::Validation(format!(
                    "invalid --upw-beta0-sq `{text}` (expected a number or `isotropic`)"
                ))
            })?;
            Ok(Some(UpwConfig::new(value)?))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Snr {
            config,
            models,
            linear,
            upw_beta0_sq,
        } => {
            let cfg = ScenarioConfig::from_file(&config)?;
            let tags = parse_models(models)?.unwrap_or_else(|| ModelTag::ALL.to_vec());
            let upw = parse_upw(upw_beta0_sq, cfg.wavelength_m)?;
            let entries = run_scenario(&config, &tags, upw.as_ref())?;
            if linear {
                println!(
                    "{:<20} {:>14} {:>16}  diagnostics",
                    "model", "snr_db", "snr_linear"
                );
            } else {
                println!("{:<20} {:>14}  diagnostics", "model", "snr_db");
            }
            for entry in entries {
                match entry.outcome {
                    Ok(est) => {
                        let notes = est.diagnostics().join("; ");
                        let notes = if notes.is_empty() {
                            "-".to_string()
                        } else {
                            notes
                        };
                        if linear {
                            println!(
                                "{:<20} {:>14.4} {:>16.6e}  {}",
                                entry.label,
                                est.db(),
                                est.value(),
                                notes
                            );
                        } else {
                            println!("{:<20} {:>14.4}  {}", entry.label, est.db(), notes);
                        }
                    }
                    Err(reason) => {
                        if linear {
                            println!(
                                "{:<20} {:>14} {:>16}  skipped: {}",
                                entry.label, "-", "-", reason
                            );
                        } else {
                            println!("{:<20} {:>14}  skipped: {}", entry.label, "-", reason);
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            var,
            grid,
            out,
            models,
            emit_plotscript,
            upw_beta0_sq,
        } => {
            let cfg = ScenarioConfig::from_file(&config)?;
            let variable = SweepVar::parse(&var)?;
            let grid = parse_grid(&grid)?;
            let tags = parse_models(models)?.unwrap_or_else(|| ModelTag::defaults_for(variable));
            let upw = parse_upw(upw_beta0_sq, cfg.wavelength_m)?;
            let mut spec = SweepSpec::new(cfg, variable, grid, tags)?;
            if let Some(upw) = upw {
                spec = spec.with_upw(upw);
            }
            let table = run_sweep(&spec)?;
            write_csv(&table, &out)?;
            println!(
                "wrote {} rows x {} model columns to {}",
                table.rows.len(),
                table.columns.len(),
                out.display()
            );
            if emit_plotscript {
                let script_path = out.with_extension("gp");
                write_plot_script(&table, &out.to_string_lossy(), &script_path)?;
                println!("wrote plot script to {}", script_path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { tags, list } => {
            if list {
                for (name, check_tags) in xlirs::harness::validate::available_checks() {
                    println!("{name} [{}]", check_tags.join(", "));
                }
                return Ok(ExitCode::SUCCESS);
            }
            let outcomes = run_checks(&tags)?;
            let mut failures = 0usize;
            for outcome in &outcomes {
                let status = if outcome.passed { "PASS" } else { "FAIL" };
                println!("{status} {:<32} {}", outcome.name, outcome.detail);
                if !outcome.passed {
                    failures += 1;
                }
            }
            println!(
                "{} checks, {} passed, {} failed",
                outcomes.len(),
                outcomes.len() - failures,
                failures
            );
            if failures > 0 {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}
