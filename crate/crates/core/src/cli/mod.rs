//! Config-driven experiment commands behind the `kgosc` binary.
//!
//! Exit codes: `0` success, `1` usage or parse error, `2` domain or
//! assumption failure, `3` numerical failure.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::counterexamples::CounterexampleError;
use crate::simulator::SimError;
use crate::solitary::SolitaryError;
use crate::spectral::Taper;

pub use commands::{cmd_check, cmd_counterexample, cmd_simulate, cmd_solve, cmd_spectrum};
pub use config::{Counterexample, CounterexampleArgs, ExperimentConfig, Family, InitialData, LoadedConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Domain(_) => 2,
            Self::Numerical(_) => 3,
        }
    }

    pub(crate) fn io(what: &str, e: impl std::fmt::Display) -> Self {
        Self::Usage(format!("{what}: {e}"))
    }

    pub(crate) fn from_counterexample(e: CounterexampleError) -> Self {
        match e {
            CounterexampleError::Grid(g) => Self::from(g),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::NonFinite { .. } | SimError::AllSolvesFailed(_) => Self::Numerical(e.to_string()),
            _ => Self::Domain(e.to_string()),
        }
    }
}

impl From<SolitaryError> for CliError {
    fn from(e: SolitaryError) -> Self {
        match e {
            SolitaryError::OmegaOutOfRange { .. } | SolitaryError::GuessLength { .. } | SolitaryError::BadStep(_) => {
                Self::Domain(e.to_string())
            }
            _ => Self::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kgosc", version, about = "Klein-Gordon field with point nonlinear oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structural assumptions and lower-bound constants of a model.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve for a solitary wave or continue a branch in ω.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "omega_range")]
        omega: Option<f64>,
        /// `start:end:step`
        #[arg(long, allow_hyphen_values = true)]
        omega_range: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Evolve one or more configurations and write observer series.
    Simulate {
        /// May be repeated; each config then writes to `<out>/<stem>/`.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides the seed of perturbed initial data.
        #[arg(long)]
        seed: Option<u64>,
        /// Runs up to K configurations concurrently.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Windowed time spectra of a trace from an observer CSV.
    Spectrum {
        /// Observer series CSV written by `simulate`.
        #[arg(long)]
        trace: PathBuf,
        /// `t0:T[,t0:T...]`
        #[arg(long)]
        windows: String,
        /// Signal name: `psi_J`, `pi_J` or `probe_K` (columns `re_<name>`, `im_<name>`).
        #[arg(long, default_value = "psi_1")]
        signal: String,
        #[arg(long, value_enum, default_value = "hann")]
        taper: TaperArg,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Construct and verify an exact two-frequency solution.
    Counterexample(CounterexampleCmd),
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum TaperArg {
    Hann,
    None,
}

impl From<TaperArg> for Taper {
    fn from(t: TaperArg) -> Self {
        match t {
            TaperArg::Hann => Taper::Hann,
            TaperArg::None => Taper::None,
        }
    }
}

#[derive(Debug, Args)]
pub struct CounterexampleCmd {
    #[arg(long, value_enum)]
    pub kind: Family,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also evolve the solution's own initial data to this time.
    #[arg(long)]
    pub simulate: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub dx: f64,
    /// `t0:T[,t0:T...]` windows for spectra of the X_1 trace when simulating.
    #[arg(long)]
    pub windows: Option<String>,
}

/// Parses `a:b:c`-style lists of floats.
pub(crate) fn parse_floats(text: &str, sep: char) -> Result<Vec<f64>, CliError> {
    text.split(sep)
        .map(|p| p.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("bad number '{p}': {e}"))))
        .collect()
}

/// Parses `t0:T[,t0:T...]`.
pub fn parse_windows(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|w| match parse_floats(w, ':')?.as_slice() {
            [t0, len] => Ok((*t0, *len)),
            _ => Err(CliError::Usage(format!("window '{w}' must be t0:T"))),
        })
        .collect()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Check { config } => cmd_check(&config),
        Command::Solve { config, omega, omega_range, out } => cmd_solve(&config, omega, omega_range.as_deref(), &out),
        Command::Simulate { config, out, seed, parallel } => cmd_simulate(&config, &out, seed, parallel),
        Command::Spectrum { trace, windows, signal, taper, out } => {
            parse_windows(&windows).and_then(|w| cmd_spectrum(&trace, &w, &signal, taper.into(), &out))
        }
        Command::Counterexample(c) => cmd_counterexample(&c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_lists() {
        assert_eq!(parse_windows("10:20,40:20").unwrap(), vec![(10.0, 20.0), (40.0, 20.0)]);
        assert!(parse_windows("10").is_err());
        assert!(parse_windows("a:1").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["kgosc", "bogus"]), 1);
        assert_eq!(run(["kgosc", "check"]), 1);
        assert_eq!(run(["kgosc", "--help"]), 0);
    }
}
