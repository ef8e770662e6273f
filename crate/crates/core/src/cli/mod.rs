//! Command-line front end. [`execute`] does all the work and returns the
//! exit code and output text, so the binary is a thin shell around it.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_specialize, cmd_spectrum, cmd_verify, cmd_wavefunction, gaussian_probe, spectrum_csv,
    wavefunction_csv, MethodArg, Outcome, Target, ANNIHILATION_TOL, FACTORIZATION_TOL,
    OPERATOR_TOL, SHAPE_TOL, SPECIALIZE_TOL,
};
pub use config::{
    CaseConfig, ConfigError, GridConfig, OutputFormat, Problem, RunConfig, SolverConfig,
    DEFAULT_MAX_LEVELS,
};

#[derive(Debug, Parser)]
#[command(name = "shapeinv", version, about = "Shape-invariant potentials and Klein-Gordon spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies, analytic and/or finite-difference.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual checks of one structural property.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a named potential onto the five-parameter family.
    Specialize {
        /// JSON file with `case_id` and `target_params`.
        #[arg(long, conflicts_with = "case")]
        config: Option<PathBuf>,
        #[arg(long)]
        case: Option<String>,
        /// Target parameter as NAME=VALUE; repeatable.
        #[arg(long = "param", value_parser = parse_pair)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level `n` sampled on the grid as `r,psi` CSV.
    Wavefunction {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("parameter `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::config_error(format!("config: cannot read {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<Problem, Outcome> {
    let text = read(path)?;
    RunConfig::parse(&text)
        .and_then(|c| c.resolve())
        .map_err(|e| Outcome::config_error(e.to_string()))
}

fn load_case(
    config: Option<&Path>,
    case: Option<&str>,
    params: &[(String, f64)],
) -> Result<crate::families::CaseSpec, Outcome> {
    let cfg = match (config, case) {
        (Some(path), _) => CaseConfig::parse(&read(path)?).map_err(|e| Outcome::config_error(e.to_string()))?,
        (None, Some(id)) => CaseConfig::from_pairs(id, params),
        (None, None) => {
            return Err(Outcome::config_error("config error: specialize needs --config or --case"))
        }
    };
    cfg.resolve().map_err(|e| Outcome::config_error(e.to_string()))
}

fn deliver(outcome: Outcome, out: Option<&Path>) -> Outcome {
    let Some(path) = out else { return outcome };
    if outcome.stdout.is_empty() {
        return outcome;
    }
    match std::fs::write(path, &outcome.stdout) {
        Ok(()) => Outcome {
            stdout: String::new(),
            ..outcome
        },
        Err(e) => Outcome::config_error(format!("out: cannot write {}: {e}", path.display())),
    }
}

/// Runs a parsed command.
pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Spectrum { config, method, out } => {
            let outcome = load_problem(&config).map_or_else(|e| e, |p| cmd_spectrum(&p, method));
            deliver(outcome, out.as_deref())
        }
        Command::Verify { config, target, out } => {
            let outcome = load_problem(&config).map_or_else(|e| e, |p| cmd_verify(&p, target));
            deliver(outcome, out.as_deref())
        }
        Command::Specialize {
            config,
            case,
            params,
            out,
        } => {
            let outcome = load_case(config.as_deref(), case.as_deref(), &params)
                .map_or_else(|e| e, |c| cmd_specialize(&c));
            deliver(outcome, out.as_deref())
        }
        Command::Wavefunction { config, n, out } => {
            let outcome = load_problem(&config).map_or_else(|e| e, |p| cmd_wavefunction(&p, n));
            deliver(outcome, out.as_deref())
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Usage
/// errors exit with 1; `--help` and `--version` exit with 0.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::config_error(text.trim_end().to_string())
            } else {
                Outcome::ok(text)
            }
        }
    }
}
