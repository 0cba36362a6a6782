//! `graphene-revivals`: time scales, autocorrelation, currents and
//! broadening scans for Landau-level wave packets in graphene.

// `!(x >= 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Command, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "graphene-revivals", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Classical, revival and Zitterbewegung periods
    Timescales(Flags),
    /// Autocorrelation A(t) as t_fs, re_A, im_A, abs2_A
    Autocorr(Flags),
    /// Currents as t_fs, jx_evf, jy_evf
    Current(Flags),
    /// Revival visibility over a range of level broadenings
    GammaScan(Flags),
}

/// Every flag can also be given as `key=value` in the config file; flags win.
#[derive(Debug, Args)]
struct Flags {
    /// key=value settings file, or an earlier output to replay
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Magnetic field, T
    #[arg(long = "B", value_name = "TESLA")]
    b: Option<String>,
    /// Fermi velocity, m/s
    #[arg(long)]
    vf: Option<String>,
    /// Central Landau level
    #[arg(long)]
    n0: Option<String>,
    /// Gaussian width parameter
    #[arg(long)]
    sigma: Option<String>,
    /// pos, neg or both
    #[arg(long)]
    bands: Option<String>,
    /// Level broadening Γ, meV
    #[arg(long)]
    gamma_mev: Option<String>,
    /// Gap energy, meV
    #[arg(long)]
    gap_mev: Option<String>,
    /// Relative tail tolerance of the truncated packet
    #[arg(long)]
    tail_tol: Option<String>,
    /// Grid start, fs
    #[arg(long)]
    t_start_fs: Option<String>,
    /// Grid end, fs (default 1.1·T_R)
    #[arg(long)]
    t_end_fs: Option<String>,
    /// Number of grid samples
    #[arg(long)]
    samples: Option<String>,
    /// k1 or both
    #[arg(long)]
    valleys: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Report currents in A·m (multiplied by e·v_F) instead of e·v_F
    #[arg(long)]
    si_current: bool,
    /// Damp A(t) with the broadening envelope
    #[arg(long)]
    damp_autocorr: bool,
    /// gamma-scan: first Γ, meV
    #[arg(long)]
    gamma_from_mev: Option<String>,
    /// gamma-scan: last Γ, meV
    #[arg(long)]
    gamma_to_mev: Option<String>,
    /// gamma-scan: number of Γ values
    #[arg(long)]
    gamma_steps: Option<String>,
    /// gamma-scan: early-log or station
    #[arg(long)]
    criterion: Option<String>,
    /// gamma-scan: decades per classical period allowed by early-log
    #[arg(long)]
    decades_per_period: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let opts = [
            ("B", &self.b),
            ("vf", &self.vf),
            ("n0", &self.n0),
            ("sigma", &self.sigma),
            ("bands", &self.bands),
            ("gamma-mev", &self.gamma_mev),
            ("gap-mev", &self.gap_mev),
            ("tail-tol", &self.tail_tol),
            ("t-start-fs", &self.t_start_fs),
            ("t-end-fs", &self.t_end_fs),
            ("samples", &self.samples),
            ("valleys", &self.valleys),
            ("format", &self.format),
            ("gamma-from-mev", &self.gamma_from_mev),
            ("gamma-to-mev", &self.gamma_to_mev),
            ("gamma-steps", &self.gamma_steps),
            ("criterion", &self.criterion),
            ("decades-per-period", &self.decades_per_period),
        ];
        let mut out: Vec<(&'static str, String)> = opts
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.si_current {
            out.push(("si-current", "true".into()));
        }
        if self.damp_autocorr {
            out.push(("damp-autocorr", "true".into()));
        }
        out
    }
}

fn build_config(command: Command, flags: &Flags) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::new(command);
    if let Some(path) = &flags.config {
        config.load_file(path)?;
    }
    for (key, value) in flags.overrides() {
        config.set(key, &value)?;
    }
    config.resolve()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, flags) = match &cli.command {
        Sub::Timescales(f) => (Command::Timescales, f),
        Sub::Autocorr(f) => (Command::Autocorr, f),
        Sub::Current(f) => (Command::Current, f),
        Sub::GammaScan(f) => (Command::GammaScan, f),
    };
    let config = build_config(command, flags)?;
    let text = commands::execute(&config)?;
    match &flags.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
        }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
