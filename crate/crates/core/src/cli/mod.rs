//! Command-line front end: sweeps, surfaces, freezing reports and oracle validation.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{Format, GeometryKind, Measure, Mode, Preset, RunConfig};

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
            CliError::ValidationFailed(_) => EXIT_VALIDATION,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn finite_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

fn triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    Ok([finite_f64(parts[0])?, finite_f64(parts[1])?, finite_f64(parts[2])?])
}

#[derive(Debug, Parser)]
#[command(name = "coherence-bath", version, about = "Coherence of atoms in a vacuum field near a mirror")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Coherence trajectory of one atom: `q,c_l1,c_re`.
    Single,
    /// Coherence trajectory of a Bell-diagonal pair with atom A coupled.
    Two,
    /// Long-format `u,q,value` surface for an equatorial single atom.
    Surface,
    /// Freezing analysis with a numerical check of the slopes.
    Freeze,
    /// Closed forms against the master-equation integrator.
    Validate,
}

/// Flags that override the configuration file.
#[derive(Debug, Default, clap::Args)]
pub struct Overrides {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for `validate`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub n_cases: Option<usize>,
    /// Write the effective configuration to this file before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,

    #[arg(long, global = true, value_parser = finite_f64, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, value_parser = finite_f64, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Correlation vector `c1,c2,c3`.
    #[arg(long, global = true, value_parser = triple, allow_hyphen_values = true)]
    pub c: Option<[f64; 3]>,

    #[arg(long, global = true, value_enum)]
    pub geometry: Option<GeometryKind>,
    /// Atom-mirror distance in units of `c / omega0`; implies `--geometry mirror`.
    #[arg(long, global = true, value_parser = finite_f64)]
    pub u: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub polarization: Option<Preset>,
    /// Explicit polarization weights `ax,ay,az`.
    #[arg(long, global = true, value_parser = triple)]
    pub weights: Option<[f64; 3]>,
    #[arg(long, global = true, value_parser = finite_f64)]
    pub omega_ratio: Option<f64>,
    #[arg(long, global = true, value_parser = finite_f64)]
    pub omega0_time_scale: Option<f64>,

    #[arg(long, global = true, value_parser = finite_f64)]
    pub q_start: Option<f64>,
    #[arg(long, global = true, value_parser = finite_f64)]
    pub q_stop: Option<f64>,
    #[arg(long, global = true)]
    pub q_count: Option<usize>,
    #[arg(long, global = true, value_parser = finite_f64)]
    pub u_start: Option<f64>,
    #[arg(long, global = true, value_parser = finite_f64)]
    pub u_stop: Option<f64>,
    #[arg(long, global = true)]
    pub u_count: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub measure: Option<Measure>,
    /// System analysed by `freeze`.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($src:expr, $dst:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(self.out.clone().map(Some), cfg.output.path);
        set!(self.format, cfg.output.format);
        set!(self.seed, cfg.validate.seed);
        set!(self.n_cases, cfg.validate.n_cases);
        set!(self.theta, cfg.single.theta);
        set!(self.phi, cfg.single.phi);
        if let Some([c1, c2, c3]) = self.c {
            cfg.two.c1 = c1;
            cfg.two.c2 = c2;
            cfg.two.c3 = c3;
        }
        if self.u.is_some() {
            cfg.environment.geometry = GeometryKind::Mirror;
            cfg.environment.u = self.u;
        }
        set!(self.geometry, cfg.environment.geometry);
        if let Some(p) = self.polarization {
            cfg.environment.polarization = p;
            cfg.environment.weights = None;
        }
        set!(self.weights.map(Some), cfg.environment.weights);
        set!(self.omega_ratio, cfg.environment.omega_ratio);
        set!(self.omega0_time_scale, cfg.environment.omega0_time_scale);
        set!(self.q_start, cfg.q_grid.start);
        set!(self.q_stop, cfg.q_grid.stop);
        set!(self.q_count, cfg.q_grid.count);
        set!(self.u_start, cfg.u_grid.start);
        set!(self.u_stop, cfg.u_grid.stop);
        set!(self.u_count, cfg.u_grid.count);
        set!(self.measure, cfg.surface.measure);
        set!(self.mode, cfg.freeze.mode);
    }
}

/// Resolves the configuration and dispatches to a command.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    cfg.check_finite()?;
    if let Some(path) = &cli.overrides.save_config {
        cfg.save(path)?;
    }
    commands::dispatch(cli.command, &cfg)
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("coherence-bath: {e}");
            e.exit_code()
        }
    }
}
