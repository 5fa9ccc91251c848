//! `oscket` command-line driver.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain or numeric error.
//! Data goes to standard output (or `--output`), diagnostics to standard
//! error.

mod commands;
mod config_file;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use output::Format;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "oscket",
    version,
    about = "Oscillating-eigenket spin and position model: sweeps, Bell/CHSH reports, Monte Carlo runs",
    args_override_self = true
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write data here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// key=value file supplying defaults for this subcommand's flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Worker threads for Monte Carlo and scans (results do not depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sweep θ and tabulate the standard, tick-grid and continuous laws.
    Eprb(EprbArgs),
    /// CHSH statistic: closed form, optional grid scan and Monte Carlo.
    Chsh(ChshArgs),
    /// Three-axis Bell inequality with c bisecting a and b.
    Bell(BellArgs),
    /// Survival curve of the discretely firing gun.
    Cat(CatArgs),
    /// Error of the first-order translation against the exact one.
    Position(PositionArgs),
    /// Hidden position samples x' + δ_n, optionally after a measurement.
    Hidden(HiddenArgs),
}

impl Command {
    pub const NAMES: [&'static str; 6] = ["eprb", "chsh", "bell", "cat", "position", "hidden"];

    fn name(&self) -> &'static str {
        match self {
            Command::Eprb(_) => "eprb",
            Command::Chsh(_) => "chsh",
            Command::Bell(_) => "bell",
            Command::Cat(_) => "cat",
            Command::Position(_) => "position",
            Command::Hidden(_) => "hidden",
        }
    }
}

/// ω and φ, given either in radians or in units of π.
#[derive(Debug, Clone, Args, Serialize)]
pub struct PhaseArgs {
    /// Angular frequency in units of π per tick.
    #[arg(long, default_value_t = 2.0, overrides_with = "omega")]
    pub omega_pi: f64,
    /// Angular frequency in radians per tick (overrides --omega-pi).
    #[arg(long, overrides_with = "omega_pi")]
    pub omega: Option<f64>,
    /// Phase in units of π.
    #[arg(long, default_value_t = 0.0, overrides_with = "phi")]
    pub phi_pi: f64,
    /// Phase in radians (overrides --phi-pi).
    #[arg(long, overrides_with = "phi_pi")]
    pub phi: Option<f64>,
}

impl PhaseArgs {
    pub fn omega_rad(&self) -> f64 {
        self.omega.unwrap_or(self.omega_pi * std::f64::consts::PI)
    }

    pub fn phi_rad(&self) -> f64 {
        self.phi.unwrap_or(self.phi_pi * std::f64::consts::PI)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EprbArgs {
    /// Single angle between the axes, in degrees (replaces the sweep).
    #[arg(long)]
    pub theta_deg: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub theta_start_deg: f64,
    #[arg(long, default_value_t = 180.0)]
    pub theta_stop_deg: f64,
    #[arg(long, default_value_t = 15.0)]
    pub theta_step_deg: f64,
    /// Tick index.
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    /// Real time in ticks for the continuous law (defaults to n).
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub phase: PhaseArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChshArgs {
    #[arg(long, default_value_t = 0.0)]
    pub a_deg: f64,
    #[arg(long, default_value_t = 90.0)]
    pub a_prime_deg: f64,
    #[arg(long, default_value_t = 45.0)]
    pub b_deg: f64,
    #[arg(long, default_value_t = 135.0)]
    pub b_prime_deg: f64,
    /// Search coplanar axes on a grid instead of using the given angles.
    #[arg(long)]
    pub scan: bool,
    /// Grid step for --scan, in degrees.
    #[arg(long, default_value_t = 22.5)]
    pub step_deg: f64,
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    /// Monte Carlo trials per correlation term (0 skips the estimate).
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BellArgs {
    #[arg(long, default_value_t = 120.0)]
    pub theta_deg: f64,
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    /// Twice the spin quantum number.
    #[arg(long, default_value_t = 1)]
    pub twice_s: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CatArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phase: PhaseArgs,
    #[arg(long, default_value_t = 20)]
    pub ticks: u64,
    /// Simulated cages for the empirical curve (0 skips simulation).
    #[arg(long, default_value_t = 10_000)]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PositionArgs {
    /// Number of grid sites L.
    #[arg(long, default_value_t = 256)]
    pub grid_l: usize,
    /// Site spacing h.
    #[arg(long, default_value_t = 1.0)]
    pub grid_h: f64,
    /// Test vector occupies Fourier modes 1..=modes.
    #[arg(long, default_value_t = 3)]
    pub modes: i64,
    /// Explicit displacements (comma separated); replaces the log sweep.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 9)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleArg {
    Uniform,
    Sinusoidal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HiddenArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x_center: f64,
    /// Aperture Δ.
    #[arg(long, default_value_t = 1.0)]
    pub delta_cap: f64,
    /// Measure first, replacing Δ with this value.
    #[arg(long)]
    pub measure_delta_cap: Option<f64>,
    #[arg(long, value_enum, default_value_t = RuleArg::Uniform)]
    pub rule: RuleArg,
    /// Period in ticks of the sinusoidal rule.
    #[arg(long, default_value_t = 16)]
    pub period: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exit code for usage and parse errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for domain and numeric errors.
pub const EXIT_DOMAIN: i32 = 2;

fn parse(args: &[OsString]) -> Result<Cli, clap::Error> {
    Cli::try_parse_from(args)
}

fn report_clap(err: clap::Error) -> i32 {
    use clap::error::ErrorKind;
    match err.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            print!("{err}");
            0
        }
        _ => {
            eprint!("{err}");
            EXIT_USAGE
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let cli = match parse(&args) {
        Ok(cli) => cli,
        Err(e) => return report_clap(e),
    };
    let cli = match &cli.config {
        None => cli,
        Some(path) => {
            let merged = match config_file::merge(&args, path, cli.command.name()) {
                Ok(merged) => merged,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return EXIT_USAGE;
                }
            };
            match parse(&merged) {
                Ok(cli) => cli,
                Err(e) => return report_clap(e),
            }
        }
    };

    let result = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli)),
            Err(e) => {
                eprintln!("error: cannot start thread pool: {e}");
                return EXIT_DOMAIN;
            }
        },
        None => commands::execute(&cli),
    };

    let bytes = match result {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DOMAIN;
        }
    };
    if let Err(e) = output::write_bytes(cli.output.as_deref(), &bytes) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_DOMAIN;
    }
    0
}
