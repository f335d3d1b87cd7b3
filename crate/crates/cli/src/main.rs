use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// The run finished but a check it reports on did not pass.
    #[error("{0}")]
    Acceptance(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) | CliError::Io { .. } => 2,
            CliError::Acceptance(_) => 3,
        }
    }
}

impl From<wentzell::Error> for CliError {
    fn from(e: wentzell::Error) -> Self {
        use wentzell::Error as E;
        match e {
            E::InvalidParameter(_)
            | E::NegativeCoupling(_)
            | E::GridMismatch(_)
            | E::GeometryMismatch(_)
            | E::OutsideDomain { .. }
            | E::Cfl { .. }
            | E::Divergent(_)
            | E::Unsupported(_) => CliError::Validation(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

/// Free scalar field with dynamical (Wentzell) boundary conditions.
#[derive(Debug, Parser)]
#[command(name = "wentzell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Physical {
    /// Strip half-width.
    #[arg(long = "S", default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
    /// Boundary coupling c > 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Bulk mass.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, cache and verify the strip mode table.
    Modes {
        #[command(flatten)]
        phys: Physical,
        /// Highest mode index.
        #[arg(long, default_value_t = 200)]
        max: usize,
        /// Directory for the mode cache.
        #[arg(long, env = "WENTZELL_CACHE_DIR", default_value = ".wentzell-cache")]
        cache_dir: PathBuf,
        /// CSV of the table; stdout gets the report either way.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time evolution on the strip, or the half-space reflection test.
    Evolve {
        #[command(flatten)]
        phys: Physical,
        #[arg(long, value_enum, default_value_t = Scenario::Standing)]
        scenario: Scenario,
        /// Number of grid intervals.
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        cfl: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        /// Output rows, evenly spaced in time.
        #[arg(long, default_value_t = 200)]
        rows: usize,
        /// Append field values at this many equispaced points.
        #[arg(long, default_value_t = 0)]
        snapshots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary two-point function samples and the tail report.
    Twopoint {
        #[command(flatten)]
        phys: Physical,
        #[arg(long, value_enum, default_value_t = GeometryArg::Strip)]
        geometry: GeometryArg,
        /// Mode cutoff on the strip.
        #[arg(long, default_value_t = 50)]
        max: usize,
        /// Momentum cutoff on the half-space.
        #[arg(long, default_value_t = 1e3)]
        q_max: f64,
        /// Space-time dimension of the boundary field.
        #[arg(long, default_value_t = 1)]
        dim: u32,
        /// Samples run over x⁰ ∈ [−range, range] for d = 1 and over spacelike
        /// distances (0, range] for d ≥ 2.
        #[arg(long, default_value_t = 5.0)]
        range: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, env = "WENTZELL_CACHE_DIR", default_value = ".wentzell-cache")]
        cache_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Holographic dual f′ of a bulk test function.
    Holo {
        #[command(flatten)]
        phys: Physical,
        /// The localized test function of the reflection figure (S = c = 1, μ = 0).
        #[arg(long)]
        fig2: bool,
        /// Gaussian bulk function: centre in z.
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        center: f64,
        /// Gaussian bulk function: variance parameter in z.
        #[arg(long, default_value_t = 0.08)]
        width: f64,
        /// Size of the mode table.
        #[arg(long, default_value_t = 40)]
        max: usize,
        /// Fixed mode cutoff; by default 99.9% of the coefficient energy.
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, env = "WENTZELL_CACHE_DIR", default_value = ".wentzell-cache")]
        cache_dir: PathBuf,
        /// Output directory for fhat.csv, fprime.csv and meta.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Run only these criteria.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=12))]
        criteria: Vec<u8>,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Band-limited strip data, compared against the spectral solution.
    Standing,
    /// Gaussian pulse at the centre of the strip.
    Pulse,
    /// Zero data.
    Zero,
    /// Exact boundary reflection on the half-space.
    Reflection,
    /// Light-cone and domain-of-dependence probe.
    Causality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Strip,
    Halfspace,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Modes { phys, max, cache_dir, out } => commands::modes(phys, max, &cache_dir, out.as_deref()),
        Command::Evolve { phys, scenario, grid_n, cfl, t_end, rows, snapshots, out } => {
            commands::evolve(phys, scenario, grid_n, cfl, t_end, rows, snapshots, out.as_deref())
        }
        Command::Twopoint { phys, geometry, max, q_max, dim, range, samples, cache_dir, out } => {
            commands::twopoint(phys, geometry, max, q_max, dim, range, samples, &cache_dir, out.as_deref())
        }
        Command::Holo { phys, fig2, center, width, max, cutoff, cache_dir, out } => {
            commands::holo(phys, fig2, center, width, max, cutoff, &cache_dir, out.as_deref())
        }
        Command::Verify { criteria, out } => commands::verify(&criteria, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wentzell: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
