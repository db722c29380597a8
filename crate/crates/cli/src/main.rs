//! `holevo`: tables and reports for the PPM phase-diffusion Holevo bound.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ppm_holevo::{ErrorKind, Limits, DEFAULT_DIM_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "holevo",
    version,
    about = "Holevo bound of PPM coherent light under phase diffusion"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write the document to PATH (atomically) instead of standard output.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,

    /// Largest matrix dimension any command may build.
    #[arg(long, env = "HOLEVO_DIM_CAP", default_value_t = DEFAULT_DIM_CAP, global = true)]
    dim_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// κ lists accept `0`, `inf`, values, comma lists and `log:a:b:count`.
#[derive(Debug, Subcommand)]
enum Command {
    /// Basis dimensions of photon-number sectors.
    Dims {
        /// Photon numbers: value, list or a:b.
        #[arg(long = "N")]
        photons: String,
        /// Time bins: value, list or a:b.
        #[arg(long = "L")]
        bins: String,
        /// Symbols per bin: value, list or a:b.
        #[arg(long = "M", default_value = "2")]
        symbols: String,
    },
    /// One-photon Holevo quantity, exact and asymptotic.
    Chi1 {
        #[arg(long = "L")]
        bins: String,
        #[arg(long = "M", default_value = "2")]
        symbols: String,
        /// Defaults to 0, 13 log-spaced values over [0.01, 10], and inf.
        #[arg(long)]
        kappa: Option<String>,
    },
    /// A single sector contribution X^(N).
    Sector {
        #[arg(long = "N")]
        photons: u32,
        #[arg(long = "L")]
        bins: usize,
        #[arg(long = "M", default_value_t = 2)]
        symbols: u32,
        #[arg(long)]
        kappa: String,
    },
    /// X^(N) against N X^(1) for N = 1..=n-max over a κ grid.
    SectorsSweep {
        #[arg(long = "L")]
        bins: usize,
        #[arg(long = "M", default_value_t = 2)]
        symbols: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Poisson-weighted Holevo quantity per channel use against n̄.
    Holevo {
        #[arg(long = "L")]
        bins: usize,
        #[arg(long = "M", default_value_t = 2)]
        symbols: u32,
        #[arg(long)]
        kappa: String,
        /// Mean photons per bin: value, list or start:stop:step.
        #[arg(long)]
        n_bar: String,
        /// Photon-number truncation; must keep 95% of the mean for every n̄.
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Single-bin erasure and binary-Holevo baselines with slopes.
    Baselines {
        #[arg(long)]
        n_bar: String,
    },
    /// Two-photon splitting: independent against collective dephasing.
    Splitting {
        #[arg(long = "L")]
        bins: usize,
        #[arg(long = "M", default_value_t = 2)]
        symbols: u32,
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Quadrature of the Toeplitz symbol entropy against its closed form.
    Szego {
        /// Defaults to 13 log-spaced values over [0.01, 10], and inf.
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Checks X^(N) <= N X^(1) for 2 <= N <= n-max.
    Conjecture {
        #[arg(long = "L")]
        bins: usize,
        #[arg(long = "M", default_value_t = 2)]
        symbols: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        kappa: Option<String>,
    },
}

/// Failure of a command, mapped onto the process exit status.
#[derive(Debug)]
pub enum CliError {
    Argument(String),
    Core(ppm_holevo::Error),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Argument(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Argument => 2,
                ErrorKind::Resource => 3,
                ErrorKind::Numerical => 4,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Argument(m) => write!(f, "invalid argument: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<ppm_holevo::Error> for CliError {
    fn from(e: ppm_holevo::Error) -> Self {
        CliError::Core(e)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HOLEVO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Argument(format!("HOLEVO_THREADS must be an integer, got {raw:?}"))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Argument(format!("cannot start {n} threads: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let limits = Limits {
        dim_cap: cli.dim_cap,
        ..Limits::default()
    };
    let doc = commands::dispatch(cli.command, &limits)?;
    let text = match cli.format {
        Format::Csv => doc.to_csv(),
        Format::Json => doc.to_json(),
    };
    output::emit(&text, cli.out.as_deref()).map_err(CliError::Io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holevo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
