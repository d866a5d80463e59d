mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("scale limit: {0}")]
    Scale(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Scale(_) => 4,
            CliError::NoConvergence(_) => 5,
            CliError::Internal(_) => 1,
        }
    }
}

/// Unimodularity, convexity, canonical Kähler potentials and contact
/// classification for rational polyhedral sets.
#[derive(Parser)]
#[command(name = "toric", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check minimality, primitivity, simple vertices and face saturation.
    Validate { input: PathBuf },
    /// Convexity class, splitting, homotopy, and the contact type of cones.
    Classify { input: PathBuf },
    /// CSV of Sp, Guillemin's potential and the Legendre map.
    Potential {
        input: PathBuf,
        /// JSON file holding an array of points.
        #[arg(long, conflicts_with = "grid")]
        points: Option<PathBuf>,
        /// `min:max:steps`, once per axis.
        #[arg(long, allow_hyphen_values = true)]
        grid: Vec<String>,
    },
    /// Metric matrices and block tensors at each point.
    Metric {
        input: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Solve gtilde(x) = y.
    Invert {
        input: PathBuf,
        /// Comma-separated coordinates of y.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Kernel lattice, freeness table and, optionally, a canonical orbit
    /// representative.
    Cut {
        input: PathBuf,
        /// JSON `{x, theta, z: [[re, im], ..]}`, inline or as a file path.
        #[arg(long, allow_hyphen_values = true)]
        ambient: Option<String>,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Validate { input } => commands::validate(&input::load(&input)?),
        Command::Classify { input } => commands::classify(&input::load(&input)?),
        Command::Potential { input, points, grid } => {
            let l = input::load(&input)?;
            let pts = match points {
                Some(path) => input::load_points(&path, l.set.dim())?,
                None if !grid.is_empty() => input::grid_points(&grid, l.set.dim())?,
                None => return Err(CliError::Parse("potential needs --points or --grid".into())),
            };
            commands::potential(&l, &pts)
        }
        Command::Metric { input, points } => {
            let l = input::load(&input)?;
            let pts = input::load_points(&points, l.set.dim())?;
            commands::metric(&l, &pts)
        }
        Command::Invert {
            input,
            target,
            max_iterations,
        } => {
            let mut l = input::load(&input)?;
            if let Some(m) = max_iterations {
                l.newton.max_iterations = m;
            }
            let y = input::parse_target(&target, l.set.dim())?;
            commands::invert(&l, &y)
        }
        Command::Cut { input, ambient } => {
            let l = input::load(&input)?;
            let a = ambient.as_deref().map(input::load_ambient).transpose()?;
            commands::cut(&l, a.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            for d in &outcome.diagnostics {
                eprintln!("toric: {d}");
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("toric: {e}");
            ExitCode::from(e.code())
        }
    }
}
