//! `qsheaf`: batch front end over model files.

pub mod cache;
mod commands;
pub mod model;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsheaf_core::poly::cache::GroebnerCache;
use thiserror::Error;

pub use commands::Report;

pub const REPORT_VERSION: &str = "qsheaf-report/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
}

#[derive(Debug, Parser)]
#[command(name = "qsheaf", version, about = "Polymology and quantum sheaf cohomology of toric tangent-bundle deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Model file (JSON)
    model: PathBuf,
    /// Bypass the on-disk Gröbner cache
    #[arg(long)]
    no_cache: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fan, divisor classes, Mori cone, primitive collections, local freeness
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Random points and lines for the local-freeness test
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Graded dimensions, Stanley–Reisner generators and Gröbner basis
    Polymology {
        #[command(flatten)]
        common: Common,
    },
    /// One instanton sector
    Sector {
        #[command(flatten)]
        common: Common,
        /// Curve class in basis coordinates, e.g. 1,0
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Quantum Stanley–Reisner relations
    Qsr {
        #[command(flatten)]
        common: Common,
    },
    /// Correlation function series of a polynomial
    Correlator {
        #[command(flatten)]
        common: Common,
        /// Expression in D1.., psi1..
        #[arg(long)]
        poly: String,
        /// Largest c1·β summed over (ignored with --beta)
        #[arg(long)]
        max_degree: Option<i64>,
        /// Explicit sectors; repeat for several
        #[arg(long, allow_hyphen_values = true)]
        beta: Vec<String>,
    },
    /// Check the quantum relations on the grid of effective classes
    Verify {
        #[command(flatten)]
        common: Common,
        /// Also run the correlator route and list every case
        #[arg(long)]
        all: bool,
        #[arg(long)]
        grid: Option<i64>,
    },
}

/// Runs with the given arguments (including the program name); returns the
/// exit status: 0 ok, 1 usage/validation error, 2 verification failure.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let format = match &cli.command {
        Command::Analyze { common, .. }
        | Command::Polymology { common }
        | Command::Sector { common, .. }
        | Command::Qsr { common }
        | Command::Correlator { common, .. }
        | Command::Verify { common, .. } => common.format,
    };
    match execute(cli.command) {
        Ok(report) => {
            let _ = match format {
                Format::Text => write!(out, "{}", report.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("report serializes")),
            };
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<Report, CliError> {
    let open = |c: &Common| -> Result<(model::Model, Option<cache::FileCache>), CliError> {
        let m = model::load(&c.model)?;
        let cache = if c.no_cache { None } else { cache::default_dir().map(cache::FileCache::new) };
        Ok((m, cache))
    };
    match command {
        Command::Analyze { common, trials } => {
            let (m, _) = open(&common)?;
            let trials = trials.unwrap_or(m.options.trials);
            Ok(commands::analyze(&m, trials))
        }
        Command::Polymology { common } => {
            let (m, c) = open(&common)?;
            commands::polymology(&m, c.as_ref().map(|x| x as &dyn GroebnerCache))
        }
        Command::Sector { common, beta } => {
            let (m, c) = open(&common)?;
            let beta = commands::parse_beta(&m, &beta)?;
            commands::sector(&m, &beta, c.as_ref().map(|x| x as &dyn GroebnerCache))
        }
        Command::Qsr { common } => {
            let (m, _) = open(&common)?;
            commands::qsr(&m)
        }
        Command::Correlator { common, poly, max_degree, beta } => {
            let (m, c) = open(&common)?;
            let sectors = beta.iter().map(|b| commands::parse_beta(&m, b)).collect::<Result<Vec<_>, _>>()?;
            let max_degree = max_degree.unwrap_or(m.options.max_c1_degree);
            commands::correlator(&m, &poly, max_degree, (!sectors.is_empty()).then_some(sectors), c.as_ref().map(|x| x as &dyn GroebnerCache))
        }
        Command::Verify { common, all, grid } => {
            let (m, c) = open(&common)?;
            let grid = grid.unwrap_or(m.options.max_c1_degree);
            commands::verify(&m, grid, all, c.as_ref().map(|x| x as &dyn GroebnerCache))
        }
    }
}
