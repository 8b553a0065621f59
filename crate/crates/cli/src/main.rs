//! Command-line front end for the anchoring energy library.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on numerical failures
//! (no convergence, violated stability bounds, failing self-checks).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod shape;

use clap::{Parser, Subcommand};
use commands::{Session, SuiteFailed};
use config::{
    ApproxOpts, DefectsOpts, EnergyOpts, FiguresOpts, OptimizeOpts, ProfileOpts, RunConfig,
    ScanOpts,
};
use shape::ShapeArgs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "anchoring",
    version,
    about = "Surface anchoring energies, optimal orientations and boundary fields"
)]
struct Cli {
    /// TOML config with a [shape] table and one table per subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Default directory for output files
    #[arg(long, global = true, env = "ANCHORING_OUT")]
    out: Option<PathBuf>,
    /// Convergence tolerance (optimizer residual; energy error estimate)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate E0 for one shape and direction (JSON)
    Energy {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        opts: EnergyOpts,
    },
    /// Tabulate E0 along a line or over the unit disk (CSV)
    Scan {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        opts: ScanOpts,
    },
    /// Find and classify the critical orientations (JSON)
    Optimize {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        opts: OptimizeOpts,
    },
    /// Build the tangential boundary field and report its defects (JSON)
    Defects {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        opts: DefectsOpts,
    },
    /// Boundary layer profile along one ray (CSV)
    Profile {
        #[command(flatten)]
        opts: ProfileOpts,
    },
    /// Minimizers of rounded cubes against the exact cube (CSV)
    Approx {
        #[command(flatten)]
        opts: ApproxOpts,
    },
    /// Run the built-in acceptance checks
    Validate {
        /// Also write the results as JSON
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the figure data files into the output directory
    Figures {
        /// capsule, torus or cube-heatmap (default: all)
        which: Vec<String>,
        #[command(flatten)]
        opts: FiguresOpts,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err
        .downcast_ref::<anchoring::Error>()
        .is_some_and(anchoring::Error::is_numerical)
        || err.is::<SuiteFailed>();
    if numerical {
        2
    } else {
        1
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let session = Session {
        out_dir: cli.out.clone().or_else(|| config.out.clone()),
        tolerance: cli.tolerance.or(config.tolerance),
        config,
    };
    if let Some(t) = session.tolerance {
        if !(t > 0.0) {
            anyhow::bail!("--tolerance must be positive, got {t}");
        }
    }
    match &cli.command {
        Command::Energy { shape, opts } => commands::energy(&session, shape, opts),
        Command::Scan { shape, opts } => commands::scan_cmd(&session, shape, opts),
        Command::Optimize { shape, opts } => commands::optimize(&session, shape, opts),
        Command::Defects { shape, opts } => commands::defects(&session, shape, opts),
        Command::Profile { opts } => commands::profile(&session, opts),
        Command::Approx { opts } => commands::approx(&session, opts),
        Command::Validate { output } => commands::validate(&session, output.as_ref()),
        Command::Figures { which, opts } => commands::figures(&session, which, opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
