//! `gen-pde`: train and inspect PDE solution models.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! failure, 4 incompatible checkpoint.

mod checkpoint;
mod commands;
mod config;
mod csvio;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "gen-pde", version, about = "Basis-expansion and baseline PDE solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
pub struct GridArg {
    pub nx: usize,
    pub nt: usize,
}

fn parse_grid(s: &str) -> Result<GridArg, String> {
    let (nx, nt) = s
        .split_once(',')
        .ok_or_else(|| format!("expected NX,NT, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    let (nx, nt) = (parse(nx)?, parse(nt)?);
    if nx < 2 || nt < 2 {
        return Err("grid needs at least 2 points per axis".into());
    }
    Ok(GridArg { nx, nt })
}

#[derive(Args)]
struct OutArg {
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from an experiment config and write a checkpoint.
    Train {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config iteration count.
        #[arg(long)]
        iters: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate a checkpoint on a grid against the problem reference.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Evaluation grid NX,NT over the training domain.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridArg>,
        /// Also render an SVG heatmap.
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compare two checkpoints (fit vs extrapolation, profile curves).
    Compare {
        /// Checkpoint treated as the basis-expansion model.
        gen_checkpoint: PathBuf,
        /// Checkpoint treated as the baseline.
        pinn_checkpoint: PathBuf,
        /// Comparison grid NX,NT over the extrapolation box.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridArg>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Dump the basis parameter table and sampled basis curves.
    DumpBasis {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Curve sampling grid NX,NT over the training domain.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridArg>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate reference solutions (closed forms and finite differences).
    Oracle {
        /// Problem: heat, wave or burgers.
        problem: String,
        /// Oracle method; repeat to cross-check two (closed-form, dalembert,
        /// cole-hopf, fd).
        #[arg(long, required = true)]
        method: Vec<String>,
        /// Grid NX,NT (also the fd solver resolution).
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridArg>,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Error with a process exit code attached.
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(error: anyhow::Error) -> Self {
        CliError { code: 2, error }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Map library errors onto exit codes: numerical failures are 3, checkpoint
/// incompatibilities 4, everything else is a configuration error.
pub fn classify(error: anyhow::Error) -> CliError {
    if error.downcast_ref::<checkpoint::IncompatibleCheckpoint>().is_some() {
        return CliError { code: 4, error };
    }
    if let Some(e) = error.downcast_ref::<gen_pde::Error>() {
        match e {
            gen_pde::Error::Diverged { .. }
            | gen_pde::Error::NonFinite { .. }
            | gen_pde::Error::Numerical(_)
            | gen_pde::Error::DivisionByNearZero { .. } => return CliError { code: 3, error },
            _ => return CliError { code: 2, error },
        }
    }
    CliError { code: 2, error }
}

/// Write via a temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Append a timestamped line to the sidecar log (timestamps live only here,
/// keeping every other artifact byte-reproducible).
pub fn log_line(out_dir: &Path, message: &str) {
    use std::io::Write;
    let _ = std::fs::create_dir_all(out_dir);
    if let Ok(mut f) = std::fs::OpenOptions::new()
        .append(true)
        .create(true)
        .open(out_dir.join("run.log"))
    {
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(f, "{ts} {message}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train { config, seed, iters, out } => {
            commands::train::run(&config, seed, iters, &out.out)
        }
        Command::Eval { checkpoint, grid, svg, out } => {
            commands::eval::run(&checkpoint, grid, svg, &out.out)
        }
        Command::Compare { gen_checkpoint, pinn_checkpoint, grid, out } => {
            commands::compare::run(&gen_checkpoint, &pinn_checkpoint, grid, &out.out)
        }
        Command::DumpBasis { checkpoint, grid, out } => {
            commands::dump_basis::run(&checkpoint, grid, &out.out)
        }
        Command::Oracle { problem, method, grid, out } => {
            commands::oracle::run(&problem, &method, grid, &out.out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
