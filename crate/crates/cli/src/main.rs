//! `wedgewave`: batch evaluation of wedge diffraction scenarios.
//!
//! Exit codes: 0 success, 1 usage or evaluation error, 2 a check exceeded
//! its tolerance.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::Scenario;

#[derive(Parser)]
#[command(name = "wedgewave", version, about = "Plane-pulse diffraction by a 2-D wedge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Incident, reflected, diffracted and total field on the grid (CSV).
    Field(Common),
    /// Long-time limits of the diffracted field per sector (CSV).
    Limits(Common),
    /// Jumps of the diffracted field across the critical rays (CSV).
    Jump {
        #[command(flatten)]
        common: Common,
        /// Tolerance on |jump - j_k F(t - rho)|.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Limiting amplitude for a switched harmonic profile (CSV).
    Lap(Common),
    /// DD closed form against Sobolev's solution (CSV).
    Sobolev {
        #[command(flatten)]
        common: Common,
        /// Grid size `NVxNT` in (varphi, tau).
        #[arg(long, default_value = "20x20", value_parser = parse_grid)]
        grid: (usize, usize),
    },
    /// Boundary-trace and Helmholtz residuals (JSON).
    Validate(Common),
    /// Stationary densities S_r, S_d, S_s on the grid (CSV).
    Spectral(Common),
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<usize>().ok().filter(|n| *n > 0).ok_or_else(|| format!("bad grid size {x:?}"));
    Ok((n(a)?, n(b)?))
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("WEDGEWAVE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("WEDGEWAVE_THREADS: cannot parse {v:?}"))?;
    if n == 0 {
        bail!("WEDGEWAVE_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("building thread pool")
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Option<commands::ValidationFailed>> {
    init_threads()?;
    let common = match &cli.command {
        Command::Field(c) | Command::Limits(c) | Command::Lap(c) | Command::Validate(c) | Command::Spectral(c) => c,
        Command::Jump { common, .. } | Command::Sobolev { common, .. } => common,
    };
    let s = Scenario::load(&common.config)?;
    let output = match &cli.command {
        Command::Field(_) => commands::field(&s)?,
        Command::Limits(_) => commands::limits(&s)?,
        Command::Jump { tol, .. } => commands::jumps(&s, *tol)?,
        Command::Lap(_) => commands::lap(&s)?,
        Command::Sobolev { grid, .. } => commands::sobolev(&s, grid.0, grid.1)?,
        Command::Validate(_) => commands::validate(&s)?,
        Command::Spectral(_) => commands::spectral(&s)?,
    };
    emit(&output.text, common.out.as_deref())?;
    Ok(output.failure)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(fail)) => {
            eprintln!("error: {fail}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
