use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dstew_cli::{run, Command, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Families,
    Eval,
    Verify,
    Transform,
    Evolve,
    Selftest,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Families => Command::Families,
            Cmd::Eval => Command::Eval,
            Cmd::Verify => Command::Verify,
            Cmd::Transform => Command::Transform,
            Cmd::Evolve => Command::Evolve,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

/// Exact solutions of the Davey-Stewartson system.
#[derive(Debug, Parser)]
#[command(name = "dstew", version)]
struct Cli {
    command: Cmd,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: `output.path`, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Finite-difference step.
    #[arg(long)]
    h: Option<f64>,
    /// Stencil order (2, 4 or 6).
    #[arg(long)]
    order: Option<u32>,
    /// Relative tolerance; `inf` disables the check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Final time for `evolve`.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Seed for sample jitter.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        out: cli.out,
        h: cli.h,
        order: cli.order,
        tol: cli.tol,
        dt: cli.dt,
        t_final: cli.t_final,
        seed: cli.seed,
    };
    match run(cli.command.into(), cli.config.as_deref(), &overrides) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
