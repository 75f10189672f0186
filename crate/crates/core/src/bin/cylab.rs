use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cylab::experiment::{Experiment, ExperimentConfig, RunError, RunOptions, Stage};

#[derive(Parser)]
#[command(name = "cylab", version, about = "Monge-Ampère and almost-Hermitian experiments on flat tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Resume the solve from a checkpoint container
    #[arg(long, global = true)]
    resume: Option<PathBuf>,

    /// Output directory (overrides the config)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Grid resolution (overrides the config)
    #[arg(long, global = true)]
    resolution_override: Option<usize>,

    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve the Calabi-Yau equation by the continuity method
    Solve,
    /// Check the a priori estimates on the stored solution
    Verify,
    /// Canonical-connection curvature of the background and solved structures
    Curvature,
    /// Ball-energy monotonicity and the L¹ chain
    Monotonicity,
    /// Aggregate stage outputs into summary.json
    Report,
    /// Every enabled stage followed by the report
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(cli: &Cli) -> Result<i32, RunError> {
    let path = cli.config.as_deref().ok_or_else(|| {
        RunError::Config(cylab::Error::Config("--config <path> is required".into()))
    })?;
    let mut config = ExperimentConfig::load(path).map_err(RunError::Config)?;
    if let Some(k) = cli.resolution_override {
        config = config.with_resolution(k).map_err(RunError::Config)?;
    }
    let opts = RunOptions {
        out: cli.out.clone(),
        resume: cli.resume.clone(),
        quiet: cli.quiet,
    };
    let exp = Experiment::new(config, opts)?;
    let manifest = match cli.command {
        Command::Solve => exp.run_stage(Stage::Solve)?,
        Command::Verify => exp.run_stage(Stage::Verify)?,
        Command::Curvature => exp.run_stage(Stage::Curvature)?,
        Command::Monotonicity => exp.run_stage(Stage::Monotonicity)?,
        Command::Report => exp.run_stage(Stage::Report)?,
        Command::All => exp.run_all()?,
    };
    let failures = manifest.failures();
    if failures.is_empty() {
        println!("no failed checks; outputs in {}", exp.out.display());
    } else {
        println!("FAIL: {}", failures.join(", "));
    }
    Ok(manifest.exit_code())
}
