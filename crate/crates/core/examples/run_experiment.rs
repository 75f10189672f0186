//! Run every stage of an experiment config and print the verdict table.
//!
//! cargo run --release --example run_experiment -- configs/smoke.toml [out]

use std::path::PathBuf;

use cylab::experiment::{Experiment, ExperimentConfig, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/smoke.toml".into()));
    let config = match ExperimentConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let opts = RunOptions { out: args.next().map(PathBuf::from), quiet: true, ..Default::default() };
    let result = Experiment::new(config, opts).and_then(|exp| exp.run_all());
    match result {
        Ok(manifest) => {
            for (name, verdict) in &manifest.verdicts {
                println!("{verdict:?}\t{name}");
            }
            for t in &manifest.timings {
                println!("{:>12}: {:.2} s", t.stage.name(), t.seconds);
            }
            std::process::exit(manifest.exit_code());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
