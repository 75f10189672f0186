//! Continuity-method solve of `ω̃ⁿ = e^F ωⁿ` for the trig density.
//!
//! cargo run --release --example solve_torus -- [complex_dim] [resolution] [amplitude]

use std::time::Instant;

use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::PeriodicGrid;
use cylab::solver::{continuity_solve, CYProblem};

fn main() -> cylab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(2, |s| s.parse().expect("complex_dim"));
    let res: usize = args.get(1).map_or(16, |s| s.parse().expect("resolution"));
    let amp: f64 = args.get(2).map_or(0.5, |s| s.parse().expect("amplitude"));

    let grid = PeriodicGrid::new(n, res)?;
    let f = DensityRecipe::Trig { amplitude: amp }.build(grid)?;
    let started = Instant::now();
    let sol = continuity_solve(&CYProblem::new(&f, 4))?;
    for step in &sol.trace {
        println!("t = {:.3}  newton {:2}  residual {:.3e}", step.t, step.iterations, step.residual);
    }
    println!(
        "final residual {:.3e}, volume error {:.3e}, min eigenvalue {:.4}, osc φ {:.4}, {:.1?}",
        sol.final_residual,
        sol.volume_error(),
        sol.metric.min_eigenvalue(),
        sol.phi.max() - sol.phi.min(),
        started.elapsed()
    );
    Ok(())
}
