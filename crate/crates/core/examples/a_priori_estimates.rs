//! Pointwise estimates on a solved T⁴ instance: trace identity, exponential
//! bound frontier, key inequality (literal and sharp), good term, third order.

use cylab::estimates::*;
use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::{MetricField, PeriodicGrid, TwoFormField};
use cylab::solver::{continuity_solve, CYProblem};

fn main() -> cylab::Result<()> {
    let res = std::env::args().nth(1).map_or(12, |s| s.parse().expect("resolution"));
    let grid = PeriodicGrid::new(2, res)?;
    let f = DensityRecipe::Trig { amplitude: 0.5 }.build(grid)?;
    let sol = continuity_solve(&CYProblem::new(&f, 4))?;
    let g = MetricField::euclidean(grid);

    let reports = [
        verify_trace_identity(&sol.omega_tilde, &TwoFormField::standard(grid), &sol.metric, &g)?,
        exponential_bound(&sol.phi, &g, &sol.metric, &[0.0, 0.5, 1.0, 2.0, 4.0])?,
        key_inequality(&g, &sol.metric, 0.0, 1e-6)?,
        good_term_check(&sol.phi, 1e-8),
        third_order_quantity(&sol.phi, &g, &sol.metric)?,
    ];
    for r in &reports {
        println!("{:?} {:<18} margin {:+.3e}  {}", r.verdict, r.name, r.margin, r.statement);
        for (k, v) in &r.fitted_constants {
            println!("      {k} = {v:.6e}");
        }
    }
    Ok(())
}
