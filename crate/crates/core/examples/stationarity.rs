//! Stationarity identity for maps T² → (T², g̃): both sides for a random
//! smooth map and variation, and its spectral convergence.

use std::f64::consts::PI;

use cylab::geometry::recipes::OmegaRecipe;
use cylab::geometry::{metric_from_pair, AlmostComplexField, MetricField, PeriodicGrid, ScalarField};
use cylab::monotonicity::{energy_density, stationarity_sides, TorusMap};

fn main() -> cylab::Result<()> {
    for res in [8, 12, 16, 24, 32] {
        let grid = PeriodicGrid::new(1, res)?;
        let target = OmegaRecipe::KahlerPerturbation { amplitude: 0.3 }.build(grid)?;
        let gt = metric_from_pair(&target, &AlmostComplexField::standard(grid))?;
        let g = MetricField::euclidean(grid);
        let u = TorusMap::from_displacement(vec![
            ScalarField::from_fn(grid, |x| 0.02 * (2.0 * PI * (x[0] + x[1])).sin()),
            ScalarField::from_fn(grid, |x| 0.015 * (2.0 * PI * x[0]).cos()),
        ])?;
        let xi = vec![
            ScalarField::from_fn(grid, |x| (2.0 * PI * x[1]).cos()),
            ScalarField::from_fn(grid, |x| (2.0 * PI * (x[0] - x[1])).sin()),
        ];
        let s = stationarity_sides(&u, &xi, &g, &gt)?;
        let e = energy_density(&u, &g, &gt)?;
        println!(
            "res {res:2}: lhs {:+.12e} rhs {:+.12e} residual {:.2e}  energy {:.10}",
            s.lhs,
            s.rhs,
            s.residual(),
            e.integrate()
        );
    }
    Ok(())
}
