//! The integral chain of the zeroth-order estimate, L^p norms of φ, I_α and
//! the flat Poincaré constant.

use std::f64::consts::PI;

use cylab::estimates::{i_alpha, moser_chain, poincare_ratio};
use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::{PeriodicGrid, ScalarField, TwoFormField};
use cylab::solver::{continuity_solve, CYProblem};

fn main() -> cylab::Result<()> {
    let grid = PeriodicGrid::new(2, 12)?;
    let f = DensityRecipe::Trig { amplitude: 0.5 }.build(grid)?;
    let sol = continuity_solve(&CYProblem::new(&f, 4))?;
    let w = TwoFormField::standard(grid);

    let trace = moser_chain(&sol.phi, &w, &sol.omega_tilde)?;
    for (k, v) in &trace.chain_residuals {
        println!("{k:>32} {v:+.6e}");
    }
    println!("chain margin {:.4e}", trace.chain_margin());
    for (p, v) in trace.p_values.iter().zip(&trace.lp_norms) {
        println!("  ‖φ‖_{p:<3} = {v:.6e}  ({:.4} of ‖φ‖_C⁰)", v / trace.c0_norm);
    }
    for (a, v) in i_alpha(&sol.sup_normalized(), &w, &[0.5, 1.0, 2.0, 4.0])? {
        println!("  I_{a} = {v:.6}");
    }
    let eig = ScalarField::from_fn(grid, |x| (2.0 * PI * (x[0] + x[3])).sin());
    println!("Poincaré ratio on an eigenfunction {:.12} (1/8π² = {:.12})", poincare_ratio(&eig), 1.0 / (8.0 * PI * PI));
    Ok(())
}
