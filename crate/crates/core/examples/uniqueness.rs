//! Uniqueness: two continuity schedules reach the same potential, and the
//! wedge identity on two Kähler forms with equal volume.

use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::{AlmostComplexField, MatrixField, PeriodicGrid, TwoFormField};
use nalgebra::DMatrix;
use cylab::solver::{continuity_solve, uniqueness_wedge_identity, CYProblem};

fn main() -> cylab::Result<()> {
    let grid = PeriodicGrid::new(2, 12)?;
    let f = DensityRecipe::ExpSine { amplitude: 0.4 }.build(grid)?;
    let a = continuity_solve(&CYProblem::new(&f, 4))?;
    let b = continuity_solve(&CYProblem::new(&f, 2).with_schedule(vec![0.0, 0.2, 0.9, 1.0]))?;
    let shift = b.phi.mean() - a.phi.mean();
    println!("schedules agree to {:.2e}", b.phi.shifted(-shift).max_abs_diff(&a.phi));

    // two forms with equal top powers: ω̃₂ = λ dx¹∧dy¹ + λ⁻¹ dx²∧dy², for
    // which (ω̃₁ − ω̃₂)² / ω̃₁² = 2 − (λ + 1/λ) ≤ 0 with equality iff λ = 1
    let lambda = |x: &[f64; 4]| 1.5 + 0.5 * (2.0 * std::f64::consts::PI * x[1]).sin();
    let w2 = TwoFormField::new(MatrixField::from_fn(grid, |x| {
        let l = lambda(x);
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = l;
        m[(1, 0)] = -l;
        m[(2, 3)] = 1.0 / l;
        m[(3, 2)] = -1.0 / l;
        m
    }))?;
    let wedge = uniqueness_wedge_identity(&TwoFormField::standard(grid), &w2, &AlmostComplexField::standard(grid), 1e-10)?;
    println!("{:?}", wedge.summary());
    println!("ratio range [{:.6}, {:.6}]", wedge.ratio.min(), wedge.ratio.max());
    Ok(())
}
