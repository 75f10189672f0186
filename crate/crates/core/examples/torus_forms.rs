//! Spectral calculus on T⁴: derivatives, the Kähler form of a potential,
//! wedge powers, closedness and the metric traces.

use std::f64::consts::PI;

use cylab::geometry::*;

fn main() -> cylab::Result<()> {
    let grid = PeriodicGrid::new(2, 12)?;
    let phi = ScalarField::from_fn(grid, |x| 0.01 * (2.0 * PI * x[0]).cos() * (2.0 * PI * x[2]).sin());

    // ∂x1 φ against the analytic derivative
    let d0 = phi.derivative(0)?;
    let exact = ScalarField::from_fn(grid, |x| -0.02 * PI * (2.0 * PI * x[0]).sin() * (2.0 * PI * x[2]).sin());
    println!("spectral derivative error {:.2e}", d0.max_abs_diff(&exact));

    // ω̃ = ω0 + i∂∂̄φ and its metric
    let sol = cylab::solver::CYSolution::from_potential(phi.clone(), vec![], 0.0)?;
    let w = FormField::from_two_form(&sol.omega_tilde);
    println!("|dω̃| = {:.2e}", w.exterior_derivative()?.max_abs());
    let top = w.power(2)?.top_density()?;
    println!("∫ω̃² / ∫ω0² = {:.15}", top.integrate() / FormField::from_two_form(&TwoFormField::standard(grid)).power(2)?.integrate_top()?);

    let (tr, back) = traces(&MetricField::euclidean(grid), &sol.metric)?;
    println!("tr_g g̃ ∈ [{:.6}, {:.6}], tr_g̃ g ∈ [{:.6}, {:.6}]", tr.min(), tr.max(), back.min(), back.max());
    println!("min eigenvalue of g̃ {:.6}", sol.metric.min_eigenvalue());
    Ok(())
}
