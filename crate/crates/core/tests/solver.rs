use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::spectral::solve_poisson;
use cylab::geometry::*;
use cylab::solver::*;
use std::f64::consts::PI;
use std::time::Instant;

fn trig(n: usize, res: usize, amp: f64) -> ScalarField {
    DensityRecipe::Trig { amplitude: amp }.build(PeriodicGrid::new(n, res).unwrap()).unwrap()
}

fn poisson_oracle(f: &ScalarField) -> ScalarField {
    // ½Δφ = e^F − 1 for normalized F
    let nf = normalize_density(f);
    let rhs: Vec<f64> = nf.values().iter().map(|v| 2.0 * (v.exp() - 1.0)).collect();
    ScalarField::new(*f.grid(), solve_poisson(f.grid(), &rhs)).unwrap()
}

#[test]
fn one_dimensional_solve_matches_poisson() {
    let t0 = Instant::now();
    let f = trig(1, 128, 0.5);
    let sol = continuity_solve(&CYProblem::new(&f, 4)).unwrap();
    let err = sol.phi.max_abs_diff(&poisson_oracle(&f));
    println!("n=1 err {err:e} time {:?} trace {:?}", t0.elapsed(), sol.trace.iter().map(|r| r.iterations).collect::<Vec<_>>());
    assert!(err <= 1e-8);
}

#[test]
fn one_dimensional_newton_from_zero_converges_fast() {
    let f = trig(1, 128, 0.5);
    let p = CYProblem::new(&f, 1);
    let (phi, rec) = solve_at(&ScalarField::zeros(p.grid), 1.0, &p).unwrap();
    println!("{:?}", rec.history);
    assert!(rec.iterations <= 6 && rec.residual <= 1e-10);
    assert!(phi.max_abs_diff(&poisson_oracle(&f)) < 1e-8);
}

#[test]
fn two_dimensional_reference_solve() {
    let t0 = Instant::now();
    let f = trig(2, 16, 0.5);
    let sol = continuity_solve(&CYProblem::new(&f, 4)).unwrap();
    println!("n=2 residual {:e} vol {:e} mineig {} time {:?}", sol.final_residual, sol.volume_error(), sol.metric.min_eigenvalue(), t0.elapsed());
    for r in &sol.trace { println!("{:?}", r); }
    assert!(sol.final_residual <= 1e-9);
    assert!(sol.volume_error() <= 1e-10);
    assert!(sol.metric.min_eigenvalue() > 0.0);
}

#[test]
fn linearization_matches_finite_differences() {
    let f = trig(2, 8, 0.5);
    let grid = *f.grid();
    let phi = ScalarField::from_fn(grid, |x| 0.02 * (2.0 * PI * (x[0] + x[3])).cos());
    let dir = ScalarField::from_fn(grid, |x| (2.0 * PI * x[1]).sin() * (2.0 * PI * x[2]).cos());
    let h = 1e-5;
    let r = |s: f64| ma_residual(&phi.zip_map(&dir, |a, b| a + s * b), 1.0, &f).unwrap();
    let fd = r(h).zip_map(&r(-h), |a, b| (a - b) / (2.0 * h));
    let lin = MongeAmpere::of(&phi).linearized(dir.values());
    let lin = ScalarField::new(grid, lin).unwrap();
    let rel = fd.max_abs_diff(&lin) / lin.max_abs();
    assert!(rel < 1e-6, "{rel:e}");
}
