use cylab::geometry::recipes::{DensityRecipe, OmegaRecipe};
use cylab::geometry::*;
use cylab::monotonicity::*;
use cylab::solver::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Random low-mode trigonometric field with coefficients in `[-amp, amp]`.
fn random_trig(grid: PeriodicGrid, rng: &mut ChaCha8Rng, amp: f64) -> ScalarField {
    let terms: Vec<([f64; 2], f64, f64)> = (0..4)
        .map(|_| {
            let k = [rng.random_range(-2..=2) as f64, rng.random_range(-2..=2) as f64];
            (k, rng.random_range(-amp..amp), rng.random_range(0.0..2.0 * PI))
        })
        .collect();
    ScalarField::from_fn(grid, |x| {
        terms
            .iter()
            .map(|(k, a, ph)| a * (2.0 * PI * (k[0] * x[0] + k[1] * x[1]) + ph).cos())
            .sum()
    })
}

fn target_metric(grid: PeriodicGrid) -> MetricField {
    let w = OmegaRecipe::KahlerPerturbation { amplitude: 0.3 }.build(grid).unwrap();
    metric_from_pair(&w, &AlmostComplexField::standard(grid)).unwrap()
}

fn random_pair(grid: PeriodicGrid, seed: u64) -> (TorusMap, Vec<ScalarField>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = TorusMap::from_displacement((0..2).map(|_| random_trig(grid, &mut rng, 0.02)).collect()).unwrap();
    let xi = (0..2).map(|_| random_trig(grid, &mut rng, 1.0)).collect();
    (u, xi)
}

#[test]
fn stationarity_identity_on_random_pairs() {
    let grid = PeriodicGrid::new(1, 32).unwrap();
    let g = MetricField::euclidean(grid);
    let gt = target_metric(grid);
    for seed in 0..10 {
        let (u, xi) = random_pair(grid, seed);
        let s = stationarity_sides(&u, &xi, &g, &gt).unwrap();
        println!("seed {seed}: lhs {:e} rhs {:e} residual {:e}", s.lhs, s.rhs, s.residual());
        assert!(s.residual() <= 1e-8);
    }
}

#[test]
fn stationarity_residual_decays_under_refinement() {
    let mut prev = f64::INFINITY;
    for res in [8, 12, 16] {
        let grid = PeriodicGrid::new(1, res).unwrap();
        let (u, xi) = random_pair(grid, 3);
        let r = stationarity_residual(&u, &xi, &MetricField::euclidean(grid), &target_metric(grid)).unwrap();
        println!("res {res}: {r:e}");
        assert!(r < prev || r < 1e-13);
        prev = r;
    }
}

#[test]
fn harmonic_maps_have_vanishing_right_side() {
    let grid = PeriodicGrid::new(1, 16).unwrap();
    let g = MetricField::euclidean(grid);
    let shear = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
    let u = TorusMap::new(shear, vec![ScalarField::zeros(grid); 2]).unwrap();
    let (_, xi) = random_pair(grid, 11);
    let s = stationarity_sides(&u, &xi, &g, &g).unwrap();
    assert!(s.rhs.abs() <= 1e-10 && s.lhs.abs() <= 1e-10, "{s:?}");
    let id = stationarity_sides(&TorusMap::identity(grid), &xi, &g, &g).unwrap();
    assert!(id.residual() <= 1e-12 && id.lhs.abs() <= 1e-12);
}

#[test]
fn energy_density_matches_chain_rule() {
    let grid = PeriodicGrid::new(1, 16).unwrap();
    let g = MetricField::euclidean(grid);
    let gt = target_metric(grid);
    let (u, _) = random_pair(grid, 5);
    let e = energy_density(&u, &g, &gt).unwrap();
    // oracle: analytic target metric evaluated at u(x), jacobian from spectral derivatives
    let jac = u.jacobian();
    let gspec: Vec<Spectrum> = (0..4).map(|c| Spectrum::of_real(&grid, &gt.inner().components()[c])).collect();
    for p in (0..grid.len()).step_by(17) {
        let y = u.image(p);
        let gm = DMatrix::from_fn(2, 2, |a, b| gspec[a * 2 + b].interpolate(&y).re);
        let du = DMatrix::from_fn(2, 2, |k, i| jac[k * 2 + i][p]);
        let want = (du.transpose() * gm * du).trace();
        assert!((e.values()[p] - want).abs() < 1e-10);
    }
    let id = energy_density(&TorusMap::identity(grid), &g, &gt).unwrap();
    let (tr, _) = traces(&g, &gt).unwrap();
    assert!(id.max_abs_diff(&tr) < 1e-14);
}

#[test]
fn identity_laplacian_matches_finite_difference_christoffels() {
    let grid = PeriodicGrid::new(2, 16).unwrap();
    let g = MetricField::euclidean(grid);
    let gt = target_metric(grid);
    let lap = map_laplacian(&TorusMap::identity(grid), &g, &gt).unwrap();
    // analytic g̃ = I + ½(H + J0ᵀ H J0) with H the Hessian of ψ, by finite differences
    let w = |x: [f64; 4]| {
        let psi = |y: &[f64; 4]| 0.3 / (4.0 * PI * PI) * recipes::trig_profile(4, y);
        let h = 1e-3;
        let mut hess = DMatrix::zeros(4, 4);
        for a in 0..4 {
            for b in 0..4 {
                let f = |sa: f64, sb: f64| {
                    let mut y = x;
                    y[a] += sa * h;
                    y[b] += sb * h;
                    psi(&y)
                };
                hess[(a, b)] = (f(1.0, 1.0) - f(1.0, -1.0) - f(-1.0, 1.0) + f(-1.0, -1.0)) / (4.0 * h * h);
            }
        }
        let j0 = cylab::geometry::field::standard_j(4);
        DMatrix::identity(4, 4) + (&hess + j0.transpose() * &hess * &j0) * 0.5
    };
    for p in [0usize, 777, 4242, 31000] {
        let x = grid.point(p);
        let h = 1e-3;
        let ginv = w(x).try_inverse().unwrap();
        let dg: Vec<DMatrix<f64>> = (0..4)
            .map(|e| {
                let shift = |s: f64| {
                    let mut y = x;
                    y[e] += s * h;
                    w(y)
                };
                (shift(-2.0) - shift(-1.0) * 8.0 + shift(1.0) * 8.0 - shift(2.0)) / (12.0 * h)
            })
            .collect();
        for i in 0..4 {
            let mut want = 0.0;
            for a in 0..4 {
                for e in 0..4 {
                    want += 0.5 * ginv[(i, e)] * (2.0 * dg[a][(e, a)] - dg[e][(a, a)]);
                }
            }
            let got = lap[i].values()[p];
            assert!((got - want).abs() < 1e-4, "{i} {got} {want}");
        }
    }
}

fn solve(res: usize, amp: f64) -> CYSolution {
    let f = DensityRecipe::Trig { amplitude: amp }.build(PeriodicGrid::new(2, res).unwrap()).unwrap();
    continuity_solve(&CYProblem::new(&f, 4)).unwrap()
}

#[test]
fn monotonicity_on_solved_instance() {
    let sol = solve(16, 0.5);
    let grid = *sol.phi.grid();
    let g = MetricField::euclidean(grid);
    let (tr, _) = traces(&g, &sol.metric).unwrap();
    let balls = BallFamily::standard(&tr, 5, 0.05, 0.25, 10).unwrap();
    let rep = monotonicity_scan(&g, &sol.metric, &balls, &a_grid()).unwrap();
    for s in &rep.scans {
        println!("{:?} A={:?} ratio {:?}", s.center, s.fitted_a, s.ratio);
    }
    assert!(rep.integrals_nondecreasing());
    println!("fitted A {:?} decay {}", rep.fitted_a, rep.decay_c);
    let w = TwoFormField::standard(grid);
    let (_, chain) = decay_and_l1(&g, &sol.metric, &sol.omega_tilde, &w, &balls, sol.final_residual, 1e-9).unwrap();
    println!("{chain:?}");
    assert_eq!(rep.fitted_a, Some(0.0));
    assert!(chain.margins.iter().all(|m| *m >= -1e-9) && chain.cohomology_defect <= 1e-9);
    assert!((chain.equivalence_c / chain.equivalence_prediction - 1.0).abs() <= 0.10);
    let eps = epsilon_regularity_probe(&g, &sol.metric, &balls).unwrap();
    println!("{:?}", &eps[..3]);
}

#[test]
fn bump_target_keeps_ball_energy_increasing() {
    let grid = PeriodicGrid::new(2, 16).unwrap();
    let c = [0.5; 4];
    let bump = |x: &[f64; 4]| {
        let off = grid.periodic_offset(x, &c);
        let r2: f64 = off.iter().map(|v| v * v).sum();
        1.0 + 3.0 * (-r2 / (2.0 * 0.06 * 0.06)).exp()
    };
    let gt = MetricField::new(MatrixField::from_fn(grid, |x| DMatrix::identity(4, 4) * bump(x))).unwrap();
    let g = MetricField::euclidean(grid);
    let balls = BallFamily::new(vec![c], (1..=10).map(|k| 0.025 * k as f64).collect(), DEFAULT_R0).unwrap();
    let rep = monotonicity_scan(&g, &gt, &balls, &a_grid()).unwrap();
    assert!(rep.integrals_nondecreasing());
    let ratio = &rep.scans[0].ratio;
    let jumps: Vec<f64> = ratio.windows(2).map(|w| w[1] - w[0]).collect();
    println!("{jumps:?}");
}

#[test]
fn mollified_ball_integrals_converge_quadratically() {
    let grid = PeriodicGrid::new(2, 12).unwrap();
    let f = ScalarField::from_fn(grid, |x| 2.0 + (2.0 * PI * x[0]).cos() * (2.0 * PI * x[3]).sin());
    let integ = BallIntegrator::new(&f);
    let p = [0.1, 0.3, 0.2, 0.7];
    let exact = integ.integrate(&p, 0.2, 0.0);
    let e1 = (integ.integrate(&p, 0.2, 0.02) - exact).abs();
    let e2 = (integ.integrate(&p, 0.2, 0.01) - exact).abs();
    println!("{e1:e} {e2:e} ratio {}", e1 / e2);
    assert!((e1 / e2 - 4.0).abs() < 0.2);
}
