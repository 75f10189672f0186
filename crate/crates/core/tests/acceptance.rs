//! Acceptance suite. Every criterion prints one PASS/FAIL line; the test
//! fails at the end if any criterion failed. Criteria run sequentially
//! because the curvature check at 32⁴ needs ~3 GB.

use std::f64::consts::PI;
use std::time::Instant;

use cylab::connection::modified::griffiths_min_over;
use cylab::connection::{chart_curvature, CurvatureBundle, FubiniStudyChart};
use cylab::estimates::*;
use cylab::experiment::*;
use cylab::geometry::recipes::{JRecipe, OmegaRecipe, TWISTED_REFERENCE_AMPLITUDE};
use cylab::geometry::*;
use cylab::monotonicity::*;
use cylab::solver::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

type Check = std::result::Result<(bool, String), String>;

struct Suite {
    lines: Vec<(usize, bool, String)>,
}

impl Suite {
    fn run(&mut self, id: usize, title: &str, check: impl FnOnce() -> Check) {
        let started = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let line = format!(
            "criterion {id:2} {} {title}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        println!("{line}");
        self.lines.push((id, pass, line));
    }
}

fn e(err: cylab::Error) -> String {
    err.to_string()
}

fn trig_density(n: usize, res: usize, amp: f64) -> ScalarField {
    let grid = PeriodicGrid::new(n, res).unwrap();
    ScalarField::from_fn(grid, |x| amp * recipes::trig_profile(2 * n, x))
}

fn solve(res: usize) -> std::result::Result<(CYSolution, f64), String> {
    let started = Instant::now();
    let sol = continuity_solve(&CYProblem::new(&trig_density(2, res, 0.5), 4)).map_err(e)?;
    Ok((sol, started.elapsed().as_secs_f64()))
}

/// `φ` with `½Δφ = e^F − 1`, `F` normalized, by a 2-D FFT independent of the
/// library's spectral layer.
fn fft_poisson_oracle(f: &ScalarField) -> Vec<f64> {
    let res = f.grid().resolution();
    let mean = f.values().iter().map(|v| v.exp()).sum::<f64>() / f.values().len() as f64;
    let mut data: Vec<Complex64> = f.values().iter().map(|v| Complex64::new(2.0 * ((v - mean.ln()).exp() - 1.0), 0.0)).collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(res);
    let inv = planner.plan_fft_inverse(res);
    let transform = |data: &mut Vec<Complex64>, plan: &std::sync::Arc<dyn rustfft::Fft<f64>>| {
        // rows along the contiguous axis, then columns; the Laplacian is symmetric in the two
        for row in data.chunks_mut(res) {
            plan.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); res];
        for i in 0..res {
            for k in 0..res {
                col[k] = data[k * res + i];
            }
            plan.process(&mut col);
            for k in 0..res {
                data[k * res + i] = col[k];
            }
        }
    };
    transform(&mut data, &fwd);
    let wave = |k: usize| if k <= res / 2 { k as f64 } else { k as f64 - res as f64 };
    for k1 in 0..res {
        for k0 in 0..res {
            let q = wave(k0).powi(2) + wave(k1).powi(2);
            let idx = k1 * res + k0;
            data[idx] = if q == 0.0 { Complex64::new(0.0, 0.0) } else { data[idx] / (-4.0 * PI * PI * q) };
        }
    }
    transform(&mut data, &inv);
    data.iter().map(|z| z.re / (res * res) as f64).collect()
}

fn random_trig(grid: PeriodicGrid, rng: &mut ChaCha8Rng, amp: f64) -> ScalarField {
    let terms: Vec<([f64; 2], f64, f64)> = (0..4)
        .map(|_| {
            let k = [rng.random_range(-2..=2) as f64, rng.random_range(-2..=2) as f64];
            (k, rng.random_range(-amp..amp), rng.random_range(0.0..2.0 * PI))
        })
        .collect();
    ScalarField::from_fn(grid, |x| terms.iter().map(|(k, a, ph)| a * (2.0 * PI * (k[0] * x[0] + k[1] * x[1]) + ph).cos()).sum())
}

fn random_pair(grid: PeriodicGrid, seed: u64) -> (TorusMap, Vec<ScalarField>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = TorusMap::from_displacement((0..2).map(|_| random_trig(grid, &mut rng, 0.02)).collect()).unwrap();
    let xi = (0..2).map(|_| random_trig(grid, &mut rng, 1.0)).collect();
    (u, xi)
}

fn kahler_target(grid: PeriodicGrid) -> MetricField {
    let w = OmegaRecipe::KahlerPerturbation { amplitude: 0.3 }.build(grid).unwrap();
    metric_from_pair(&w, &AlmostComplexField::standard(grid)).unwrap()
}

fn decays(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-13)
}

#[test]
fn acceptance() {
    let mut suite = Suite { lines: Vec::new() };

    suite.run(1, "n=1 oracle equivalence", || {
        let started = Instant::now();
        let f = trig_density(1, 128, 0.5);
        let sol = continuity_solve(&CYProblem::new(&f, 4)).map_err(e)?;
        let secs = started.elapsed().as_secs_f64();
        let oracle = fft_poisson_oracle(&f);
        let err = sol.phi.values().iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok((err <= 1e-8 && secs < 10.0, format!("max |φ − φ_Poisson| = {err:.2e}, solve {secs:.2} s")))
    });

    let (sol16, secs16) = solve(16).expect("reference solve");
    let grid16 = *sol16.phi.grid();
    let flat16 = MetricField::euclidean(grid16);
    let w16 = TwoFormField::standard(grid16);

    suite.run(2, "n=2 solve", || {
        let f = normalize_density(&trig_density(2, 16, 0.5));
        let ratio = MongeAmpere::of(&sol16.phi).volume_ratio();
        let residual = ratio.max_abs_diff(&f.map(f64::exp));
        let vol = sol16.volume_error();
        let min_eig = sol16.metric.min_eigenvalue();
        Ok((
            residual <= 1e-9 && vol <= 1e-10 && min_eig > 0.0 && secs16 < 300.0,
            format!("MA residual {residual:.2e}, volume error {vol:.2e}, min eigenvalue {min_eig:.4}, {secs16:.1} s"),
        ))
    });

    suite.run(3, "uniqueness", || {
        let f = trig_density(2, 16, 0.5);
        let other = continuity_solve(&CYProblem::new(&f, 3).with_schedule(vec![0.0, 0.3, 0.55, 0.8, 1.0])).map_err(e)?;
        let shift = other.phi.mean() - sol16.phi.mean();
        let diff = other.phi.shifted(-shift).max_abs_diff(&sol16.phi);
        let grid = PeriodicGrid::new(2, 4).unwrap();
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 2.0;
        m[(1, 0)] = -2.0;
        m[(2, 3)] = 0.5;
        m[(3, 2)] = -0.5;
        let w1 = TwoFormField::standard(grid);
        let w2 = TwoFormField::new(MatrixField::constant(grid, &m)).map_err(e)?;
        let wedge = uniqueness_wedge_identity(&w1, &w2, &AlmostComplexField::standard(grid), 1e-12).map_err(e)?;
        let ratio_err = wedge.ratio.values().iter().map(|r| (r + 0.5).abs()).fold(0.0, f64::max);
        let lambda_err = wedge.lambda.values().iter().map(|l| (l - 2.0).abs()).fold(0.0, f64::max);
        Ok((
            diff <= 1e-8 && ratio_err <= 1e-12 && lambda_err <= 1e-12,
            format!("schedule difference {diff:.2e}; (ω̃₁−ω̃₂)²/ω̃₁² + ½ = {ratio_err:.1e} at λ = 2 (λ error {lambda_err:.1e})"),
        ))
    });

    suite.run(4, "trace identity", || {
        let plain = verify_trace_identity(&sol16.omega_tilde, &w16, &sol16.metric, &flat16).map_err(e)?;
        let j0 = AlmostComplexField::standard(grid16);
        let taming = OmegaRecipe::Taming { amplitude: 0.05 }.build(grid16).map_err(e)?;
        let g_t = metric_from_pair(&one_one_part(&taming, &j0), &j0).map_err(e)?;
        let tamed = verify_trace_identity(&sol16.omega_tilde, &taming, &sol16.metric, &g_t).map_err(e)?;
        let c = |r: &EstimateReport, k: &str| r.fitted_constants[k];
        let ok = [&plain, &tamed]
            .iter()
            .all(|r| c(r, "pointwise_residual") <= 1e-9 && c(r, "average_deviation") <= 1e-10);
        Ok((
            ok,
            format!(
                "residual {:.1e} / {:.1e}, average deviation {:.1e} / {:.1e} (ω0 / taming Ω)",
                c(&plain, "pointwise_residual"),
                c(&tamed, "pointwise_residual"),
                c(&plain, "average_deviation"),
                c(&tamed, "average_deviation")
            ),
        ))
    });

    suite.run(5, "key inequality and good term", || {
        let coarse = key_inequality(&flat16, &sol16.metric, 0.0, 1e-6).map_err(e)?;
        let good = good_term_check(&sol16.phi, 1e-8);
        let (sol24, _) = solve(24)?;
        let g24 = MetricField::euclidean(*sol24.phi.grid());
        let fine = key_inequality(&g24, &sol24.metric, 0.0, 1e-6).map_err(e)?;
        let sharp = (coarse.fitted_constants["sharp_flat_margin"], fine.fitted_constants["sharp_flat_margin"]);
        let coarse_ok = coarse.margin >= -1e-6;
        let trend = fine.with_refinement(coarse.margin, 4.0);
        let ok = coarse_ok && trend.passed() && good.margin >= -1e-8;
        Ok((
            ok,
            format!(
                "min Δ̃ log tr = {:.3e} (16⁴) → {:.3e} (24⁴); good-term margin {:.1e}; sharp flat bound margin {:.1e} → {:.1e}",
                coarse.margin, trend.margin, good.margin, sharp.0, sharp.1
            ),
        ))
    });

    suite.run(6, "Moser chain", || {
        let trace = moser_chain(&sol16.phi, &w16, &sol16.omega_tilde).map_err(e)?;
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let poincare = (0..4)
            .map(|axis| (poincare_ratio(&ScalarField::from_fn(grid, |x| (2.0 * PI * x[axis]).cos())) - 1.0 / (4.0 * PI * PI)).abs())
            .fold(0.0, f64::max);
        let bounded = trace.lp_norms.iter().all(|v| *v <= trace.c0_norm * (1.0 + 1e-12));
        let sup = trace.sup_ratio();
        let ok = trace.chain_margin() >= -1e-9 && poincare <= 1e-6 && trace.lp_monotone() && bounded && sup >= 0.98;
        Ok((
            ok,
            format!(
                "chain margin {:.2e}; Poincaré error {poincare:.1e}; ‖φ‖_{{L^p}} nondecreasing {} and ≤ ‖φ‖_C⁰ {bounded}; max_p ‖φ‖_p/‖φ‖_C⁰ = {sup:.4} (p ≤ {})",
                trace.chain_margin(),
                trace.lp_monotone(),
                trace.p_values.last().unwrap()
            ),
        ))
    });

    suite.run(7, "canonical connection", || {
        let twisted = |res: usize| -> std::result::Result<(CurvatureBundle, TwoFormField), String> {
            let grid = PeriodicGrid::new(2, res).map_err(e)?;
            let j = JRecipe::Twisted { amplitude: TWISTED_REFERENCE_AMPLITUDE }.build(grid).map_err(e)?;
            let w = TwoFormField::standard(grid);
            let g = metric_from_pair(&w, &j).map_err(e)?;
            Ok((CurvatureBundle::compute(&g, &j).map_err(e)?, w))
        };
        let mut closedness = Vec::new();
        for res in [8, 16] {
            closedness.push(twisted(res)?.0.chern_closedness());
        }
        let (b32, w32) = twisted(32)?;
        closedness.push(b32.chern_closedness());
        let skew = b32.skew_hermitian_defect();
        let torsion = b32.torsion_one_one_defect();
        let total = b32.integrated_ricci(&w32).map_err(e)?;
        drop(b32);
        let solved = CurvatureBundle::compute(&sol16.metric, &AlmostComplexField::standard(grid16)).map_err(e)?;
        let total_solved = solved.integrated_ricci(&sol16.omega_tilde).map_err(e)?;
        let ok = skew <= 1e-12
            && torsion <= 1e-9
            && closedness[2] <= 1e-8
            && decays(&closedness)
            && total.abs() <= 1e-8
            && total_solved.abs() <= 1e-8;
        Ok((
            ok,
            format!(
                "twisted J at 32⁴: skew defect {skew:.1e}, torsion (1,1) {torsion:.1e}, |dRic| {:.1e} → {:.1e} → {:.1e} (8,16,32), ∫Ric∧ω {total:.1e}; solved ∫Ric∧ω̃ {total_solved:.1e}",
                closedness[0], closedness[1], closedness[2]
            ),
        ))
    });

    suite.run(8, "Fubini–Study golden test", || {
        let mut worst: f64 = 0.0;
        let mut griffiths = f64::INFINITY;
        for n in [1usize, 2] {
            let pc = chart_curvature(&FubiniStudyChart { complex_dim: n }, &vec![0.0; 2 * n], 0.02).map_err(e)?;
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let want = d(i, j) * d(k, l) + d(i, l) * d(k, j);
                            let got = pc.modified[((i * n + j) * n + k) * n + l];
                            worst = worst.max((got.re - want).abs()).max(got.im.abs());
                        }
                    }
                }
            }
            griffiths = griffiths.min(griffiths_min_over(std::iter::once(pc.modified.clone()), n, 500, 0).map_err(e)?.min);
        }
        Ok((
            worst <= 1e-6 && griffiths >= 1.0 - 1e-6,
            format!("max component error {worst:.1e}, Griffiths minimum {griffiths:.8}"),
        ))
    });

    suite.run(9, "Nijenhuis discrimination", || {
        let mut constant: f64 = 0.0;
        for n in [1usize, 2] {
            let grid = PeriodicGrid::new(n, 8).unwrap();
            for recipe in [JRecipe::Standard, JRecipe::ConstantNonstandard] {
                constant = constant.max(nijenhuis(&recipe.build(grid).map_err(e)?).max_norm());
            }
        }
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let twisted = nijenhuis(&JRecipe::Twisted { amplitude: TWISTED_REFERENCE_AMPLITUDE }.build(grid).map_err(e)?).max_norm();
        Ok((
            constant <= 1e-10 && twisted >= 0.1,
            format!("constant J: ‖N‖ ≤ {constant:.1e}; twisted J (amplitude {TWISTED_REFERENCE_AMPLITUDE}): ‖N‖ = {twisted:.3}"),
        ))
    });

    suite.run(10, "stationarity identity", || {
        let grid = PeriodicGrid::new(1, 32).unwrap();
        let g = MetricField::euclidean(grid);
        let gt = kahler_target(grid);
        let mut worst: f64 = 0.0;
        for seed in 0..10 {
            let (u, xi) = random_pair(grid, seed);
            worst = worst.max(stationarity_residual(&u, &xi, &g, &gt).map_err(e)?);
        }
        let refinement: Vec<f64> = [8, 12, 16]
            .iter()
            .map(|&res| {
                let grid = PeriodicGrid::new(1, res).unwrap();
                let (u, xi) = random_pair(grid, 3);
                stationarity_residual(&u, &xi, &MetricField::euclidean(grid), &kahler_target(grid)).unwrap()
            })
            .collect();
        let grid16 = PeriodicGrid::new(1, 16).unwrap();
        let flat = MetricField::euclidean(grid16);
        let shear = TorusMap::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]), vec![ScalarField::zeros(grid16); 2]).map_err(e)?;
        let (_, xi) = random_pair(grid16, 11);
        let rhs = stationarity_sides(&shear, &xi, &flat, &flat).map_err(e)?.rhs.abs();
        Ok((
            worst <= 1e-8 && decays(&refinement) && rhs <= 1e-10,
            format!(
                "max residual {worst:.1e} over 10 pairs; refinement {:.1e} → {:.1e} → {:.1e}; linear-map RHS {rhs:.1e}",
                refinement[0], refinement[1], refinement[2]
            ),
        ))
    });

    let (tr16, _) = traces(&flat16, &sol16.metric).unwrap();
    let balls16 = BallFamily::standard(&tr16, 5, 0.05, 0.25, 10).unwrap();

    suite.run(11, "monotonicity", || {
        let rep = monotonicity_scan(&flat16, &sol16.metric, &balls16, &a_grid()).map_err(e)?;
        let trivial = monotonicity_scan(&flat16, &flat16, &balls16, &[0.0]).map_err(e)?;
        let mut quad: f64 = 0.0;
        for s in &trivial.scans {
            for (r, v) in trivial.radii.iter().zip(&s.integrals) {
                quad = quad.max((v / (2.0 * PI * PI * r.powi(4)) - 1.0).abs());
            }
        }
        let per_center: Vec<Option<f64>> = rep.scans.iter().map(|s| s.fitted_a).collect();
        Ok((
            rep.integrals_nondecreasing() && rep.fitted_a == Some(0.0) && quad <= 1e-12,
            format!("fitted A per center {per_center:?}; trivial case |E/(2π²r⁴) − 1| ≤ {quad:.1e}"),
        ))
    });

    suite.run(12, "decay corollary and L¹ bound", || {
        let (sol12, _) = solve(12)?;
        let g12 = MetricField::euclidean(*sol12.phi.grid());
        let (tr12, _) = traces(&g12, &sol12.metric).map_err(e)?;
        let balls12 = BallFamily::standard(&tr12, 5, 0.05, 0.25, 10).map_err(e)?;
        let (rep12, _) = decay_and_l1(&g12, &sol12.metric, &sol12.omega_tilde, &TwoFormField::standard(*sol12.phi.grid()), &balls12, sol12.final_residual, 1e-9).map_err(e)?;
        let (rep16, chain) = decay_and_l1(&flat16, &sol16.metric, &sol16.omega_tilde, &w16, &balls16, sol16.final_residual, 1e-9).map_err(e)?;
        let spread = relative_change(rep12.decay_c, rep16.decay_c);
        let margin = chain.margins.iter().copied().fold(f64::INFINITY, f64::min);
        let equiv = (chain.equivalence_c / chain.equivalence_prediction - 1.0).abs();
        Ok((
            spread <= 0.05 && margin >= -1e-9 && chain.cohomology_defect <= 1e-9 && equiv <= 0.10,
            format!(
                "decay_C {:.4} → {:.4} (spread {:.2}%); wedge-chain margins {:?}, cohomology defect {:.1e}; equivalence {:.4} vs prediction {:.4}",
                rep12.decay_c,
                rep16.decay_c,
                100.0 * spread,
                chain.margins,
                chain.cohomology_defect,
                chain.equivalence_c,
                chain.equivalence_prediction
            ),
        ))
    });
    drop(sol16);

    suite.run(13, "determinism", || {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml");
        let config = ExperimentConfig::load(&path).map_err(e)?;
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut manifests = Vec::new();
        for d in &dirs {
            let opts = RunOptions { out: Some(d.path().to_path_buf()), quiet: true, ..Default::default() };
            manifests.push(Experiment::new(config.clone(), opts).map_err(|e| e.to_string())?.run_all().map_err(|e| e.to_string())?);
        }
        let mut differing = Vec::new();
        for file in [SOLUTION_FILE, CHECKPOINT_FILE, SUMMARY_FILE, "solve.json", "verify.json", "curvature.json", "monotonicity.json"] {
            if std::fs::read(dirs[0].path().join(file)).unwrap() != std::fs::read(dirs[1].path().join(file)).unwrap() {
                differing.push(file);
            }
        }
        let same_verdicts = manifests[0].verdicts == manifests[1].verdicts;
        Ok((
            differing.is_empty() && same_verdicts,
            format!(
                "containers and reports identical: {}; verdicts identical: {same_verdicts} ({} reports, failing: {:?})",
                differing.is_empty(),
                manifests[0].verdicts.len(),
                manifests[0].failures()
            ),
        ))
    });

    println!("\nacceptance summary");
    for (_, _, line) in &suite.lines {
        println!("  {line}");
    }
    let failed: Vec<usize> = suite.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    println!("{} of {} criteria pass", suite.lines.len() - failed.len(), suite.lines.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
