//! Continuity path `(ω0 + i∂∂̄φ_t)ⁿ = e^{tF + c_t} ω0ⁿ` with damped Newton.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::krylov::{gmres, KrylovOptions};
use super::ma::{c_of_t, ma_residual, normalize_density, MongeAmpere};
use crate::error::{Error, Result};
use crate::geometry::spectral::{laplacian_symbol, Spectrum};
use crate::geometry::structure::i_ddbar;
use crate::geometry::{metric_from_pair, AlmostComplexField, MetricField, PeriodicGrid, ScalarField, TwoFormField};

/// Smallest damping factor before the t-step is bisected.
pub const DAMPING_FLOOR: f64 = 1.0 / (1 << 20) as f64;

/// Calabi–Yau problem on the flat torus with background `ω0`, `J0`.
#[derive(Debug, Clone)]
pub struct CYProblem {
    pub grid: PeriodicGrid,
    /// Normalized density exponent.
    pub f: ScalarField,
    pub schedule: Vec<f64>,
    pub tol_residual: f64,
    pub tol_newton: f64,
    pub max_newton: usize,
    pub max_bisections: usize,
}

impl CYProblem {
    /// Uniform schedule with `steps` continuity steps; `F` is normalized.
    pub fn new(f: &ScalarField, steps: usize) -> Self {
        let steps = steps.max(1);
        Self {
            grid: *f.grid(),
            f: normalize_density(f),
            schedule: (0..=steps).map(|k| k as f64 / steps as f64).collect(),
            tol_residual: 1e-11,
            tol_newton: 1e-10,
            max_newton: 30,
            max_bisections: 8,
        }
    }

    pub fn with_schedule(mut self, schedule: Vec<f64>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.schedule;
        if s.is_empty() || s[0] != 0.0 || *s.last().unwrap() != 1.0 || s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("schedule must increase from 0 to 1".into()));
        }
        if !(self.tol_residual > 0.0 && self.tol_newton > 0.0) || self.max_newton == 0 {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// One accepted continuity step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub c_t: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Max-norm residual before each Newton iteration and after the last.
    pub history: Vec<f64>,
}

/// Solution of the continuity path at `t = 1`.
#[derive(Debug, Clone)]
pub struct CYSolution {
    /// Potential in the mean-zero gauge.
    pub phi: ScalarField,
    pub omega_tilde: TwoFormField,
    pub metric: MetricField,
    pub trace: Vec<StepRecord>,
    pub final_residual: f64,
}

impl CYSolution {
    /// Assemble `ω̃`, `g̃` from a potential.
    pub fn from_potential(phi: ScalarField, trace: Vec<StepRecord>, final_residual: f64) -> Result<Self> {
        let grid = *phi.grid();
        let omega_tilde = TwoFormField::standard(grid).add(&i_ddbar(&phi));
        let metric = metric_from_pair(&omega_tilde, &AlmostComplexField::standard(grid))?;
        Ok(Self {
            phi,
            omega_tilde,
            metric,
            trace,
            final_residual,
        })
    }

    /// `|∫ω̃ⁿ − ∫ω0ⁿ| / ∫ω0ⁿ`.
    pub fn volume_error(&self) -> f64 {
        (MongeAmpere::of(&self.phi).volume_ratio().integrate() - 1.0).abs()
    }

    /// Potential with `sup φ = 0`.
    pub fn sup_normalized(&self) -> ScalarField {
        self.phi.shifted(-self.phi.max())
    }
}

/// Result of one Newton update.
#[derive(Debug, Clone)]
pub struct NewtonUpdate {
    pub phi: ScalarField,
    pub residual: f64,
    pub damping: f64,
    pub krylov_iterations: usize,
}

fn l2(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

/// `(½Δ)^{-1}` on mean-zero functions.
fn flat_preconditioner(grid: PeriodicGrid) -> impl Fn(&[f64]) -> Vec<f64> {
    move |r: &[f64]| {
        let spec = Spectrum::of_real(&grid, r);
        spec.apply(|k| {
            let s = laplacian_symbol(&grid, k);
            if s == 0.0 {
                C::new(0.0, 0.0)
            } else {
                C::new(2.0 / s, 0.0)
            }
        })
        .into_iter()
        .map(|z| z.re)
        .collect()
    }
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= m;
    }
}

/// One damped Newton step for `(*)_t` from `φ`: solves `L δ = residual`
/// (mean-zero) with the full linearization and returns `φ − λδ`, halving
/// `λ` until positivity holds and the residual decreases.
pub fn newton_step(phi: &ScalarField, t: f64, problem: &CYProblem) -> Result<NewtonUpdate> {
    let grid = problem.grid;
    let res = ma_residual(phi, t, &problem.f)?;
    let mut rhs = res.values().to_vec();
    remove_mean(&mut rhs);
    let r0 = l2(res.values());
    let ma = MongeAmpere::of(phi);
    let apply = |d: &[f64]| {
        let mut v = ma.linearized(d);
        remove_mean(&mut v);
        v
    };
    let pre = flat_preconditioner(grid);
    let sol = gmres(
        &apply,
        &pre,
        &rhs,
        KrylovOptions {
            rel_tol: problem.tol_newton,
            restart: 40,
            max_iter: 600,
        },
    )?;
    let mut delta = sol.x;
    remove_mean(&mut delta);
    let mut lambda = 1.0;
    while lambda >= DAMPING_FLOOR {
        let cand = ScalarField::new(
            grid,
            phi.values().iter().zip(&delta).map(|(p, d)| p - lambda * d).collect(),
        )?;
        if let Ok(r) = ma_residual(&cand, t, &problem.f) {
            if l2(r.values()) < r0 || r0 == 0.0 {
                return Ok(NewtonUpdate {
                    phi: cand,
                    residual: r.max_abs(),
                    damping: lambda,
                    krylov_iterations: sol.iterations,
                });
            }
        }
        lambda *= 0.5;
    }
    Err(Error::DampingFloor { residual: res.max_abs() })
}

/// Newton iterations at fixed `t` until the max-norm residual is below
/// tolerance.
pub fn solve_at(phi0: &ScalarField, t: f64, problem: &CYProblem) -> Result<(ScalarField, StepRecord)> {
    let mut phi = phi0.clone();
    let mut r = ma_residual(&phi, t, &problem.f)?.max_abs();
    let mut history = vec![r];
    let mut it = 0;
    while r > problem.tol_residual {
        if it == problem.max_newton {
            return Err(Error::DampingFloor { residual: r });
        }
        let up = newton_step(&phi, t, problem)?;
        phi = up.phi;
        r = up.residual;
        history.push(r);
        it += 1;
    }
    Ok((
        phi,
        StepRecord {
            t,
            c_t: c_of_t(&problem.f, t),
            iterations: it,
            residual: r,
            history,
        },
    ))
}

/// State of a continuity run that can be checkpointed and resumed.
#[derive(Debug, Clone)]
pub struct ContinuityState {
    pub t: f64,
    pub phi: ScalarField,
    pub trace: Vec<StepRecord>,
}

impl ContinuityState {
    pub fn start(grid: PeriodicGrid) -> Self {
        Self {
            t: 0.0,
            phi: ScalarField::zeros(grid),
            trace: Vec::new(),
        }
    }
}

/// Run the continuity method to `t = 1`, warm-starting each step and
/// bisecting a step whenever Newton fails.
pub fn continuity_solve(problem: &CYProblem) -> Result<CYSolution> {
    continuity_resume(problem, ContinuityState::start(problem.grid), |_| Ok(()))
}

/// Continue from a checkpointed state; `on_step` sees every accepted step.
pub fn continuity_resume(
    problem: &CYProblem,
    mut state: ContinuityState,
    mut on_step: impl FnMut(&ContinuityState) -> Result<()>,
) -> Result<CYSolution> {
    problem.validate()?;
    if state.phi.grid() != &problem.grid {
        return Err(Error::GridMismatch);
    }
    let mut targets: Vec<f64> = if problem.f.max_abs() == 0.0 {
        // the path is constant: only the endpoint matters
        vec![1.0]
    } else {
        problem.schedule.iter().copied().filter(|&s| s > state.t).collect()
    };
    targets.reverse();
    let mut bisections = 0;
    if state.trace.is_empty() && state.t == 0.0 && problem.f.max_abs() != 0.0 {
        let (phi, rec) = solve_at(&state.phi, 0.0, problem)?;
        state.phi = phi;
        state.trace.push(rec);
        on_step(&state)?;
    }
    while let Some(&t) = targets.last() {
        match solve_at(&state.phi, t, problem) {
            Ok((phi, rec)) => {
                targets.pop();
                state.t = t;
                state.phi = phi;
                state.trace.push(rec);
                on_step(&state)?;
            }
            Err(Error::DampingFloor { .. })
            | Err(Error::PositivityLost { .. })
            | Err(Error::LinearSolveFailed { .. }) => {
                bisections += 1;
                if bisections > problem.max_bisections {
                    return Err(Error::ScheduleExhausted { last_good_t: state.t });
                }
                targets.push(0.5 * (state.t + t));
            }
            Err(e) => return Err(e),
        }
    }
    let final_residual = state.trace.last().map(|r| r.residual).unwrap_or(0.0);
    CYSolution::from_potential(state.phi, state.trace, final_residual)
}
