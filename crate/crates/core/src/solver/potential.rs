//! Recovering the potential from `Δ̃φ = 2n − tr_g̃ g_Ω`, `sup φ = 0`.

use num_complex::Complex64 as C;

use super::krylov::{conjugate_gradient, gmres, KrylovOptions};
use crate::error::{Error, Result};
use crate::geometry::spectral::{laplacian_symbol, Spectrum};
use crate::geometry::{traces, MetricField, MetricLaplacian, PeriodicGrid, ScalarField};

fn flat_inverse(grid: PeriodicGrid, scale: f64) -> impl Fn(&[f64]) -> Vec<f64> {
    move |r: &[f64]| {
        Spectrum::of_real(&grid, r)
            .apply(|k| {
                let s = laplacian_symbol(&grid, k);
                C::new(if s == 0.0 { 0.0 } else { scale / s }, 0.0)
            })
            .into_iter()
            .map(|z| z.re)
            .collect()
    }
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

/// Right side `2n − tr_g̃ g_Ω` and its `√det g̃`-weighted mean relative to
/// its size.
pub fn potential_rhs(g_tilde: &MetricField, g_omega: &MetricField) -> Result<(ScalarField, f64)> {
    let grid = *g_tilde.grid();
    let (_, back) = traces(g_omega, g_tilde)?;
    let rhs = back.map(|v| grid.real_dim() as f64 - v);
    let w = g_tilde.volume_density();
    let weighted = rhs.zip_map(&w, |a, b| a * b);
    let scale = rhs.max_abs().max(1.0);
    Ok((rhs, weighted.mean() / (w.mean() * scale)))
}

/// Solve `Δ̃φ = 2n − tr_g̃ g_Ω` in divergence form by preconditioned CG,
/// then shift so that `sup φ = 0`.
pub fn recover_potential(g_tilde: &MetricField, g_omega: &MetricField, mean_tol: f64) -> Result<ScalarField> {
    let grid = *g_tilde.grid();
    let (rhs, mean_defect) = potential_rhs(g_tilde, g_omega)?;
    if mean_defect.abs() > mean_tol {
        return Err(Error::Hypothesis(format!(
            "right side has g̃-mean {mean_defect:.3e}; the trace identity is broken"
        )));
    }
    let lap = MetricLaplacian::new(g_tilde);
    let mut b: Vec<f64> = rhs.values().iter().zip(lap.sqrt_det()).map(|(r, s)| -r * s).collect();
    remove_mean(&mut b);
    let apply = |f: &[f64]| {
        let mut v: Vec<f64> = lap.apply_weighted(f).into_iter().map(|x| -x).collect();
        remove_mean(&mut v);
        v
    };
    let out = conjugate_gradient(&apply, &flat_inverse(grid, -1.0), &b, KrylovOptions { rel_tol: 1e-13, restart: 0, max_iter: 2000 })?;
    let phi = ScalarField::new(grid, out.x)?;
    Ok(phi.shifted(-phi.max()))
}

/// Independent solve of `Δ̃φ = rhs` in non-divergence form by GMRES,
/// normalized to `sup φ = 0`.
pub fn solve_metric_poisson_gmres(g_tilde: &MetricField, rhs: &ScalarField) -> Result<ScalarField> {
    let grid = *g_tilde.grid();
    let lap = MetricLaplacian::new(g_tilde);
    // project the right side onto the range: subtract the √g-weighted mean
    let w = lap.sqrt_det();
    let wm = w.iter().sum::<f64>();
    let c = rhs.values().iter().zip(w).map(|(r, s)| r * s).sum::<f64>() / wm;
    let b: Vec<f64> = rhs.values().iter().map(|r| r - c).collect();
    // the weighted mean of b is zero; GMRES on mean-zero unknowns
    let apply = |f: &[f64]| lap.apply(f);
    let out = gmres(&apply, &flat_inverse(grid, 1.0), &b, KrylovOptions { rel_tol: 1e-12, restart: 60, max_iter: 2000 })?;
    let phi = ScalarField::new(grid, out.x)?;
    Ok(phi.shifted(-phi.max()))
}
