//! Pointwise checks: the trace identity, the exponential bound, the
//! maximum-principle inequalities and the third-order quantity.

use num_complex::Complex64 as C;

use super::jet::ComplexJet;
use super::report::EstimateReport;
use crate::error::{Error, Result};
use crate::geometry::{traces, FormField, MetricField, MetricLaplacian, ScalarField, TwoFormField};

fn worst(field: &[f64]) -> (usize, f64) {
    field
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (p, v)| if v < acc.1 { (p, v) } else { acc })
}

/// Check `tr_g̃ g_Ω = 2n ω̃^{n−1}∧Ω / ω̃ⁿ` pointwise and that the
/// `ω̃ⁿ`-average of `tr_g̃ g_Ω` is `2n`. `g_Ω` is the metric of the
/// J-invariant part of `Ω`.
pub fn verify_trace_identity(
    omega_tilde: &TwoFormField,
    omega: &TwoFormField,
    g_tilde: &MetricField,
    g_omega: &MetricField,
) -> Result<EstimateReport> {
    let grid = *g_tilde.grid();
    let n = grid.complex_dim();
    let (_, lhs) = traces(g_omega, g_tilde)?;
    let wt = FormField::from_two_form(omega_tilde);
    let top = wt.power(n)?.top_density()?;
    let mixed = wt.power(n - 1)?.wedge(&FormField::from_two_form(omega))?.top_density()?;
    let rhs = mixed.zip_map(&top, |a, b| 2.0 * n as f64 * a / b);
    let residual = lhs.max_abs_diff(&rhs);
    let average = lhs.zip_map(&top, |a, b| a * b).integrate() / top.integrate();
    let deviation = (average - 2.0 * n as f64).abs();
    let (p, v) = lhs.argmax();
    let mut report = EstimateReport::new(
        "trace_identity",
        "tr_g̃ g_Ω = 2n ω̃^{n-1}∧Ω/ω̃ⁿ; ω̃ⁿ-average of tr_g̃ g_Ω equals 2n",
        -residual.max(deviation),
        1e-9,
        grid.resolution(),
    )
    .with_constant("pointwise_residual", residual)
    .with_constant("average", average)
    .with_constant("average_deviation", deviation)
    .with_worst(p, v);
    if residual > 1e-9 || deviation > 1e-10 {
        report.verdict = super::report::Verdict::Fail;
    }
    Ok(report)
}

/// `C(A) = max tr_g g̃ · e^{−A(φ − inf φ)}` for each `A`: the frontier of
/// constants in `tr_g g̃ ≤ C e^{A(φ − inf φ)}`.
pub fn exponential_frontier(phi: &ScalarField, g: &MetricField, g_tilde: &MetricField, a_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let (tr, _) = traces(g, g_tilde)?;
    let inf = phi.min();
    Ok(a_grid
        .iter()
        .map(|&a| {
            let c = tr
                .values()
                .iter()
                .zip(phi.values())
                .map(|(t, p)| t * (-a * (p - inf)).exp())
                .fold(f64::NEG_INFINITY, f64::max);
            (a, c)
        })
        .collect())
}

pub fn exponential_bound(phi: &ScalarField, g: &MetricField, g_tilde: &MetricField, a_grid: &[f64]) -> Result<EstimateReport> {
    let frontier = exponential_frontier(phi, g, g_tilde, a_grid)?;
    let (tr, _) = traces(g, g_tilde)?;
    let (p, v) = tr.argmax();
    let mut report = EstimateReport::info(
        "exponential_bound",
        "tr_g g̃ ≤ C(A) e^{A(φ − inf φ)}",
        phi.grid().resolution(),
    )
    .with_worst(p, v);
    for (a, c) in frontier {
        report = report.with_constant(&format!("C[A={a}]"), c);
    }
    Ok(report)
}

/// Fields entering the key inequality on the flat background.
#[derive(Debug, Clone)]
pub struct KeyInequalityFields {
    /// `Δ̃ log tr_g g̃`.
    pub lhs: ScalarField,
    /// `tr_g̃ g`.
    pub back_trace: ScalarField,
    /// `2ΔF / tr_g g̃`, with `F = log(ω̃ⁿ/ωⁿ)` and `Δ` flat.
    pub density_term: ScalarField,
}

impl KeyInequalityFields {
    pub fn compute(g: &MetricField, g_tilde: &MetricField) -> Result<Self> {
        let grid = *g.grid();
        let (tr, back) = traces(g, g_tilde)?;
        if tr.min() <= 0.0 {
            return Err(Error::Hypothesis("tr_g g̃ must be positive".into()));
        }
        let lap = MetricLaplacian::new(g_tilde);
        let lhs = lap.apply_field(&tr.map(f64::ln));
        let f = g_tilde
            .determinant()
            .zip_map(&g.determinant(), |a, b| 0.5 * (a / b).ln());
        let lap_f = ScalarField::new(grid, f.spectrum().laplacian_real())?;
        let density_term = lap_f.zip_map(&tr, |l, t| 2.0 * l / t);
        Ok(Self { lhs, back_trace: back, density_term })
    }
}

/// Evaluate `Δ̃ log tr_g g̃ + C₁ tr_g̃ g` and assert its minimum is above
/// `−tolerance` (the flat background has no curvature terms, so the
/// assertion is taken with `C₂ = 0`). Also records the `C₂` that would be
/// needed, and the slack of the sharp flat bound
/// `Δ̃ log tr_g g̃ ≥ 2ΔF / tr_g g̃`.
pub fn key_inequality(g: &MetricField, g_tilde: &MetricField, c1: f64, tolerance: f64) -> Result<EstimateReport> {
    let fields = KeyInequalityFields::compute(g, g_tilde)?;
    let k = fields.lhs.zip_map(&fields.back_trace, |l, b| l + c1 * b);
    let (p, v) = worst(k.values());
    let sharp = fields.lhs.zip_map(&fields.density_term, |l, d| l - d);
    Ok(EstimateReport::new(
        "key_inequality",
        "Δ̃ log tr_g g̃ ≥ −C₁ tr_g̃ g − C₂ with C₂ = 0 (flat background)",
        v,
        tolerance,
        g.grid().resolution(),
    )
    .with_constant("C1", c1)
    .with_constant("C2_required", (-v).max(0.0))
    .with_constant("sharp_flat_margin", sharp.min())
    .with_worst(p, v))
}

/// Pointwise good-term field `G − |∂ tr_g g̃|²_g̃ / tr_g g̃` where
/// `G = g^{ij̄} g̃^{pq̄} g̃^{kl̄} ∂_i g̃_{kq̄} ∂_j̄ g̃_{pl̄}` (complex traces, flat
/// `g`).
pub fn good_term_slack(phi: &ScalarField) -> ScalarField {
    let jet = ComplexJet::of(phi);
    let grid = *phi.grid();
    let n = grid.complex_dim();
    let vals = (0..grid.len())
        .map(|pt| {
            let h = jet.hermitian_at(pt);
            let inv = jet.inverse_at(pt);
            let a = jet.third_at(pt);
            // g^{ij̄} = 2δ for h = ½ I
            let g_term: f64 = 2.0
                * a.iter()
                    .map(|ai| {
                        let m = &inv * ai.map(|z| z.conj()) * &inv;
                        m.zip_map(ai, |x, y| x * y).sum().re
                    })
                    .sum::<f64>();
            let u = 2.0 * h.trace().re;
            let du: Vec<C> = (0..n).map(|p| (0..n).map(|i| a[p][(i, i)]).sum::<C>() * 2.0).collect();
            let mut grad2 = C::new(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    grad2 += inv[(p, q)] * du[p] * du[q].conj();
                }
            }
            g_term - grad2.re / u
        })
        .collect();
    ScalarField::new(grid, vals).expect("grid sized")
}

pub fn good_term_check(phi: &ScalarField, tolerance: f64) -> EstimateReport {
    let slack = good_term_slack(phi);
    let (p, v) = worst(slack.values());
    EstimateReport::new(
        "good_term",
        "g^{ij̄}g̃^{pq̄}g̃^{kl̄}∇_i g̃_{kq̄}∇_j̄ g̃_{pl̄} ≥ |∂ tr_g g̃|²_g̃ / tr_g g̃",
        v,
        tolerance,
        phi.grid().resolution(),
    )
    .with_worst(p, v)
}

/// `S = |∇_i∇_j̄∇_k φ|²_g̃` on the flat background.
pub fn third_order_field(phi: &ScalarField) -> ScalarField {
    let jet = ComplexJet::of(phi);
    let grid = *phi.grid();
    let n = grid.complex_dim();
    let vals = (0..grid.len())
        .map(|pt| {
            let inv = jet.inverse_at(pt);
            // φ_{ij̄k} = a[k][(i, j)]
            let a = jet.third_at(pt);
            let mut s = C::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let x = a[k][(i, j)];
                        if x == C::new(0.0, 0.0) {
                            continue;
                        }
                        for r in 0..n {
                            for sidx in 0..n {
                                for t in 0..n {
                                    s += inv[(i, r)] * inv[(sidx, j)] * inv[(k, t)] * x * a[t][(r, sidx)].conj();
                                }
                            }
                        }
                    }
                }
            }
            s.re
        })
        .collect();
    ScalarField::new(grid, vals).expect("grid sized")
}

/// Number of `C_a` values scanned by [`fit_pair`].
pub const FIT_GRID_POINTS: usize = 2001;

/// Fit `(C_a, C_b) ≥ 0` with `lhs + C_a w + C_b ≥ 0` everywhere (`w ≥ 0`).
///
/// For each `C_a` on a uniform grid the least admissible `C_b` is
/// `max(−lhs − C_a w)⁺`; the pair returned minimizes the mean of the lower
/// bound, `C_a · mean(w) + C_b`. The grid runs from 0 to the smallest `C_a`
/// that needs no `C_b` on the set where `w` is not negligible.
pub fn fit_pair(lhs: &ScalarField, w: &ScalarField) -> ((f64, f64), Vec<(f64, f64)>) {
    let floor = 1e-3 * w.max();
    let cap = lhs
        .values()
        .iter()
        .zip(w.values())
        .filter(|(_, &wv)| wv > floor && wv > 0.0)
        .map(|(l, wv)| -l / wv)
        .fold(0.0, f64::max);
    let mean_w = w.mean();
    let frontier: Vec<(f64, f64)> = (0..FIT_GRID_POINTS)
        .map(|k| {
            let ca = cap * k as f64 / (FIT_GRID_POINTS - 1) as f64;
            let cb = lhs
                .values()
                .iter()
                .zip(w.values())
                .map(|(l, wv)| -(l + ca * wv))
                .fold(0.0, f64::max);
            (ca, cb + 0.0)
        })
        .collect();
    let best = frontier.iter().copied().fold(frontier[0], |acc, x| {
        if x.0 * mean_w + x.1 < acc.0 * mean_w + acc.1 {
            x
        } else {
            acc
        }
    });
    (best, frontier)
}

/// Third-order quantity `S`, the fitted `(C₁, C₂)` in `Δ̃S ≥ −C₁S − C₂`, and
/// the fitted `(C₃, C₂')` in `Δ̃ tr_g g̃ ≥ −C₂' − C₃ (tr_g g̃)²`.
pub fn third_order_quantity(phi: &ScalarField, g: &MetricField, g_tilde: &MetricField) -> Result<EstimateReport> {
    let s = third_order_field(phi);
    let lap = MetricLaplacian::new(g_tilde);
    let lap_s = lap.apply_field(&s);
    let ((c1, c2), _) = fit_pair(&lap_s, &s);
    let (tr, _) = traces(g, g_tilde)?;
    let lap_tr = lap.apply_field(&tr);
    let tr2 = tr.map(|t| t * t);
    let ((c3, c2q), _) = fit_pair(&lap_tr, &tr2);
    let slack = lap_s.zip_map(&s, |l, sv| l + c1 * sv + c2);
    let (p, v) = worst(slack.values());
    Ok(EstimateReport::new(
        "third_order",
        "Δ̃S ≥ −C₁S − C₂ and Δ̃ tr_g g̃ ≥ −C₂' − C₃ (tr_g g̃)²",
        v,
        1e-12,
        phi.grid().resolution(),
    )
    .with_constant("C1", c1)
    .with_constant("C2", c2)
    .with_constant("C3", c3)
    .with_constant("C2_quadratic", c2q)
    .with_constant("S_max", s.max())
    .with_worst(p, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PeriodicGrid;
    use crate::solver::CYSolution;
    use std::f64::consts::PI;

    #[test]
    fn flat_solution_is_trivially_tight() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let sol = CYSolution::from_potential(ScalarField::zeros(grid), vec![], 0.0).unwrap();
        let g = MetricField::euclidean(grid);
        let key = key_inequality(&g, &sol.metric, 0.0, 1e-12).unwrap();
        assert!(key.margin.abs() < 1e-12);
        let third = third_order_quantity(&sol.phi, &g, &sol.metric).unwrap();
        assert_eq!(third.fitted_constants["C1"], 0.0);
        assert_eq!(third.fitted_constants["C2"], 0.0);
        let exp = exponential_frontier(&sol.phi, &g, &sol.metric, &[0.0, 1.0]).unwrap();
        assert!(exp.iter().all(|(_, c)| (c - 4.0).abs() < 1e-14));
    }

    #[test]
    fn third_derivatives_match_hand_computation() {
        // φ = ε sin(2πx1): φ_{z z z̄} = ∂³_x φ / 8
        let grid = PeriodicGrid::new(1, 16).unwrap();
        let eps = 0.01;
        let phi = ScalarField::from_fn(grid, |x| eps * (2.0 * PI * x[0]).sin());
        let jet = ComplexJet::of(&phi);
        for pt in [0, 5, 37] {
            let x = grid.point(pt)[0];
            let want = -eps * (2.0 * PI).powi(3) * (2.0 * PI * x).cos() / 8.0;
            assert!((jet.third_at(pt)[0][(0, 0)] - C::new(want, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn one_dimensional_key_inequality_is_sharp() {
        // n = 1: Δ̃ log tr = e^{−F} ΔF exactly
        let grid = PeriodicGrid::new(1, 32).unwrap();
        let phi = ScalarField::from_fn(grid, |x| 0.01 * (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos());
        let sol = CYSolution::from_potential(phi, vec![], 0.0).unwrap();
        let g = MetricField::euclidean(grid);
        let r = key_inequality(&g, &sol.metric, 0.0, 1e-9).unwrap();
        assert!(r.fitted_constants["sharp_flat_margin"].abs() < 1e-9);
        assert!(good_term_slack(&sol.phi).min() > -1e-12);
    }
}
