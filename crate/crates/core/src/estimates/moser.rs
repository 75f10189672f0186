//! Integral quantities of the zeroth-order estimate: the integration-by-parts
//! chain, `L^p` norms, the Poincaré ratio and `I_α`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::field::standard_j;
use crate::geometry::{FormField, ScalarField, TwoFormField};

/// Exponents at which `‖φ‖_{L^p}` is sampled.
pub const MOSER_EXPONENTS: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoserTrace {
    pub p_values: Vec<f64>,
    /// `(∫|φ|^p ωⁿ / ∫ωⁿ)^{1/p}`.
    pub lp_norms: Vec<f64>,
    pub c0_norm: f64,
    /// Named sides and margins of the integral comparisons.
    pub chain_residuals: BTreeMap<String, f64>,
    /// `∫|φ|² / ∫|∇φ|²` (flat).
    pub poincare_ratio: f64,
    /// `(α, I_α)` for the sup-normalized potential.
    pub i_alpha: Vec<(f64, f64)>,
}

impl MoserTrace {
    /// Margin of the integration-by-parts inequality.
    pub fn chain_margin(&self) -> f64 {
        self.chain_residuals["chain_margin"]
    }

    pub fn lp_monotone(&self) -> bool {
        self.lp_norms.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12))
    }

    /// `max_p ‖φ‖_p / ‖φ‖_{C⁰}`.
    pub fn sup_ratio(&self) -> f64 {
        if self.c0_norm == 0.0 {
            return 1.0;
        }
        self.lp_norms.iter().fold(0.0_f64, |m, &v| m.max(v)) / self.c0_norm
    }
}

/// `i∂φ∧∂̄φ = −½ dφ ∧ J0*dφ` as a real 2-form.
pub fn gradient_two_form(phi: &ScalarField) -> Result<FormField> {
    let grid = *phi.grid();
    let d = grid.real_dim();
    let spec = phi.spectrum();
    let grads: Vec<Vec<f64>> = (0..d).map(|a| spec.derivative_real(a)).collect();
    let j = standard_j(d);
    // (J*α)_a = α(J ∂_a) = Σ_b α_b J[b][a]
    let jd: Vec<Vec<f64>> = (0..d)
        .map(|a| (0..grid.len()).map(|p| (0..d).map(|b| grads[b][p] * j[(b, a)]).sum()).collect())
        .collect();
    let dphi = FormField::one_form(grid, grads)?;
    let jdphi = FormField::one_form(grid, jd)?;
    Ok(dphi.wedge(&jdphi)?.scaled(-0.5))
}

/// `∫|φ|² / ∫|∇φ|²` with the flat metric.
pub fn poincare_ratio(phi: &ScalarField) -> f64 {
    let spec = phi.spectrum();
    let d = phi.grid().real_dim();
    let grad2: f64 = (0..d)
        .map(|a| spec.derivative_real(a).iter().map(|v| v * v).sum::<f64>())
        .sum();
    let num: f64 = phi.values().iter().map(|v| v * v).sum();
    if grad2 == 0.0 {
        0.0
    } else {
        num / grad2
    }
}

/// `I_α = ∫ e^{−αφ} Ωⁿ` for a sup-normalized `φ`.
pub fn i_alpha(phi: &ScalarField, omega: &TwoFormField, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let scale = phi.max_abs().max(1.0);
    if phi.max().abs() > 1e-12 * scale {
        return Err(Error::Hypothesis(format!("I_α needs sup φ = 0, got {:.3e}", phi.max())));
    }
    let n = phi.grid().complex_dim();
    let vol = FormField::from_two_form(omega).power(n)?.top_density()?;
    Ok(alphas
        .iter()
        .map(|&a| (a, phi.map(|v| (-a * v).exp()).zip_map(&vol, |e, w| e * w).integrate()))
        .collect())
}

/// Evaluate both sides of `∫φ(ωⁿ − ω̃ⁿ) ≤ C∫|φ|ωⁿ` (`C = max|ω̃ⁿ/ωⁿ − 1|`)
/// and of `∫φ(ωⁿ − ω̃ⁿ) = Σᵢ ∫ i∂φ∧∂̄φ∧ωⁱ∧ω̃^{n−1−i} ≥ ∫ i∂φ∧∂̄φ∧ω^{n−1}`,
/// plus `L^p` norms, the Poincaré ratio and `I_α` for `α ∈ {0.5, 1, 2}`.
pub fn moser_chain(phi: &ScalarField, omega: &TwoFormField, omega_tilde: &TwoFormField) -> Result<MoserTrace> {
    let grid = *phi.grid();
    let n = grid.complex_dim();
    let scale = phi.max_abs().max(1.0);
    if phi.mean().abs() > 1e-10 * scale {
        return Err(Error::Hypothesis(format!("potential must have zero mean, got {:.3e}", phi.mean())));
    }
    let w = FormField::from_two_form(omega);
    let wt = FormField::from_two_form(omega_tilde);
    let vol = w.power(n)?.top_density()?;
    let vol_t = wt.power(n)?.top_density()?;
    let total = vol.integrate();

    let lhs = phi.zip_map(&vol.zip_map(&vol_t, |a, b| a - b), |p, v| p * v).integrate();
    let ratio_dev = vol_t.zip_map(&vol, |a, b| (a / b - 1.0).abs()).max();
    let rhs44 = ratio_dev * phi.map(f64::abs).zip_map(&vol, |a, b| a * b).integrate();

    let grad = gradient_two_form(phi)?;
    let mut residuals = BTreeMap::new();
    let mut sum = 0.0;
    let mut last = 0.0;
    for i in 0..n {
        let term = grad.wedge(&w.power(i)?)?.wedge(&wt.power(n - 1 - i)?)?.integrate_top()?;
        residuals.insert(format!("mixed_term_{i}"), term);
        sum += term;
        if i == n - 1 {
            last = term;
        }
    }
    residuals.insert("lhs".into(), lhs);
    residuals.insert("c_bound_rhs".into(), rhs44);
    residuals.insert("c_bound_margin".into(), rhs44 - lhs);
    residuals.insert("integration_by_parts_residual".into(), lhs - sum);
    residuals.insert("chain_rhs".into(), last);
    residuals.insert("chain_margin".into(), lhs - last);

    let abs = phi.map(f64::abs);
    let c0 = abs.max();
    let lp_norms = MOSER_EXPONENTS
        .iter()
        .map(|&p| {
            if c0 == 0.0 {
                return 0.0;
            }
            // scale by the sup to keep |φ|^p representable
            let m = abs.map(|v| (v / c0).powf(p)).zip_map(&vol, |a, b| a * b).integrate() / total;
            c0 * m.powf(1.0 / p)
        })
        .collect();
    let sup = phi.shifted(-phi.max());
    let i_alpha = i_alpha(&sup, omega, &[0.5, 1.0, 2.0])?;
    Ok(MoserTrace {
        p_values: MOSER_EXPONENTS.to_vec(),
        lp_norms,
        c0_norm: c0,
        chain_residuals: residuals,
        poincare_ratio: poincare_ratio(phi),
        i_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PeriodicGrid;
    use std::f64::consts::PI;

    #[test]
    fn zero_potential_gives_zeros() {
        let grid = PeriodicGrid::new(2, 4).unwrap();
        let w = TwoFormField::standard(grid);
        let t = moser_chain(&ScalarField::zeros(grid), &w, &w).unwrap();
        assert!(t.chain_residuals.values().all(|v| *v == 0.0));
        assert!(t.lp_norms.iter().all(|v| *v == 0.0));
        // ∫ω² = 2 on the unit T⁴
        assert!(t.i_alpha.iter().all(|(_, v)| (v - 2.0).abs() < 1e-14));
    }

    #[test]
    fn gradient_form_in_one_dimension() {
        // i∂φ∧∂̄φ = ½|∇φ|² dx∧dy
        let grid = PeriodicGrid::new(1, 16).unwrap();
        let phi = ScalarField::from_fn(grid, |x| (2.0 * PI * x[0]).sin() + (2.0 * PI * x[1]).cos());
        let g = gradient_two_form(&phi).unwrap();
        let got = g.integrate_top().unwrap();
        let want = 0.5 * (2.0 * PI).powi(2);
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn eigenfunction_poincare_ratio() {
        let grid = PeriodicGrid::new(2, 8).unwrap();
        let phi = ScalarField::from_fn(grid, |x| (2.0 * PI * x[3]).sin());
        assert!((poincare_ratio(&phi) - 1.0 / (4.0 * PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_mean_zero() {
        let grid = PeriodicGrid::new(1, 4).unwrap();
        let w = TwoFormField::standard(grid);
        assert!(moser_chain(&ScalarField::constant(grid, 1.0), &w, &w).is_err());
    }
}
