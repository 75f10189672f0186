//! The wedge identity behind uniqueness of Calabi–Yau forms in dimension 4:
//! if `ω̃1² = ω̃2²` and both are `J`-compatible then
//! `(ω̃1 − ω̃2)² = ω̃1² (2 − (λ + 1/λ))` pointwise.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AlmostComplexField, ScalarField, TwoFormField};

/// Pfaffian of a 4×4 antisymmetric matrix: `w ∧ w = 2 Pf(w) dV`.
pub fn pfaffian4(w: &DMatrix<f64>) -> f64 {
    w[(0, 1)] * w[(2, 3)] - w[(0, 2)] * w[(1, 3)] + w[(0, 3)] * w[(1, 2)]
}

#[derive(Debug, Clone)]
pub struct WedgeIdentity {
    /// `λ ≥ 1` per point.
    pub lambda: ScalarField,
    /// `(ω̃1 − ω̃2)² / ω̃1²` per point.
    pub ratio: ScalarField,
    /// `ratio − (2 − (λ + 1/λ))`.
    pub residual: ScalarField,
}

#[derive(Debug, Clone, Serialize)]
pub struct WedgeSummary {
    pub max_residual: f64,
    pub max_lambda_deviation: f64,
}

impl WedgeIdentity {
    pub fn summary(&self) -> WedgeSummary {
        WedgeSummary {
            max_residual: self.residual.max_abs(),
            max_lambda_deviation: self.lambda.map(|l| (l - 1.0).abs()).max(),
        }
    }
}

/// Pointwise `λ` from the eigenvalues of `g1⁻¹ g2` (each doubled, product 1
/// after the top powers agree) and the residual of the wedge identity.
pub fn uniqueness_wedge_identity(
    w1: &TwoFormField,
    w2: &TwoFormField,
    j: &AlmostComplexField,
    tol: f64,
) -> Result<WedgeIdentity> {
    let grid = *w1.grid();
    if grid.real_dim() != 4 {
        return Err(Error::InvalidArgument("wedge identity is stated for n = 2".into()));
    }
    let mut lambda = Vec::with_capacity(grid.len());
    let mut ratio = Vec::with_capacity(grid.len());
    let mut residual = Vec::with_capacity(grid.len());
    for p in 0..grid.len() {
        let (a, b, jm) = (w1.at(p), w2.at(p), j.at(p));
        let (pa, pb) = (pfaffian4(&a), pfaffian4(&b));
        if (pa - pb).abs() > tol * pa.abs() {
            return Err(Error::Hypothesis(format!(
                "top powers differ at point {p}: {pa} vs {pb}"
            )));
        }
        let g1 = &a * &jm;
        let g2 = &b * &jm;
        // λ + 1/λ = ½ tr(g1⁻¹ g2)
        let s = 0.5 * (g1.clone().try_inverse().ok_or(Error::DegenerateFrame { point: p })? * g2).trace();
        let l = 0.5 * (s + (s * s - 4.0).max(0.0).sqrt());
        let r = pfaffian4(&(&a - &b)) / pa;
        lambda.push(l);
        ratio.push(r);
        residual.push(r - (2.0 - s));
    }
    Ok(WedgeIdentity {
        lambda: ScalarField::new(grid, lambda)?,
        ratio: ScalarField::new(grid, ratio)?,
        residual: ScalarField::new(grid, residual)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MatrixField, PeriodicGrid};

    #[test]
    fn synthetic_lambda_two() {
        let grid = PeriodicGrid::new(2, 4).unwrap();
        let j = AlmostComplexField::standard(grid);
        let w1 = TwoFormField::standard(grid);
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 2.0;
        m[(1, 0)] = -2.0;
        m[(2, 3)] = 0.5;
        m[(3, 2)] = -0.5;
        let w2 = TwoFormField::new(MatrixField::constant(grid, &m)).unwrap();
        let out = uniqueness_wedge_identity(&w1, &w2, &j, 1e-12).unwrap();
        assert!((out.lambda.max() - 2.0).abs() < 1e-12);
        assert!((out.ratio.max() + 0.5).abs() < 1e-12);
        assert!(out.residual.max_abs() < 1e-12);
    }
}
