//! Levi-Civita Laplacian of a metric on scalars.

use super::field::{MetricField, ScalarField};
use super::grid::PeriodicGrid;
use super::spectral::Spectrum;

/// `Δ_g f = g^{ab}∂_a∂_b f − g^{ab}Γ^c_{ab} ∂_c f
///        = (1/√g) ∂_a(√g g^{ab} ∂_b f)`.
#[derive(Debug, Clone)]
pub struct MetricLaplacian {
    grid: PeriodicGrid,
    /// `g^{ab}`, component `a * d + b`.
    inverse: Vec<Vec<f64>>,
    sqrt_det: Vec<f64>,
    /// `V^c = g^{ab}Γ^c_{ab} = −(1/√g) ∂_a(√g g^{ac})`.
    contracted_christoffel: Vec<Vec<f64>>,
}

impl MetricLaplacian {
    pub fn new(g: &MetricField) -> Self {
        let grid = *g.grid();
        let d = grid.real_dim();
        let inv = g.inverse();
        let inverse: Vec<Vec<f64>> = inv.components().to_vec();
        let sqrt_det: Vec<f64> = g.determinant().values().iter().map(|v| v.sqrt()).collect();
        let mut contracted = vec![vec![0.0; grid.len()]; d];
        for c in 0..d {
            for a in 0..d {
                let weighted: Vec<f64> = (0..grid.len()).map(|p| sqrt_det[p] * inverse[a * d + c][p]).collect();
                let da = Spectrum::of_real(&grid, &weighted).derivative_real(a);
                for p in 0..grid.len() {
                    contracted[c][p] -= da[p] / sqrt_det[p];
                }
            }
        }
        Self {
            grid,
            inverse,
            sqrt_det,
            contracted_christoffel: contracted,
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn sqrt_det(&self) -> &[f64] {
        &self.sqrt_det
    }

    pub fn inverse_component(&self, a: usize, b: usize) -> &[f64] {
        &self.inverse[a * self.grid.real_dim() + b]
    }

    /// `g^{ab}Γ^c_{ab}`.
    pub fn contracted_christoffel(&self, c: usize) -> &[f64] {
        &self.contracted_christoffel[c]
    }

    /// Non-divergence form `g^{ab}∂_a∂_b f − V^c ∂_c f`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let d = self.grid.real_dim();
        let spec = Spectrum::of_real(&self.grid, f);
        let mut out = vec![0.0; self.grid.len()];
        for a in 0..d {
            for b in a..d {
                let h = spec.second_derivative_real(a, b);
                let w = if a == b { 1.0 } else { 2.0 };
                let gi = &self.inverse[a * d + b];
                for p in 0..out.len() {
                    out[p] += w * gi[p] * h[p];
                }
            }
            let da = spec.derivative_real(a);
            let v = &self.contracted_christoffel[a];
            for p in 0..out.len() {
                out[p] -= v[p] * da[p];
            }
        }
        out
    }

    /// Divergence form `∂_a(√g g^{ab} ∂_b f)`, i.e. `√g Δ_g f`; symmetric
    /// with respect to the flat inner product.
    pub fn apply_weighted(&self, f: &[f64]) -> Vec<f64> {
        let d = self.grid.real_dim();
        let spec = Spectrum::of_real(&self.grid, f);
        let grads: Vec<Vec<f64>> = (0..d).map(|b| spec.derivative_real(b)).collect();
        let mut out = vec![0.0; self.grid.len()];
        for a in 0..d {
            let flux: Vec<f64> = (0..self.grid.len())
                .map(|p| self.sqrt_det[p] * (0..d).map(|b| self.inverse[a * d + b][p] * grads[b][p]).sum::<f64>())
                .collect();
            let da = Spectrum::of_real(&self.grid, &flux).derivative_real(a);
            for p in 0..out.len() {
                out[p] += da[p];
            }
        }
        out
    }

    pub fn apply_field(&self, f: &ScalarField) -> ScalarField {
        ScalarField::new(self.grid, self.apply(f.values())).expect("grid sized")
    }

    /// `|∇f|²_g = g^{ab} ∂_a f ∂_b f`.
    pub fn gradient_norm2(&self, f: &ScalarField) -> ScalarField {
        let d = self.grid.real_dim();
        let spec = f.spectrum();
        let grads: Vec<Vec<f64>> = (0..d).map(|b| spec.derivative_real(b)).collect();
        let vals = (0..self.grid.len())
            .map(|p| {
                let mut s = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        s += self.inverse[a * d + b][p] * grads[a][p] * grads[b][p];
                    }
                }
                s
            })
            .collect();
        ScalarField::new(self.grid, vals).expect("grid sized")
    }
}
