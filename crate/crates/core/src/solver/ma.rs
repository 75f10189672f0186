//! The complex Monge–Ampère operator on the flat torus and its linearization.
//!
//! With `ω0 = Σ dx∧dy` the Hermitian metric is `h0 = ½ I`, so
//! `(ω0 + i∂∂̄φ)ⁿ / ω0ⁿ = det(I + 2 Φ)` where `Φ_{jk̄} = ∂_{z_j}∂_{z̄_k} φ`.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::geometry::spectral::{second_multiplier, Spectrum};
use crate::geometry::{PeriodicGrid, ScalarField};

/// `∂_{z_j}∂_{z̄_k} φ` for all `j, k`, index `j * n + k`.
pub fn complex_hessian(spec: &Spectrum) -> Vec<Vec<C>> {
    let grid = *spec.grid();
    let n = grid.complex_dim();
    let mut out = vec![Vec::new(); n * n];
    for j in 0..n {
        for k in j..n {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            let v = spec.apply(|f| {
                let re = second_multiplier(&grid, f, xj, xk) + second_multiplier(&grid, f, yj, yk);
                let im = second_multiplier(&grid, f, xj, yk) - second_multiplier(&grid, f, yj, xk);
                (re + im * C::new(0.0, 1.0)) * 0.25
            });
            if j != k {
                out[k * n + j] = v.iter().map(|z| z.conj()).collect();
            } else {
                // diagonal entries are real
                out[j * n + k] = v.iter().map(|z| C::new(z.re, 0.0)).collect();
                continue;
            }
            out[j * n + k] = v;
        }
    }
    out
}

/// Pointwise `M = I + 2Φ` for a potential.
#[derive(Debug, Clone)]
pub struct MongeAmpere {
    grid: PeriodicGrid,
    /// `m[j * n + k][p]`
    m: Vec<Vec<C>>,
}

impl MongeAmpere {
    pub fn of(phi: &ScalarField) -> Self {
        let grid = *phi.grid();
        let n = grid.complex_dim();
        let mut m = complex_hessian(&phi.spectrum());
        for (idx, comp) in m.iter_mut().enumerate() {
            let diag = idx / n == idx % n;
            for z in comp.iter_mut() {
                *z *= 2.0;
                if diag {
                    *z += 1.0;
                }
            }
        }
        Self { grid, m }
    }

    fn n(&self) -> usize {
        self.grid.complex_dim()
    }

    fn entry(&self, j: usize, k: usize, p: usize) -> C {
        self.m[j * self.n() + k][p]
    }

    /// `det M`, the volume ratio `ω̃ⁿ/ωⁿ`.
    pub fn volume_ratio(&self) -> ScalarField {
        let vals = (0..self.grid.len())
            .map(|p| match self.n() {
                1 => self.entry(0, 0, p).re,
                _ => self.entry(0, 0, p).re * self.entry(1, 1, p).re - self.entry(0, 1, p).norm_sqr(),
            })
            .collect();
        ScalarField::new(self.grid, vals).expect("grid sized")
    }

    /// Smallest eigenvalue of the Hermitian matrix `M` over the grid; the
    /// real metric `g̃` has the same spectrum.
    pub fn min_eigenvalue(&self) -> f64 {
        (0..self.grid.len())
            .map(|p| match self.n() {
                1 => self.entry(0, 0, p).re,
                _ => {
                    let a = self.entry(0, 0, p).re;
                    let d = self.entry(1, 1, p).re;
                    let b2 = self.entry(0, 1, p).norm_sqr();
                    0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b2).sqrt()
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_positive(&self) -> Result<()> {
        let min = self.min_eigenvalue();
        if min > 0.0 {
            Ok(())
        } else {
            Err(Error::PositivityLost { min_eigenvalue: min })
        }
    }

    /// Linearization `δ ↦ d/dε det(I + 2Φ(φ + εδ)) = 2 tr(adj(M) Φ(δ))`,
    /// equal to `det M · ½ g̃^{ab} ∂_a ∂_b δ`.
    pub fn linearized(&self, delta: &[f64]) -> Vec<f64> {
        let spec = Spectrum::of_real(&self.grid, delta);
        let x = complex_hessian(&spec);
        let n = self.n();
        (0..self.grid.len())
            .map(|p| match n {
                1 => 2.0 * x[0][p].re,
                _ => {
                    let t = self.entry(1, 1, p).re * x[0][p].re + self.entry(0, 0, p).re * x[3][p].re
                        - 2.0 * (self.entry(0, 1, p) * x[2][p]).re;
                    2.0 * t
                }
            })
            .collect()
    }
}

/// `F − log(mean e^F)`, so that `∫ e^F dV = ∫ dV`.
pub fn normalize_density(f: &ScalarField) -> ScalarField {
    let m = f.map(f64::exp).mean();
    f.shifted(-m.ln())
}

/// `c_t = −log(mean e^{tF})`.
pub fn c_of_t(f: &ScalarField, t: f64) -> f64 {
    -f.map(|v| (t * v).exp()).mean().ln()
}

/// Right-hand side `e^{tF + c_t}`.
pub fn target_density(f: &ScalarField, t: f64) -> ScalarField {
    let c = c_of_t(f, t);
    f.map(|v| (t * v + c).exp())
}

/// `det(I + 2Φ) − e^{tF + c_t}`, after checking positivity of `ω0 + i∂∂̄φ`.
pub fn ma_residual(phi: &ScalarField, t: f64, f: &ScalarField) -> Result<ScalarField> {
    if phi.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    let ma = MongeAmpere::of(phi);
    ma.check_positive()?;
    Ok(ma.volume_ratio().zip_map(&target_density(f, t), |a, b| a - b))
}
