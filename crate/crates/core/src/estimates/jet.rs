//! Complex second and third derivatives of a potential on the flat torus.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use crate::geometry::spectral::first_multiplier;
use crate::geometry::{PeriodicGrid, ScalarField};
use crate::solver::ma::complex_hessian;

/// Multiplier of `∂_{z_j}` (or `∂_{z̄_j}` when `bar`).
fn dz(grid: &PeriodicGrid, flat: usize, j: usize, bar: bool) -> C {
    let x = first_multiplier(grid, flat, 2 * j);
    let y = first_multiplier(grid, flat, 2 * j + 1);
    let s = if bar { 1.0 } else { -1.0 };
    (x + C::new(0.0, s) * y) * 0.5
}

/// `h̃_{kq̄} = ½δ_{kq} + φ_{kq̄}` and `T_{pkq̄} = ∂_{z_p} φ_{kq̄}` sampled on
/// the grid.
#[derive(Debug, Clone)]
pub struct ComplexJet {
    grid: PeriodicGrid,
    h: Vec<Vec<C>>,
    t: Vec<Vec<C>>,
}

impl ComplexJet {
    pub fn of(phi: &ScalarField) -> Self {
        let grid = *phi.grid();
        let n = grid.complex_dim();
        let spec = phi.spectrum();
        let mut h = complex_hessian(&spec);
        for k in 0..n {
            for z in h[k * n + k].iter_mut() {
                *z += 0.5;
            }
        }
        let mut t = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for k in 0..n {
                for q in 0..n {
                    t.push(spec.apply(|f| dz(&grid, f, p, false) * dz(&grid, f, k, false) * dz(&grid, f, q, true)));
                }
            }
        }
        Self { grid, h, t }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    fn n(&self) -> usize {
        self.grid.complex_dim()
    }

    pub fn hermitian_at(&self, pt: usize) -> DMatrix<C> {
        let n = self.n();
        DMatrix::from_fn(n, n, |k, q| self.h[k * n + q][pt])
    }

    /// `A_p[k][q] = ∂_{z_p} h̃_{kq̄}` for each `p`.
    pub fn third_at(&self, pt: usize) -> Vec<DMatrix<C>> {
        let n = self.n();
        (0..n)
            .map(|p| DMatrix::from_fn(n, n, |k, q| self.t[(p * n + k) * n + q][pt]))
            .collect()
    }

    /// `h̃^{pq̄}` as the matrix `conj(H)^{-1}`.
    pub fn inverse_at(&self, pt: usize) -> DMatrix<C> {
        self.hermitian_at(pt)
            .map(|z| z.conj())
            .try_inverse()
            .expect("positive Hermitian matrix")
    }
}
