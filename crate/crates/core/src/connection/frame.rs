//! Pointwise unitary frames of type (1,0) and their dual coframes.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::geometry::{AlmostComplexField, MetricField, PeriodicGrid};

const I: C = C::new(0.0, 1.0);

/// `⟨Z, W⟩ = Zᵀ g W̄`, the Hermitian extension of `g`.
pub fn hermitian_pairing(g: &DMatrix<f64>, z: &[C], w: &[C]) -> C {
    let d = g.nrows();
    let mut s = C::new(0.0, 0.0);
    for a in 0..d {
        for b in 0..d {
            s += z[a] * g[(a, b)] * w[b].conj();
        }
    }
    s
}

/// Unitary (1,0)-frame at one point, as the columns of a `d × n` matrix,
/// together with the dual coframe as the rows of an `n × d` matrix.
///
/// The frame is Gram–Schmidt applied to `½(∂_{2k} − iJ∂_{2k})`.
pub fn frame_at(g: &DMatrix<f64>, j: &DMatrix<f64>) -> Option<(DMatrix<C>, DMatrix<C>)> {
    let d = g.nrows();
    let n = d / 2;
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: Vec<C> = (0..d)
            .map(|a| {
                let delta = if a == 2 * k { 1.0 } else { 0.0 };
                C::new(0.5 * delta, 0.0) - I * 0.5 * j[(a, 2 * k)]
            })
            .collect();
        for prev in &cols {
            let c = hermitian_pairing(g, &v, prev);
            for a in 0..d {
                v[a] -= c * prev[a];
            }
        }
        let norm2 = hermitian_pairing(g, &v, &v).re;
        if !(norm2 > 1e-300) {
            return None;
        }
        let s = norm2.sqrt();
        cols.push(v.into_iter().map(|x| x / s).collect());
    }
    let e = DMatrix::from_fn(d, n, |a, i| cols[i][a]);
    let full = DMatrix::from_fn(d, d, |a, c| {
        if c < n {
            e[(a, c)]
        } else {
            e[(a, c - n)].conj()
        }
    });
    let inv = full.try_inverse()?;
    let theta = inv.rows(0, n).into_owned();
    Some((e, theta))
}

/// Frame and coframe sampled on the grid.
#[derive(Debug, Clone)]
pub struct UnitaryFrame {
    grid: PeriodicGrid,
    /// `e[i * d + a]`: component `a` of `e_i`.
    e: Vec<Vec<C>>,
    /// `theta[i * d + a]`: component `a` of `θ^i`.
    theta: Vec<Vec<C>>,
}

impl UnitaryFrame {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn complex_dim(&self) -> usize {
        self.grid.complex_dim()
    }

    pub fn vector(&self, i: usize, a: usize) -> &[C] {
        &self.e[i * self.grid.real_dim() + a]
    }

    pub fn coframe(&self, i: usize, a: usize) -> &[C] {
        &self.theta[i * self.grid.real_dim() + a]
    }

    /// Frame columns at one point (`d × n`).
    pub fn e_at(&self, p: usize) -> DMatrix<C> {
        let d = self.grid.real_dim();
        DMatrix::from_fn(d, self.complex_dim(), |a, i| self.e[i * d + a][p])
    }

    /// Coframe rows at one point (`n × d`).
    pub fn theta_at(&self, p: usize) -> DMatrix<C> {
        let d = self.grid.real_dim();
        DMatrix::from_fn(self.complex_dim(), d, |i, a| self.theta[i * d + a][p])
    }

    /// `max |g(e_i, ē_j) − δ_ij|`.
    pub fn unitarity_defect(&self, g: &MetricField) -> f64 {
        let n = self.complex_dim();
        let mut worst: f64 = 0.0;
        for p in 0..self.grid.len() {
            let gm = g.at(p);
            let e = self.e_at(p);
            for i in 0..n {
                for j in 0..n {
                    let zi: Vec<C> = e.column(i).iter().copied().collect();
                    let zj: Vec<C> = e.column(j).iter().copied().collect();
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((hermitian_pairing(&gm, &zi, &zj) - want).norm());
                }
            }
        }
        worst
    }

    /// `max |J e_i − i e_i|`.
    pub fn type_defect(&self, j: &AlmostComplexField) -> f64 {
        let mut worst: f64 = 0.0;
        for p in 0..self.grid.len() {
            let jm = j.at(p).map(|v| C::new(v, 0.0));
            let e = self.e_at(p);
            let r = &jm * &e - &e * I;
            worst = worst.max(r.iter().fold(0.0, |m, z| m.max(z.norm())));
        }
        worst
    }
}

/// Gram–Schmidt of the coordinate (1,0)-frame at every grid point.
pub fn build_unitary_frame(g: &MetricField, j: &AlmostComplexField) -> Result<UnitaryFrame> {
    let grid = *g.grid();
    if *j.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let d = grid.real_dim();
    let n = grid.complex_dim();
    let zero = vec![C::new(0.0, 0.0); grid.len()];
    let mut e = vec![zero.clone(); n * d];
    let mut theta = vec![zero; n * d];
    for p in 0..grid.len() {
        let (ep, tp) = frame_at(&g.at(p), &j.at(p)).ok_or(Error::DegenerateFrame { point: p })?;
        for i in 0..n {
            for a in 0..d {
                e[i * d + a][p] = ep[(a, i)];
                theta[i * d + a][p] = tp[(i, a)];
            }
        }
    }
    Ok(UnitaryFrame { grid, e, theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::standard_j;

    #[test]
    fn euclidean_frame_is_standard() {
        let g = DMatrix::identity(4, 4);
        let (e, theta) = frame_at(&g, &standard_j(4)).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((e[(0, 0)] - C::new(s, 0.0)).norm() < 1e-15);
        assert!((e[(1, 0)] - C::new(0.0, -s)).norm() < 1e-15);
        assert!((e[(2, 1)] - C::new(s, 0.0)).norm() < 1e-15);
        // θ^1 = (dx¹ + i dy¹)/√2
        assert!((theta[(0, 0)] - C::new(s, 0.0)).norm() < 1e-15);
        assert!((theta[(0, 1)] - C::new(0.0, s)).norm() < 1e-15);
    }

    #[test]
    fn conformal_metric_scales_frame() {
        let u: f64 = 0.3;
        let g = DMatrix::identity(2, 2) * (2.0 * u).exp();
        let (e, _) = frame_at(&g, &standard_j(2)).unwrap();
        let (e0, _) = frame_at(&DMatrix::identity(2, 2), &standard_j(2)).unwrap();
        assert!((e[(0, 0)] - e0[(0, 0)] * (-u).exp()).norm() < 1e-15);
    }
}
