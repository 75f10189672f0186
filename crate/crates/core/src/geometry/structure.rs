//! Pointwise algebra relating 2-forms, almost complex structures and metrics.
//!
//! Matrix conventions: `J` has columns `J ∂_a`; a 2-form `ω` is the
//! antisymmetric matrix with `ω(X, Y) = X^T ω Y`; a metric likewise. Then
//! `ω(X, JY) = X^T ω J Y`.

use nalgebra::DMatrix;

use super::field::{
    min_symmetric_eigenvalue, AlmostComplexField, MatrixField, MetricField, ScalarField,
    TwoFormField,
};
use super::grid::PeriodicGrid;
use super::spectral::Spectrum;
use crate::error::{Error, Result};

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `g(X, Y) = ½(ω(X, JY) + ω(Y, JX))`, rejecting pairs that fail to tame.
pub fn metric_from_pair(omega: &TwoFormField, j: &AlmostComplexField) -> Result<MetricField> {
    let grid = *omega.grid();
    let mut out = MatrixField::zeros(grid);
    for p in 0..grid.len() {
        let g = sym(&(omega.at(p) * j.at(p)));
        let margin = min_symmetric_eigenvalue(&g);
        if margin <= 0.0 {
            return Err(Error::TamingViolation { margin, point: p });
        }
        out.set(p, &g);
    }
    MetricField::new(out)
}

/// Minimum over the grid of the smallest eigenvalue of the symmetric part of
/// `Ω(·, J·)`; positive exactly when `Ω` tames `J`.
pub fn taming_margin(omega: &TwoFormField, j: &AlmostComplexField) -> f64 {
    (0..omega.grid().len())
        .map(|p| min_symmetric_eigenvalue(&(omega.at(p) * j.at(p))))
        .fold(f64::INFINITY, f64::min)
}

/// `max |ω(J·, J·) − ω(·, ·)|`.
pub fn compatibility_defect(omega: &TwoFormField, j: &AlmostComplexField) -> f64 {
    (0..omega.grid().len())
        .map(|p| {
            let jm = j.at(p);
            let w = omega.at(p);
            (jm.transpose() * &w * &jm - w).amax()
        })
        .fold(0.0, f64::max)
}

/// J-invariant part `½(Ω + Ω(J·, J·))`.
pub fn one_one_part(omega: &TwoFormField, j: &AlmostComplexField) -> TwoFormField {
    let grid = *omega.grid();
    let mut out = MatrixField::zeros(grid);
    for p in 0..grid.len() {
        let jm = j.at(p);
        let w = omega.at(p);
        out.set(p, &((&w + jm.transpose() * &w * &jm) * 0.5));
    }
    TwoFormField::new(out).expect("J-average of a 2-form is antisymmetric")
}

/// The Nijenhuis tensor `N^k_{ij}` of the coordinate fields `∂_i, ∂_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct NijenhuisField {
    grid: PeriodicGrid,
    comps: Vec<Vec<f64>>,
}

impl NijenhuisField {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Samples of `N^k_{ij}`.
    pub fn component(&self, k: usize, i: usize, j: usize) -> &[f64] {
        let d = self.grid.real_dim();
        &self.comps[(k * d + i) * d + j]
    }

    /// `N(∂_i, ∂_j)` at a point as a vector.
    pub fn vector_at(&self, p: usize, i: usize, j: usize) -> Vec<f64> {
        (0..self.grid.real_dim())
            .map(|k| self.component(k, i, j)[p])
            .collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]` on coordinate fields,
/// assembled from spectral derivatives of the components of `J`:
/// `N^k_{ij} = J^m_i ∂_m J^k_j − J^m_j ∂_m J^k_i + J^k_m (∂_j J^m_i − ∂_i J^m_j)`.
pub fn nijenhuis(j: &AlmostComplexField) -> NijenhuisField {
    let grid = *j.grid();
    let d = grid.real_dim();
    let n = grid.len();
    // dj[(m, r, c)] = ∂_m J^r_c
    let mut dj = vec![Vec::new(); d * d * d];
    for r in 0..d {
        for c in 0..d {
            let spec = Spectrum::of_real(&grid, j.component(r, c));
            for m in 0..d {
                dj[(m * d + r) * d + c] = spec.derivative_real(m);
            }
        }
    }
    let jc = |r: usize, c: usize, p: usize| j.component(r, c)[p];
    let djc = |m: usize, r: usize, c: usize, p: usize| dj[(m * d + r) * d + c][p];
    let mut comps = vec![vec![0.0; n]; d * d * d];
    for k in 0..d {
        for a in 0..d {
            for b in 0..d {
                let out = &mut comps[(k * d + a) * d + b];
                for (p, o) in out.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += jc(m, a, p) * djc(m, k, b, p) - jc(m, b, p) * djc(m, k, a, p);
                        s += jc(k, m, p) * (djc(b, m, a, p) - djc(a, m, b, p));
                    }
                    *o = s;
                }
            }
        }
    }
    NijenhuisField { grid, comps }
}

/// Real-index traces `(tr_g g̃, tr_g̃ g) = (g^{αβ} g̃_{αβ}, g̃^{αβ} g_{αβ})`.
pub fn traces(g: &MetricField, g_tilde: &MetricField) -> Result<(ScalarField, ScalarField)> {
    if g.grid() != g_tilde.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *g.grid();
    let mut fwd = Vec::with_capacity(grid.len());
    let mut back = Vec::with_capacity(grid.len());
    for p in 0..grid.len() {
        let a = g.at(p);
        let b = g_tilde.at(p);
        let ai = a.clone().try_inverse().ok_or(Error::NotPositiveDefinite {
            what: "metric",
            min_eigenvalue: 0.0,
            point: p,
        })?;
        let bi = b.clone().try_inverse().ok_or(Error::NotPositiveDefinite {
            what: "metric",
            min_eigenvalue: 0.0,
            point: p,
        })?;
        fwd.push((ai * &b).trace());
        back.push((bi * &a).trace());
    }
    Ok((
        ScalarField::new(grid, fwd)?,
        ScalarField::new(grid, back)?,
    ))
}

/// The 2-form `ω(X, Y) = g(JX, Y)` of an almost-Hermitian pair.
pub fn form_from_metric(g: &MetricField, j: &AlmostComplexField) -> TwoFormField {
    let grid = *g.grid();
    let mut out = MatrixField::zeros(grid);
    for p in 0..grid.len() {
        let w = j.at(p).transpose() * g.at(p);
        out.set(p, &((&w - w.transpose()) * 0.5));
    }
    TwoFormField::new(out).expect("antisymmetrized")
}

/// `max |g(J·, J·) − g|`.
pub fn hermitian_defect(g: &MetricField, j: &AlmostComplexField) -> f64 {
    (0..g.grid().len())
        .map(|p| {
            let jm = j.at(p);
            let gm = g.at(p);
            (jm.transpose() * &gm * &jm - gm).amax()
        })
        .fold(0.0, f64::max)
}


/// `i∂∂̄φ` for the standard complex structure, as a real 2-form:
/// the matrix `−½(H J0 − (H J0)^T)` with `H` the spectral Hessian of `φ`.
pub fn i_ddbar(phi: &ScalarField) -> TwoFormField {
    let grid = *phi.grid();
    let d = grid.real_dim();
    let hess = hessian(phi);
    let j0 = super::field::standard_j(d);
    let mut out = MatrixField::zeros(grid);
    for p in 0..grid.len() {
        let h = DMatrix::from_fn(d, d, |a, b| hess[a * d + b][p]);
        let hj = h * &j0;
        out.set(p, &((&hj - hj.transpose()) * -0.5));
    }
    TwoFormField::new(out).expect("antisymmetrized")
}

/// All second partials `∂_a ∂_b φ`, component `a * d + b`.
pub fn hessian(phi: &ScalarField) -> Vec<Vec<f64>> {
    let grid = *phi.grid();
    let d = grid.real_dim();
    let spec = phi.spectrum();
    let mut out = vec![Vec::new(); d * d];
    for a in 0..d {
        for b in a..d {
            let v = spec.second_derivative_real(a, b);
            if a != b {
                out[b * d + a] = v.clone();
            }
            out[a * d + b] = v;
        }
    }
    out
}
