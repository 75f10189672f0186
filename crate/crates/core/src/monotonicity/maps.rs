//! Maps of the torus to itself: the map Laplacian, energy density and the
//! stationarity identity.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{MetricField, PeriodicGrid, ScalarField, Spectrum};

/// `u(x) = L x + v(x)` with `L` an integer matrix and `v` periodic.
#[derive(Debug, Clone)]
pub struct TorusMap {
    grid: PeriodicGrid,
    linear: DMatrix<f64>,
    displacement: Vec<ScalarField>,
}

impl TorusMap {
    pub fn identity(grid: PeriodicGrid) -> Self {
        let d = grid.real_dim();
        Self {
            grid,
            linear: DMatrix::identity(d, d),
            displacement: vec![ScalarField::zeros(grid); d],
        }
    }

    /// `x + v(x)`: degree one, homotopic to the identity.
    pub fn from_displacement(displacement: Vec<ScalarField>) -> Result<Self> {
        let grid = *displacement
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty displacement".into()))?
            .grid();
        let d = grid.real_dim();
        Self::new(DMatrix::identity(d, d), displacement)
    }

    pub fn new(linear: DMatrix<f64>, displacement: Vec<ScalarField>) -> Result<Self> {
        let grid = *displacement
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty displacement".into()))?
            .grid();
        let d = grid.real_dim();
        if displacement.len() != d || displacement.iter().any(|v| v.grid() != &grid) {
            return Err(Error::GridMismatch);
        }
        if linear.shape() != (d, d) || linear.iter().any(|v| v.fract() != 0.0) {
            return Err(Error::InvalidArgument("linear part must be an integer matrix".into()));
        }
        Ok(Self { grid, linear, displacement })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn is_identity(&self) -> bool {
        let d = self.grid.real_dim();
        self.linear == DMatrix::identity(d, d) && self.displacement.iter().all(|v| v.max_abs() == 0.0)
    }

    /// `∂_a u^i`, component `i * d + a`.
    pub fn jacobian(&self) -> Vec<Vec<f64>> {
        let d = self.grid.real_dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            let spec = self.displacement[i].spectrum();
            for a in 0..d {
                let l = self.linear[(i, a)];
                out.push(spec.derivative_real(a).into_iter().map(|v| v + l).collect());
            }
        }
        out
    }

    /// `∂_a∂_b u^i`, component `(i * d + a) * d + b`.
    pub fn second_derivatives(&self) -> Vec<Vec<f64>> {
        let d = self.grid.real_dim();
        let mut out = Vec::with_capacity(d * d * d);
        for i in 0..d {
            let spec = self.displacement[i].spectrum();
            for a in 0..d {
                for b in 0..d {
                    out.push(spec.second_derivative_real(a, b));
                }
            }
        }
        out
    }

    /// Image of grid point `p`, reduced to the unit cell.
    pub fn image(&self, p: usize) -> [f64; 4] {
        let d = self.grid.real_dim();
        let x = self.grid.point(p);
        let mut y = [0.0; 4];
        for i in 0..d {
            let v = (0..d).map(|a| self.linear[(i, a)] * x[a]).sum::<f64>() + self.displacement[i].values()[p];
            y[i] = v - v.floor();
        }
        y
    }
}

/// Trigonometric interpolants of several fields on one grid, evaluated
/// together.
fn interpolate_many(specs: &[Spectrum], x: &[f64; 4]) -> Vec<f64> {
    let grid = *specs[0].grid();
    let n = grid.resolution();
    let dim = grid.real_dim();
    let factors: Vec<Vec<C>> = (0..dim)
        .map(|a| {
            (0..n)
                .map(|slot| {
                    if grid.is_nyquist(slot) {
                        C::new((PI * n as f64 * x[a]).cos(), 0.0)
                    } else {
                        let k = grid.wavenumber(slot) as f64;
                        C::from_polar(1.0, 2.0 * PI * k * x[a])
                    }
                })
                .collect()
        })
        .collect();
    let mut sums = vec![C::new(0.0, 0.0); specs.len()];
    for flat in 0..grid.len() {
        let m = grid.multi_index(flat);
        let mut f = factors[0][m[0]];
        for a in 1..dim {
            f *= factors[a][m[a]];
        }
        for (s, spec) in sums.iter_mut().zip(specs) {
            *s += spec.coeffs()[flat] * f;
        }
    }
    sums.into_iter().map(|s| s.re / grid.len() as f64).collect()
}

/// A metric and its first derivatives sampled at a set of points.
#[derive(Debug, Clone)]
struct MetricSample {
    g: Vec<DMatrix<f64>>,
    /// `dg[p][e]` is `∂_e g` at point `p`.
    dg: Vec<Vec<DMatrix<f64>>>,
}

impl MetricSample {
    fn on_grid(g: &MetricField) -> Self {
        let grid = *g.grid();
        let d = grid.real_dim();
        let derivs: Vec<Vec<Vec<f64>>> = (0..d * d)
            .map(|ab| {
                let spec = Spectrum::of_real(&grid, &g.inner().components()[ab]);
                (0..d).map(|e| spec.derivative_real(e)).collect()
            })
            .collect();
        let g_at = (0..grid.len()).map(|p| g.at(p)).collect();
        let dg = (0..grid.len())
            .map(|p| (0..d).map(|e| DMatrix::from_fn(d, d, |a, b| derivs[a * d + b][e][p])).collect())
            .collect();
        Self { g: g_at, dg }
    }

    /// `g` and `∂g` evaluated at `u(x)` for every grid point `x`.
    fn along(g: &MetricField, u: &TorusMap) -> Self {
        if u.is_identity() {
            return Self::on_grid(g);
        }
        let grid = *g.grid();
        let d = grid.real_dim();
        let mut specs = Vec::with_capacity(d * d * (d + 1));
        for ab in 0..d * d {
            let spec = Spectrum::of_real(&grid, &g.inner().components()[ab]);
            for e in 0..d {
                specs.push(Spectrum::of_real(&grid, &spec.derivative_real(e)));
            }
            specs.push(spec);
        }
        let mut out = Self { g: Vec::with_capacity(grid.len()), dg: Vec::with_capacity(grid.len()) };
        for p in 0..grid.len() {
            let v = interpolate_many(&specs, &u.image(p));
            let at = |ab: usize, slot: usize| v[ab * (d + 1) + slot];
            out.g.push(DMatrix::from_fn(d, d, |a, b| at(a * d + b, d)));
            out.dg.push((0..d).map(|e| DMatrix::from_fn(d, d, |a, b| at(a * d + b, e))).collect());
        }
        out
    }

    /// `Γ^c_{ab}` at point `p`, index `(c * d + a) * d + b`.
    fn christoffel(&self, p: usize) -> Vec<f64> {
        let d = self.g[p].nrows();
        let inv = self.g[p].clone().try_inverse().expect("metric is invertible");
        let dg = &self.dg[p];
        let mut out = vec![0.0; d * d * d];
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    out[(c * d + a) * d + b] = 0.5
                        * (0..d)
                            .map(|e| inv[(c, e)] * (dg[a][(e, b)] + dg[b][(e, a)] - dg[e][(a, b)]))
                            .sum::<f64>();
                }
            }
        }
        out
    }
}

/// Levi-Civita symbols of a metric on the grid, index `(c * d + a) * d + b`
/// per point.
pub fn christoffel_symbols(g: &MetricField) -> Vec<Vec<f64>> {
    let s = MetricSample::on_grid(g);
    (0..g.grid().len()).map(|p| s.christoffel(p)).collect()
}

fn check_grids(u: &TorusMap, g: &MetricField, g_tilde: &MetricField) -> Result<()> {
    if u.grid() != g.grid() || g.grid() != g_tilde.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `(Δu)ⁱ = g^{αβ}∂_α∂_β uⁱ − g^{αβ}Γ^γ_{αβ}∂_γ uⁱ + g^{αβ}Γ̃ⁱ_{jk}(u)∂_α u^j ∂_β u^k`.
pub fn map_laplacian(u: &TorusMap, g: &MetricField, g_tilde: &MetricField) -> Result<Vec<ScalarField>> {
    check_grids(u, g, g_tilde)?;
    let grid = *g.grid();
    let d = grid.real_dim();
    let jac = u.jacobian();
    let hess = u.second_derivatives();
    let dom = MetricSample::on_grid(g);
    let tgt = MetricSample::along(g_tilde, u);
    let mut out = vec![vec![0.0; grid.len()]; d];
    for p in 0..grid.len() {
        let ginv = dom.g[p].clone().try_inverse().expect("metric is invertible");
        let gam = dom.christoffel(p);
        let gam_t = tgt.christoffel(p);
        for i in 0..d {
            let mut v = 0.0;
            for a in 0..d {
                for b in 0..d {
                    let w = ginv[(a, b)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut t = hess[(i * d + a) * d + b][p];
                    for c in 0..d {
                        t -= gam[(c * d + a) * d + b] * jac[i * d + c][p];
                    }
                    for j in 0..d {
                        for k in 0..d {
                            t += gam_t[(i * d + j) * d + k] * jac[j * d + a][p] * jac[k * d + b][p];
                        }
                    }
                    v += w * t;
                }
            }
            out[i][p] = v;
        }
    }
    out.into_iter().map(|v| ScalarField::new(grid, v)).collect()
}

/// `e(u) = g^{ij} ∂_i u^k ∂_j u^l g̃_{kl}(u)`.
pub fn energy_density(u: &TorusMap, g: &MetricField, g_tilde: &MetricField) -> Result<ScalarField> {
    check_grids(u, g, g_tilde)?;
    let grid = *g.grid();
    let d = grid.real_dim();
    let jac = u.jacobian();
    let tgt = MetricSample::along(g_tilde, u);
    let vals = (0..grid.len())
        .map(|p| {
            let ginv = g.at(p).try_inverse().expect("metric is invertible");
            let du = DMatrix::from_fn(d, d, |k, i| jac[k * d + i][p]);
            // (du^T g̃ du)_{ij} contracted with g^{ij}
            let pull = du.transpose() * &tgt.g[p] * du;
            ginv.component_mul(&pull).sum()
        })
        .collect();
    ScalarField::new(grid, vals)
}

/// The two sides of the stationarity identity
/// `½∫div ξ e(u) − ∫g^{ij} ξ^k_{;i} ∂_k u^l ∂_j u^p g̃_{lp} = ∫(Δu)ⁱ ξ^j ∂_j u^k g̃_{ik}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaritySides {
    pub lhs: f64,
    pub rhs: f64,
}

impl StationaritySides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn stationarity_sides(u: &TorusMap, xi: &[ScalarField], g: &MetricField, g_tilde: &MetricField) -> Result<StationaritySides> {
    check_grids(u, g, g_tilde)?;
    let grid = *g.grid();
    let d = grid.real_dim();
    if xi.len() != d || xi.iter().any(|v| v.grid() != &grid) {
        return Err(Error::GridMismatch);
    }
    let jac = u.jacobian();
    let lap_u = map_laplacian(u, g, g_tilde)?;
    let energy = energy_density(u, g, g_tilde)?;
    let dom = MetricSample::on_grid(g);
    let tgt = MetricSample::along(g_tilde, u);
    // ∂_i ξ^k, index k * d + i
    let dxi: Vec<Vec<f64>> = xi
        .iter()
        .flat_map(|f| {
            let spec = f.spectrum();
            (0..d).map(move |i| spec.derivative_real(i))
        })
        .collect();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for p in 0..grid.len() {
        let gp = &dom.g[p];
        let vol = gp.determinant().sqrt();
        let ginv = gp.clone().try_inverse().expect("metric is invertible");
        let gam = dom.christoffel(p);
        let cov = DMatrix::from_fn(d, d, |k, i| {
            dxi[k * d + i][p] + (0..d).map(|j| gam[(k * d + i) * d + j] * xi[j].values()[p]).sum::<f64>()
        });
        let div = cov.trace();
        let du = DMatrix::from_fn(d, d, |k, i| jac[k * d + i][p]);
        let pull = du.transpose() * &tgt.g[p] * &du;
        // g^{ij} ξ^k_{;i} (u*g̃)_{kj}
        let mut stress = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    stress += ginv[(i, j)] * cov[(k, i)] * pull[(k, j)];
                }
            }
        }
        lhs += (0.5 * div * energy.values()[p] - stress) * vol;
        let tau: Vec<f64> = (0..d).map(|i| lap_u[i].values()[p]).collect();
        let mut r = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    r += tau[i] * xi[j].values()[p] * du[(k, j)] * tgt.g[p][(i, k)];
                }
            }
        }
        rhs += r * vol;
    }
    let cell = grid.cell_volume();
    Ok(StationaritySides { lhs: lhs * cell, rhs: rhs * cell })
}

pub fn stationarity_residual(u: &TorusMap, xi: &[ScalarField], g: &MetricField, g_tilde: &MetricField) -> Result<f64> {
    Ok(stationarity_sides(u, xi, g, g_tilde)?.residual())
}

/// The error integral `∫(ΔI)ⁱ ξ^k g̃_{ik} dV_g` and `sup |ΔI|_g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityErrorTerm {
    pub integral: f64,
    pub sup_norm: f64,
}

pub fn identity_error_term(xi: &[ScalarField], g: &MetricField, g_tilde: &MetricField) -> Result<IdentityErrorTerm> {
    let grid = *g.grid();
    let d = grid.real_dim();
    let tau = map_laplacian(&TorusMap::identity(grid), g, g_tilde)?;
    if xi.len() != d {
        return Err(Error::GridMismatch);
    }
    let mut integral = 0.0;
    let mut sup: f64 = 0.0;
    for p in 0..grid.len() {
        let gp = g.at(p);
        let gt = g_tilde.at(p);
        let t: Vec<f64> = (0..d).map(|i| tau[i].values()[p]).collect();
        let mut s = 0.0;
        let mut n2 = 0.0;
        for i in 0..d {
            for k in 0..d {
                s += t[i] * xi[k].values()[p] * gt[(i, k)];
                n2 += t[i] * t[k] * gp[(i, k)];
            }
        }
        integral += s * gp.determinant().sqrt();
        sup = sup.max(n2.sqrt());
    }
    Ok(IdentityErrorTerm { integral: integral * grid.cell_volume(), sup_norm: sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MatrixField;
    use PI;

    #[test]
    fn identity_energy_of_scaled_metric() {
        let grid = PeriodicGrid::new(2, 4).unwrap();
        let g = MetricField::euclidean(grid);
        let gt = MetricField::new(MatrixField::constant(grid, &(DMatrix::identity(4, 4) * 1.5))).unwrap();
        let e = energy_density(&TorusMap::identity(grid), &g, &gt).unwrap();
        assert!((e.max() - 6.0).abs() < 1e-14 && (e.min() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn linear_map_between_flat_tori_is_harmonic() {
        let grid = PeriodicGrid::new(1, 8).unwrap();
        let shear = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let u = TorusMap::new(shear, vec![ScalarField::zeros(grid); 2]).unwrap();
        let g = MetricField::euclidean(grid);
        let lap = map_laplacian(&u, &g, &g).unwrap();
        assert!(lap.iter().all(|c| c.max_abs() < 1e-12));
        assert!(TorusMap::new(DMatrix::identity(2, 2) * 0.5, vec![ScalarField::zeros(grid); 2]).is_err());
    }

    #[test]
    fn conformal_identity_laplacian() {
        // g̃ = e^{2w} δ: g^{ab}Γ̃ⁱ_{ab} = (2 − 2n) ∂_i w, zero for n = 1
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let w = ScalarField::from_fn(grid, |x| 0.1 * (2.0 * PI * x[1]).sin());
        let gt = MetricField::new(MatrixField::from_fn(grid, |x| {
            DMatrix::identity(4, 4) * (0.2 * (2.0 * PI * x[1]).sin()).exp()
        }))
        .unwrap();
        let lap = map_laplacian(&TorusMap::identity(grid), &MetricField::euclidean(grid), &gt).unwrap();
        let dw = w.derivative(1).unwrap();
        assert!(lap[1].max_abs_diff(&dw.scaled(-2.0)) < 1e-10);
        assert!(lap[0].max_abs() < 1e-12);
    }
}
