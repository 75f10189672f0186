//! Single-chart evaluation path: curvature of an analytically given
//! structure at one point, with derivatives by nested high-order central
//! differences instead of the periodic spectral calculus.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use super::algebra::{connection_at, curvature_at, modified_at, torsion_at, PointGamma};
use super::frame::frame_at;
use crate::error::{Error, Result};
use crate::geometry::field::standard_j;

/// Eighth-order central difference weights for offsets 1..=4.
const STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// A metric and almost complex structure given as functions on a chart.
pub trait ChartStructure {
    fn real_dim(&self) -> usize;
    fn metric(&self, x: &[f64]) -> DMatrix<f64>;
    fn complex_structure(&self, x: &[f64]) -> DMatrix<f64>;
}

/// Fubini–Study metric of `CPⁿ` in the affine chart, `h = ∂∂̄ log(1 + |z|²)`,
/// with real metric `g = 2 Re h` so that `g(∂_i, ∂_j̄) = h_{ij̄}`.
#[derive(Debug, Clone, Copy)]
pub struct FubiniStudyChart {
    pub complex_dim: usize,
}

impl ChartStructure for FubiniStudyChart {
    fn real_dim(&self) -> usize {
        2 * self.complex_dim
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.complex_dim;
        let z: Vec<C> = (0..n).map(|k| C::new(x[2 * k], x[2 * k + 1])).collect();
        let s = 1.0 + z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let h = |j: usize, k: usize| -> C {
            let delta = if j == k { 1.0 / s } else { 0.0 };
            C::new(delta, 0.0) - z[j].conj() * z[k] / (s * s)
        };
        // complex coordinates of the real basis vectors ∂x_k, ∂y_k
        let coord = |a: usize| -> (usize, C) {
            if a % 2 == 0 {
                (a / 2, C::new(1.0, 0.0))
            } else {
                (a / 2, C::new(0.0, 1.0))
            }
        };
        DMatrix::from_fn(2 * n, 2 * n, |a, b| {
            let (j, ca) = coord(a);
            let (k, cb) = coord(b);
            2.0 * (h(j, k) * ca * cb.conj()).re
        })
    }

    fn complex_structure(&self, _x: &[f64]) -> DMatrix<f64> {
        standard_j(2 * self.complex_dim)
    }
}

/// A chart structure from two closures.
pub struct FnChart<G, J> {
    pub dim: usize,
    pub metric: G,
    pub j: J,
}

impl<G, J> ChartStructure for FnChart<G, J>
where
    G: Fn(&[f64]) -> DMatrix<f64>,
    J: Fn(&[f64]) -> DMatrix<f64>,
{
    fn real_dim(&self) -> usize {
        self.dim
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        (self.metric)(x)
    }

    fn complex_structure(&self, x: &[f64]) -> DMatrix<f64> {
        (self.j)(x)
    }
}

/// Everything the structure equations produce at one chart point.
#[derive(Debug, Clone)]
pub struct PointCurvature {
    pub e: DMatrix<C>,
    pub theta: DMatrix<C>,
    pub gamma: PointGamma,
    pub torsion: Vec<DMatrix<C>>,
    /// `Ψ^i_j`, index `i * n + j`.
    pub psi: Vec<DMatrix<C>>,
    /// `R_{ij̄kl̄}`, index `((i * n + j) * n + k) * n + l`.
    pub modified: Vec<C>,
}

fn shifted(x: &[f64], axis: usize, t: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[axis] += t;
    y
}

/// Central-difference derivative of a vector-valued function along `axis`.
fn fd(f: &dyn Fn(&[f64]) -> Result<Vec<C>>, x: &[f64], axis: usize, h: f64) -> Result<Vec<C>> {
    let mut acc: Option<Vec<C>> = None;
    for (m, w) in STENCIL.iter().enumerate() {
        let t = (m + 1) as f64 * h;
        let plus = f(&shifted(x, axis, t))?;
        let minus = f(&shifted(x, axis, -t))?;
        let acc = acc.get_or_insert_with(|| vec![C::new(0.0, 0.0); plus.len()]);
        for ((a, p), q) in acc.iter_mut().zip(&plus).zip(&minus) {
            *a += (p - q) * (*w / h);
        }
    }
    Ok(acc.unwrap_or_default())
}

/// Exterior derivative of `count` 1-forms stored `[f * d + a]`.
fn d_forms(
    f: &dyn Fn(&[f64]) -> Result<Vec<C>>,
    x: &[f64],
    d: usize,
    h: f64,
) -> Result<Vec<DMatrix<C>>> {
    let partials: Vec<Vec<C>> = (0..d).map(|b| fd(f, x, b, h)).collect::<Result<_>>()?;
    let count = partials[0].len() / d;
    Ok((0..count)
        .map(|k| {
            DMatrix::from_fn(d, d, |a, b| partials[a][k * d + b] - partials[b][k * d + a])
        })
        .collect())
}

fn frame(chart: &dyn ChartStructure, x: &[f64]) -> Result<(DMatrix<C>, DMatrix<C>)> {
    frame_at(&chart.metric(x), &chart.complex_structure(x)).ok_or(Error::DegenerateFrame { point: 0 })
}

fn theta_flat(chart: &dyn ChartStructure, x: &[f64]) -> Result<Vec<C>> {
    let (_, th) = frame(chart, x)?;
    let (n, d) = th.shape();
    Ok((0..n * d).map(|k| th[(k / d, k % d)]).collect())
}

fn gamma_at(chart: &dyn ChartStructure, x: &[f64], h: f64) -> Result<(PointGamma, Vec<DMatrix<C>>)> {
    let d = chart.real_dim();
    let (e, th) = frame(chart, x)?;
    let dtheta = d_forms(&|y| theta_flat(chart, y), x, d, h)?;
    Ok((connection_at(&e, &th, &dtheta), dtheta))
}

/// Frame, canonical connection, torsion, curvature and modified curvature
/// at `x`, using step `h` for both levels of differencing.
pub fn chart_curvature(chart: &dyn ChartStructure, x: &[f64], h: f64) -> Result<PointCurvature> {
    let d = chart.real_dim();
    let n = d / 2;
    let (e, theta) = frame(chart, x)?;
    let (gamma, dtheta) = gamma_at(chart, x, h)?;
    let dgamma = d_forms(&|y| gamma_at(chart, y, h).map(|g| g.0), x, d, h)?;
    let torsion = torsion_at(&theta, &dtheta, &gamma);
    let psi = curvature_at(&gamma, &dgamma, n);
    let modified = modified_at(&psi, &torsion, &e);
    Ok(PointCurvature {
        e,
        theta,
        gamma,
        torsion,
        psi,
        modified,
    })
}
