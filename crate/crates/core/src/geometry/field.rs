use nalgebra::DMatrix;

use super::grid::PeriodicGrid;
use super::spectral::Spectrum;
use crate::error::{Error, Result};

/// Default smoothness gate: maximum energy fraction in the top quarter band.
pub const SMOOTHNESS_LIMIT: f64 = 1e-6;

/// Real samples of a function on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64; 4]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of_real(&self.grid, &self.values)
    }

    /// Rejects fields whose top spectral band exceeds `limit` of the energy.
    pub fn check_smooth(&self, limit: f64) -> Result<()> {
        let fraction = self.spectrum().top_band_fraction();
        if fraction > limit {
            Err(Error::UnderResolved { fraction, limit })
        } else {
            Ok(())
        }
    }

    /// Grid quadrature over the unit torus.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index and value of the first minimum.
    pub fn argmin(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc })
    }

    pub fn argmax(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        Self::from_vec(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn shifted(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `∂f/∂x^axis` by Fourier differentiation.
    pub fn derivative(&self, axis: usize) -> Result<Self> {
        self.grid.check_axis(axis)?;
        Ok(Self::from_vec(self.grid, self.spectrum().derivative_real(axis)))
    }
}

/// A `dim x dim` real matrix per grid point, stored component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    grid: PeriodicGrid,
    comps: Vec<Vec<f64>>,
}

impl MatrixField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        let d = grid.real_dim();
        Self {
            grid,
            comps: vec![vec![0.0; grid.len()]; d * d],
        }
    }

    pub fn from_components(grid: PeriodicGrid, comps: Vec<Vec<f64>>) -> Result<Self> {
        let d = grid.real_dim();
        if comps.len() != d * d || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidArgument("component layout mismatch".into()));
        }
        Ok(Self { grid, comps })
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64; 4]) -> DMatrix<f64>) -> Self {
        let mut out = Self::zeros(grid);
        for p in 0..grid.len() {
            let m = f(&grid.point(p));
            out.set(p, &m);
        }
        out
    }

    pub fn constant(grid: PeriodicGrid, m: &DMatrix<f64>) -> Self {
        let d = grid.real_dim();
        let comps = (0..d * d)
            .map(|c| vec![m[(c / d, c % d)]; grid.len()])
            .collect();
        Self { grid, comps }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.real_dim()
    }

    pub fn component(&self, a: usize, b: usize) -> &[f64] {
        &self.comps[a * self.dim() + b]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    pub fn at(&self, p: usize) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |a, b| self.comps[a * d + b][p])
    }

    pub fn set(&mut self, p: usize, m: &DMatrix<f64>) {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                self.comps[a * d + b][p] = m[(a, b)];
            }
        }
    }

    pub fn map_points(&self, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        let mut out = Self::zeros(self.grid);
        for p in 0..self.grid.len() {
            out.set(p, &f(&self.at(p)));
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Smoothness gate applied to every component.
    pub fn check_smooth(&self, limit: f64) -> Result<()> {
        for c in &self.comps {
            let f = ScalarField::from_vec(self.grid, c.clone());
            f.check_smooth(limit)?;
        }
        Ok(())
    }
}

/// Symmetric positive-definite matrix per point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField(MatrixField);

impl MetricField {
    pub fn new(m: MatrixField) -> Result<Self> {
        let d = m.dim();
        for p in 0..m.grid().len() {
            let a = m.at(p);
            let asym = (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .fold(0.0, |acc: f64, (i, j)| acc.max((a[(i, j)] - a[(j, i)]).abs()));
            let scale = a.amax().max(1.0);
            if asym > 1e-10 * scale {
                return Err(Error::InvalidArgument(format!(
                    "metric not symmetric at point {p} (defect {asym:.3e})"
                )));
            }
            let min_eig = min_symmetric_eigenvalue(&a);
            if min_eig <= 0.0 || !min_eig.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    what: "metric",
                    min_eigenvalue: min_eig,
                    point: p,
                });
            }
        }
        Ok(Self(m))
    }

    pub fn euclidean(grid: PeriodicGrid) -> Self {
        Self(MatrixField::constant(grid, &DMatrix::identity(grid.real_dim(), grid.real_dim())))
    }

    pub fn inner(&self) -> &MatrixField {
        &self.0
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.0.grid()
    }

    pub fn at(&self, p: usize) -> DMatrix<f64> {
        self.0.at(p)
    }

    /// Smallest eigenvalue over the whole grid.
    pub fn min_eigenvalue(&self) -> f64 {
        (0..self.grid().len())
            .map(|p| min_symmetric_eigenvalue(&self.at(p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// `det g` per point.
    pub fn determinant(&self) -> ScalarField {
        ScalarField::from_vec(
            *self.grid(),
            (0..self.grid().len()).map(|p| self.at(p).determinant()).collect(),
        )
    }

    /// Riemannian volume density `sqrt(det g)`.
    pub fn volume_density(&self) -> ScalarField {
        self.determinant().map(f64::sqrt)
    }

    /// Pointwise inverse metric.
    pub fn inverse(&self) -> MatrixField {
        self.0
            .map_points(|m| m.clone().try_inverse().expect("metric is invertible"))
    }
}

/// Antisymmetric matrix per point: `ω(X, Y) = X^T ω Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormField(MatrixField);

impl TwoFormField {
    pub fn new(m: MatrixField) -> Result<Self> {
        let d = m.dim();
        for a in 0..d {
            for b in a..d {
                let sym = m
                    .component(a, b)
                    .iter()
                    .zip(m.component(b, a))
                    .fold(0.0, |acc: f64, (x, y)| acc.max((x + y).abs()));
                if sym > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "2-form not antisymmetric in ({a},{b}) (defect {sym:.3e})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    /// The standard symplectic form `Σ dx_k ∧ dy_k`.
    pub fn standard(grid: PeriodicGrid) -> Self {
        Self(MatrixField::constant(grid, &standard_symplectic(grid.real_dim())))
    }

    pub fn inner(&self) -> &MatrixField {
        &self.0
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.0.grid()
    }

    pub fn at(&self, p: usize) -> DMatrix<f64> {
        self.0.at(p)
    }

    pub fn component(&self, a: usize, b: usize) -> &[f64] {
        self.0.component(a, b)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.map_points(|m| m * c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let comps = self
            .0
            .components()
            .iter()
            .zip(other.0.components())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Self(MatrixField::from_components(*self.grid(), comps).expect("same layout"))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }
}

/// A general `2n x 2n` endomorphism per point; column `a` is the image of `∂_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndomorphismField(pub MatrixField);

/// An endomorphism field with `J^2 = -I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostComplexField(MatrixField);

/// Rejection threshold for `max |J^2 + I|` at construction.
pub const ALMOST_COMPLEX_TOL: f64 = 1e-10;

impl AlmostComplexField {
    pub fn new(m: MatrixField) -> Result<Self> {
        let defect = square_defect(&m);
        if defect > ALMOST_COMPLEX_TOL {
            return Err(Error::NotAlmostComplex { defect });
        }
        Ok(Self(m))
    }

    pub fn standard(grid: PeriodicGrid) -> Self {
        Self(MatrixField::constant(grid, &standard_j(grid.real_dim())))
    }

    pub fn inner(&self) -> &MatrixField {
        &self.0
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.0.grid()
    }

    pub fn at(&self, p: usize) -> DMatrix<f64> {
        self.0.at(p)
    }

    pub fn component(&self, a: usize, b: usize) -> &[f64] {
        self.0.component(a, b)
    }

    /// `max |J^2 + I|` over the grid.
    pub fn square_defect(&self) -> f64 {
        square_defect(&self.0)
    }

    pub fn as_endomorphism(&self) -> EndomorphismField {
        EndomorphismField(self.0.clone())
    }
}

fn square_defect(m: &MatrixField) -> f64 {
    let d = m.dim();
    let id = DMatrix::<f64>::identity(d, d);
    (0..m.grid().len())
        .map(|p| {
            let j = m.at(p);
            (&j * &j + &id).amax()
        })
        .fold(0.0, f64::max)
}

/// `J0 ∂x_k = ∂y_k`, `J0 ∂y_k = -∂x_k`.
pub fn standard_j(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// Matrix of `Σ dx_k ∧ dy_k`.
pub fn standard_symplectic(dim: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

pub fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_pair_is_consistent() {
        let j = standard_j(4);
        let w = standard_symplectic(4);
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(&j * &j, -&id);
        // ω(X, Y) = g(JX, Y) with g = I means ω = J^T.
        assert_eq!(w, j.transpose());
    }

    #[test]
    fn metric_rejects_indefinite() {
        let g = PeriodicGrid::new(1, 4).unwrap();
        let m = MatrixField::constant(g, &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert!(matches!(MetricField::new(m), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn almost_complex_rejects_non_square_root() {
        let g = PeriodicGrid::new(1, 4).unwrap();
        let m = MatrixField::constant(g, &DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 1.0, 0.0]));
        assert!(AlmostComplexField::new(m).is_err());
    }

    #[test]
    fn integral_of_oscillation_vanishes() {
        let g = PeriodicGrid::new(1, 16).unwrap();
        let f = ScalarField::from_fn(g, |x| 1.0 + (2.0 * std::f64::consts::PI * x[0]).sin());
        assert!((f.integrate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_rejects_bad_axis() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let f = ScalarField::zeros(g);
        assert!(matches!(f.derivative(2), Err(Error::AxisOutOfRange { .. })));
    }
}
