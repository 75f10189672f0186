//! Real differential forms on the torus in the coordinate basis
//! `dx^{i1} ∧ … ∧ dx^{ik}`, `i1 < … < ik`.

use super::field::{MatrixField, ScalarField, TwoFormField};
use super::grid::PeriodicGrid;
use super::spectral::Spectrum;
use crate::error::{Error, Result};

/// Increasing index sets of size `k` in `0..dim`, encoded as bitmasks, in
/// lexicographic order of their sorted tuples.
pub fn index_sets(dim: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, dim: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..dim {
            rec(i + 1, dim, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, 0, &mut out);
    out
}

/// Sign of `dx^I ∧ dx^J` relative to `dx^{I ∪ J}`, or `None` when they overlap.
fn merge_sign(i: u32, j: u32) -> Option<f64> {
    if i & j != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for a in 0..32 {
        if i & (1 << a) != 0 {
            // count elements of J below a
            inversions += (j & ((1u32 << a) - 1)).count_ones();
        }
    }
    Some(if inversions % 2 == 0 { 1.0 } else { -1.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    grid: PeriodicGrid,
    degree: usize,
    sets: Vec<u32>,
    comps: Vec<Vec<f64>>,
}

impl FormField {
    pub fn zero(grid: PeriodicGrid, degree: usize) -> Result<Self> {
        if degree > grid.real_dim() {
            return Err(Error::DegreeOverflow(degree));
        }
        let sets = index_sets(grid.real_dim(), degree);
        let comps = vec![vec![0.0; grid.len()]; sets.len()];
        Ok(Self {
            grid,
            degree,
            sets,
            comps,
        })
    }

    pub fn from_scalar(f: &ScalarField) -> Self {
        let mut out = Self::zero(*f.grid(), 0).expect("degree 0");
        out.comps[0] = f.values().to_vec();
        out
    }

    /// 1-form `Σ α_a dx^a` from its components.
    pub fn one_form(grid: PeriodicGrid, comps: Vec<Vec<f64>>) -> Result<Self> {
        if comps.len() != grid.real_dim() {
            return Err(Error::InvalidArgument("1-form needs one component per axis".into()));
        }
        let mut out = Self::zero(grid, 1)?;
        out.comps = comps;
        Ok(out)
    }

    /// Constant coordinate 1-form `dx^axis`.
    pub fn coordinate(grid: PeriodicGrid, axis: usize) -> Result<Self> {
        grid.check_axis(axis)?;
        let mut out = Self::zero(grid, 1)?;
        out.comps[axis] = vec![1.0; grid.len()];
        Ok(out)
    }

    pub fn from_two_form(w: &TwoFormField) -> Self {
        let grid = *w.grid();
        let mut out = Self::zero(grid, 2).expect("degree 2");
        for (slot, &set) in out.sets.clone().iter().enumerate() {
            let (a, b) = pair(set);
            out.comps[slot] = w.component(a, b).to_vec();
        }
        out
    }

    pub fn to_two_form(&self) -> Result<TwoFormField> {
        if self.degree != 2 {
            return Err(Error::InvalidArgument("not a 2-form".into()));
        }
        let d = self.grid.real_dim();
        let mut comps = vec![vec![0.0; self.grid.len()]; d * d];
        for (slot, &set) in self.sets.iter().enumerate() {
            let (a, b) = pair(set);
            comps[a * d + b] = self.comps[slot].clone();
            comps[b * d + a] = self.comps[slot].iter().map(|v| -v).collect();
        }
        TwoFormField::new(MatrixField::from_components(self.grid, comps)?)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component along the increasing index tuple `indices`.
    pub fn component(&self, indices: &[usize]) -> Option<&[f64]> {
        let mask = indices.iter().fold(0u32, |m, &i| m | (1 << i));
        self.sets
            .iter()
            .position(|&s| s == mask)
            .map(|slot| self.comps[slot].as_slice())
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for comp in &mut out.comps {
            for v in comp.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.grid != other.grid {
            return Err(Error::InvalidArgument("adding forms of different type".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(out)
    }

    /// Exterior derivative with spectral partial derivatives.
    pub fn exterior_derivative(&self) -> Result<Self> {
        let dim = self.grid.real_dim();
        let mut out = Self::zero(self.grid, self.degree + 1)?;
        for (slot, &set) in self.sets.iter().enumerate() {
            let spec = Spectrum::of_real(&self.grid, &self.comps[slot]);
            for a in 0..dim {
                if set & (1 << a) != 0 {
                    continue;
                }
                let sign = merge_sign(1 << a, set).expect("disjoint");
                let target = out.slot(set | (1 << a));
                let da = spec.derivative_real(a);
                for (o, v) in out.comps[target].iter_mut().zip(da) {
                    *o += sign * v;
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = Self::zero(self.grid, self.degree + other.degree)?;
        for (si, &i) in self.sets.iter().enumerate() {
            for (sj, &j) in other.sets.iter().enumerate() {
                if let Some(sign) = merge_sign(i, j) {
                    let target = out.slot(i | j);
                    let (a, b) = (&self.comps[si], &other.comps[sj]);
                    for p in 0..self.grid.len() {
                        out.comps[target][p] += sign * a[p] * b[p];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ∧ … ∧ self` (`k` factors); `k = 0` gives the constant 1.
    pub fn power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::from_scalar(&ScalarField::constant(self.grid, 1.0));
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Coefficient of `dx^1 ∧ … ∧ dx^{2n}` for a top-degree form.
    pub fn top_density(&self) -> Result<ScalarField> {
        if self.degree != self.grid.real_dim() {
            return Err(Error::InvalidArgument(format!(
                "degree {} is not top degree {}",
                self.degree,
                self.grid.real_dim()
            )));
        }
        Ok(ScalarField::from_vec(self.grid, self.comps[0].clone()))
    }

    /// Integral of a top-degree form over the torus.
    pub fn integrate_top(&self) -> Result<f64> {
        Ok(self.top_density()?.integrate())
    }

    fn slot(&self, set: u32) -> usize {
        self.sets.iter().position(|&s| s == set).expect("index set present")
    }
}

fn pair(set: u32) -> (usize, usize) {
    let a = set.trailing_zeros() as usize;
    let b = (set & !(1 << a)).trailing_zeros() as usize;
    (a, b)
}

/// `∫ f · density dV` with the grid quadrature; `density = None` means `dV`.
pub fn integrate(f: &ScalarField, density: Option<&ScalarField>) -> f64 {
    match density {
        None => f.integrate(),
        Some(w) => f.zip_map(w, |a, b| a * b).integrate(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn index_sets_counts() {
        assert_eq!(index_sets(4, 2).len(), 6);
        assert_eq!(index_sets(4, 4), vec![0b1111]);
        assert_eq!(index_sets(2, 1), vec![1, 2]);
    }

    #[test]
    fn d_of_coordinate_form_vanishes() {
        let g = PeriodicGrid::new(2, 4).unwrap();
        let dx = FormField::coordinate(g, 0).unwrap();
        assert_eq!(dx.exterior_derivative().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn standard_symplectic_volume() {
        let g = PeriodicGrid::new(2, 4).unwrap();
        let w = FormField::from_two_form(&TwoFormField::standard(g));
        let top = w.power(2).unwrap();
        assert!((top.integrate_top().unwrap() / 2.0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degree_overflow() {
        let g = PeriodicGrid::new(1, 4).unwrap();
        let w = FormField::from_two_form(&TwoFormField::standard(g));
        assert!(matches!(w.exterior_derivative(), Err(Error::DegreeOverflow(3))));
        assert!(w.wedge(&FormField::coordinate(g, 0).unwrap()).is_err());
    }

    #[test]
    fn d_squared_vanishes_on_smooth_one_form() {
        let g = PeriodicGrid::new(2, 8).unwrap();
        let comps = (0..4)
            .map(|a| {
                ScalarField::from_fn(g, |x| {
                    (2.0 * PI * (x[0] + a as f64 * x[1])).sin() * (2.0 * PI * x[(a + 2) % 4]).cos()
                })
                .into_values()
            })
            .collect();
        let alpha = FormField::one_form(g, comps).unwrap();
        let dd = alpha.exterior_derivative().unwrap().exterior_derivative().unwrap();
        assert!(dd.max_abs() < 1e-10);
    }

    #[test]
    fn two_form_round_trip() {
        let g = PeriodicGrid::new(2, 4).unwrap();
        let w = TwoFormField::standard(g);
        let back = FormField::from_two_form(&w).to_two_form().unwrap();
        assert_eq!(back, w);
    }
}
