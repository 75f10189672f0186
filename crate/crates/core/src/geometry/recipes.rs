//! Named catalog of test structures: almost complex structures, symplectic
//! forms and density exponents.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::field::{
    standard_j, standard_symplectic, AlmostComplexField, MatrixField, ScalarField, TwoFormField,
    SMOOTHNESS_LIMIT,
};
use super::grid::PeriodicGrid;
use super::structure::i_ddbar;
use crate::error::{Error, Result};

/// Almost complex structure recipes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JRecipe {
    Standard,
    /// `A J0 A^{-1}` for a fixed non-symplectic constant matrix `A`.
    ConstantNonstandard,
    /// `P J0 P^{-1}` with `P(x)` a position-dependent symplectic squeeze.
    Twisted { amplitude: f64 },
}

/// Reference amplitude of the twisted structure.
pub const TWISTED_REFERENCE_AMPLITUDE: f64 = 0.1;

impl JRecipe {
    pub fn matrix_at(&self, dim: usize, x: &[f64; 4]) -> DMatrix<f64> {
        let j0 = standard_j(dim);
        match *self {
            JRecipe::Standard => j0,
            JRecipe::ConstantNonstandard => {
                let a = nonstandard_basis(dim);
                let ai = a.clone().try_inverse().expect("invertible");
                a * j0 * ai
            }
            JRecipe::Twisted { amplitude } => {
                let p = squeeze(dim, x, amplitude);
                let pi = squeeze(dim, x, -amplitude);
                p * j0 * pi
            }
        }
    }

    pub fn build(&self, grid: PeriodicGrid) -> Result<AlmostComplexField> {
        let dim = grid.real_dim();
        let m = MatrixField::from_fn(grid, |x| self.matrix_at(dim, x));
        m.check_smooth(SMOOTHNESS_LIMIT)?;
        AlmostComplexField::new(m)
    }

    pub fn is_integrable(&self, dim: usize) -> bool {
        !matches!(self, JRecipe::Twisted { .. }) || dim == 2
    }
}

fn nonstandard_basis(dim: usize) -> DMatrix<f64> {
    if dim == 2 {
        DMatrix::from_row_slice(2, 2, &[1.0, 0.4, -0.2, 1.3])
    } else {
        DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.3, 0.2, 0.0, //
                0.0, 1.2, 0.0, 0.1, //
                0.1, 0.0, 0.9, 0.4, //
                0.0, 0.2, -0.1, 1.1,
            ],
        )
    }
}

/// Symplectic squeeze `diag(e^{s1}, e^{-s1}, e^{s2}, e^{-s2})`; its inverse is
/// the squeeze with negated amplitude.
fn squeeze(dim: usize, x: &[f64; 4], amplitude: f64) -> DMatrix<f64> {
    let s = squeeze_exponents(dim, x, amplitude);
    let mut p = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        p[(2 * k, 2 * k)] = s[k].exp();
        p[(2 * k + 1, 2 * k + 1)] = (-s[k]).exp();
    }
    p
}

fn squeeze_exponents(dim: usize, x: &[f64; 4], amplitude: f64) -> [f64; 2] {
    if dim == 2 {
        [amplitude * (2.0 * PI * x[1]).sin(), 0.0]
    } else {
        [
            amplitude * (2.0 * PI * x[2]).sin(),
            amplitude * (2.0 * PI * x[0]).sin(),
        ]
    }
}

/// Symplectic form recipes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaRecipe {
    Standard,
    /// `ω0 + ε d(sin(2πx2) dx1)`: closed, taming `J0`, with a (2,0)+(0,2) part.
    Taming { amplitude: f64 },
    /// `ω0 + i∂∂̄ψ` for a trigonometric `ψ`; Kähler for `J0`.
    KahlerPerturbation { amplitude: f64 },
}

impl OmegaRecipe {
    pub fn build(&self, grid: PeriodicGrid) -> Result<TwoFormField> {
        let d = grid.real_dim();
        let w0 = TwoFormField::standard(grid);
        match *self {
            OmegaRecipe::Standard => Ok(w0),
            OmegaRecipe::Taming { amplitude } => {
                if d < 4 {
                    return Err(Error::InvalidArgument(
                        "every 2-form is J-invariant in real dimension 2".into(),
                    ));
                }
                let m = MatrixField::from_fn(grid, |x| {
                    let mut w = standard_symplectic(d);
                    let c = amplitude * 2.0 * PI * (2.0 * PI * x[2]).cos();
                    // d(sin(2πx2) dx1) = 2π cos(2πx2) dx2 ∧ dx1
                    w[(2, 0)] += c;
                    w[(0, 2)] -= c;
                    w
                });
                TwoFormField::new(m)
            }
            OmegaRecipe::KahlerPerturbation { amplitude } => {
                let psi = ScalarField::from_fn(grid, |x| {
                    amplitude / (4.0 * PI * PI) * trig_profile(d, x)
                });
                Ok(w0.add(&i_ddbar(&psi)))
            }
        }
    }
}

/// Density exponent recipes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityRecipe {
    Zero,
    Constant { value: f64 },
    /// `a · sin(2πx)cos(2πy)` on `T²`; a two-term trigonometric profile on `T⁴`.
    Trig { amplitude: f64 },
    /// `a · exp(sin(2πx1))`, smooth but not band-limited.
    ExpSine { amplitude: f64 },
}

impl DensityRecipe {
    pub fn value_at(&self, dim: usize, x: &[f64; 4]) -> f64 {
        match *self {
            DensityRecipe::Zero => 0.0,
            DensityRecipe::Constant { value } => value,
            DensityRecipe::Trig { amplitude } => amplitude * trig_profile(dim, x),
            DensityRecipe::ExpSine { amplitude } => amplitude * (2.0 * PI * x[0]).sin().exp(),
        }
    }

    pub fn build(&self, grid: PeriodicGrid) -> Result<ScalarField> {
        let d = grid.real_dim();
        let f = ScalarField::from_fn(grid, |x| self.value_at(d, x));
        f.check_smooth(SMOOTHNESS_LIMIT)?;
        Ok(f)
    }
}

/// `sin(2πx)cos(2πy)` on `T²`; `sin(2πx1)cos(2πx2) + ½cos(2π(y1 − y2))` on `T⁴`.
pub fn trig_profile(dim: usize, x: &[f64; 4]) -> f64 {
    if dim == 2 {
        (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos()
    } else {
        (2.0 * PI * x[0]).sin() * (2.0 * PI * x[2]).cos()
            + 0.5 * (2.0 * PI * (x[1] - x[3])).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::structure::{compatibility_defect, taming_margin};

    #[test]
    fn twisted_is_compatible_with_standard_form() {
        let grid = PeriodicGrid::new(2, 16).unwrap();
        let j = JRecipe::Twisted { amplitude: 0.2 }.build(grid).unwrap();
        assert!(j.square_defect() <= 1e-12);
        let w = TwoFormField::standard(grid);
        assert!(compatibility_defect(&w, &j) < 1e-13);
        assert!(taming_margin(&w, &j) > 0.0);
    }

    #[test]
    fn taming_recipe_needs_four_dimensions() {
        let grid = PeriodicGrid::new(1, 8).unwrap();
        assert!(OmegaRecipe::Taming { amplitude: 0.1 }.build(grid).is_err());
    }

    #[test]
    fn rough_density_is_rejected() {
        let grid = PeriodicGrid::new(1, 8).unwrap();
        assert!(matches!(
            DensityRecipe::ExpSine { amplitude: 3.0 }.build(grid),
            Err(Error::UnderResolved { .. })
        ));
    }
}
