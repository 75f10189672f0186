//! Discrete fields on the flat torus, spectral calculus, and the pointwise
//! algebra of metrics, 2-forms and almost complex structures.

pub mod field;
pub mod forms;
pub mod grid;
pub mod laplacian;
pub mod recipes;
pub mod spectral;
pub mod structure;

pub use field::{
    AlmostComplexField, EndomorphismField, MatrixField, MetricField, ScalarField, TwoFormField,
};
pub use forms::FormField;
pub use grid::PeriodicGrid;
pub use laplacian::MetricLaplacian;
pub use spectral::Spectrum;
pub use structure::{
    compatibility_defect, metric_from_pair, nijenhuis, one_one_part, taming_margin, traces,
    NijenhuisField,
};

use crate::error::Result;

/// `∂f/∂x^axis` by Fourier differentiation.
pub fn spectral_derivative(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    f.derivative(axis)
}
