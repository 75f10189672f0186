//! Unitary frames, the canonical connection of an almost-Hermitian
//! structure, torsion, curvature, the Ricci form and the modified curvature.

pub mod algebra;
pub mod bundle;
pub mod chart;
pub mod frame;
pub mod modified;

use serde::Serialize;

pub use bundle::{
    canonical_connection, half_d_jdf, log_volume_ratio, ric_transformation_check,
    torsion_curvature, CurvatureBundle,
};
pub use chart::{chart_curvature, ChartStructure, FnChart, FubiniStudyChart, PointCurvature};
pub use frame::{build_unitary_frame, UnitaryFrame};
pub use modified::{GriffithsWitness, ModifiedCurvature};

use crate::error::Result;
use crate::geometry::{nijenhuis, AlmostComplexField, MetricField};

/// Summary of one curvature computation, keyed by the recipe hash.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub key: String,
    pub resolution: usize,
    pub skew_hermitian_defect: f64,
    pub torsion_one_one: f64,
    pub ricci_imaginary: f64,
    pub chern_closedness: f64,
    pub nijenhuis_norm: f64,
    pub nijenhuis_torsion_mismatch: f64,
    pub griffiths: GriffithsWitness,
}

impl CurvatureReport {
    pub fn compute(
        key: &str,
        g: &MetricField,
        j: &AlmostComplexField,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let bundle = CurvatureBundle::compute(g, j)?;
        let nij = nijenhuis(j);
        Ok(Self {
            key: key.to_string(),
            resolution: g.grid().resolution(),
            skew_hermitian_defect: bundle.skew_hermitian_defect(),
            torsion_one_one: bundle.torsion_one_one_defect(),
            ricci_imaginary: bundle.ricci_imaginary_residue(),
            chern_closedness: bundle.chern_closedness(),
            nijenhuis_norm: nij.max_norm(),
            nijenhuis_torsion_mismatch: bundle.nijenhuis_mismatch(&nij),
            griffiths: bundle.modified_curvature().griffiths_min(samples, seed)?,
        })
    }
}
