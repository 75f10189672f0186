//! TOML experiment configuration built from the recipe catalog.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::recipes::{DensityRecipe, JRecipe, OmegaRecipe};
use crate::geometry::PeriodicGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub complex_dim: usize,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    /// Symplectic background `Ω` (the solve itself always uses `ω0`).
    #[serde(default = "default_background")]
    pub background: OmegaRecipe,
    #[serde(default = "default_j")]
    pub j: JRecipe,
    pub density: DensityRecipe,
    /// Normalize `F` so that `∫e^F ω0ⁿ = ∫ω0ⁿ` (always applied by the solver;
    /// recorded for provenance).
    #[serde(default = "yes")]
    pub normalize_density: bool,
}

fn default_background() -> OmegaRecipe {
    OmegaRecipe::Standard
}

fn default_j() -> JRecipe {
    JRecipe::Standard
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_tol_residual")]
    pub tol_residual: f64,
    #[serde(default = "default_tol_newton")]
    pub tol_newton: f64,
    #[serde(default = "default_max_newton")]
    pub max_newton: usize,
    #[serde(default = "default_max_bisections")]
    pub max_bisections: usize,
}

fn default_steps() -> usize {
    4
}
fn default_tol_residual() -> f64 {
    1e-11
}
fn default_tol_newton() -> f64 {
    1e-10
}
fn default_max_newton() -> usize {
    30
}
fn default_max_bisections() -> usize {
    8
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            steps: default_steps(),
            tol_residual: default_tol_residual(),
            tol_newton: default_tol_newton(),
            max_newton: default_max_newton(),
            max_bisections: default_max_bisections(),
        }
    }
}

/// Which reports each stage produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckList {
    #[serde(default = "yes")]
    pub trace_identity: bool,
    #[serde(default = "yes")]
    pub exponential_bound: bool,
    #[serde(default = "yes")]
    pub key_inequality: bool,
    #[serde(default = "yes")]
    pub good_term: bool,
    #[serde(default = "yes")]
    pub moser_chain: bool,
    #[serde(default = "yes")]
    pub third_order: bool,
    #[serde(default = "yes")]
    pub curvature: bool,
    #[serde(default = "yes")]
    pub monotonicity: bool,
    #[serde(default = "default_a_values")]
    pub exponential_a: Vec<f64>,
    #[serde(default = "default_centers")]
    pub ball_centers: usize,
    #[serde(default = "default_radii")]
    pub ball_radii: [f64; 2],
    #[serde(default = "default_radius_count")]
    pub ball_radius_count: usize,
    #[serde(default = "default_griffiths_samples")]
    pub griffiths_samples: usize,
}

fn default_a_values() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 2.0, 4.0]
}
fn default_centers() -> usize {
    5
}
fn default_radii() -> [f64; 2] {
    [0.05, 0.25]
}
fn default_radius_count() -> usize {
    10
}
fn default_griffiths_samples() -> usize {
    64
}

impl Default for CheckList {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

/// Pass/fail thresholds; the defaults are those of the acceptance suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "t_ma")]
    pub ma_residual: f64,
    #[serde(default = "t_volume")]
    pub volume: f64,
    #[serde(default = "t_trace")]
    pub trace_identity: f64,
    #[serde(default = "t_key")]
    pub key_inequality: f64,
    #[serde(default = "t_good")]
    pub good_term: f64,
    #[serde(default = "t_chain")]
    pub moser_chain: f64,
    #[serde(default = "t_lp")]
    pub lp_sup_fraction: f64,
    #[serde(default = "t_ratio")]
    pub monotonicity_ratio: f64,
    #[serde(default = "t_equivalence")]
    pub equivalence_relative: f64,
    #[serde(default = "t_skew")]
    pub skew_hermitian: f64,
    #[serde(default = "t_torsion")]
    pub torsion_one_one: f64,
    #[serde(default = "t_ricci")]
    pub ricci_closed: f64,
    #[serde(default = "t_ricci")]
    pub nijenhuis_torsion: f64,
}

fn t_ma() -> f64 {
    1e-9
}
fn t_volume() -> f64 {
    1e-10
}
fn t_equivalence() -> f64 {
    0.10
}
fn t_trace() -> f64 {
    1e-9
}
fn t_key() -> f64 {
    1e-6
}
fn t_good() -> f64 {
    1e-8
}
fn t_chain() -> f64 {
    1e-9
}
fn t_lp() -> f64 {
    0.02
}
fn t_ratio() -> f64 {
    1e-6
}
fn t_skew() -> f64 {
    1e-12
}
fn t_torsion() -> f64 {
    1e-9
}
fn t_ricci() -> f64 {
    1e-8
}

impl Default for Thresholds {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    pub grid: GridSpec,
    pub structure: StructureSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub checks: CheckList,
    #[serde(default)]
    pub thresholds: Thresholds,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.grid.complex_dim, self.grid.resolution)
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self> {
        self.grid.resolution = resolution;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !matches!(self.grid.complex_dim, 1 | 2) {
            return bad(format!("complex_dim must be 1 or 2, got {}", self.grid.complex_dim));
        }
        if self.grid.resolution < 4 || self.grid.resolution % 2 != 0 {
            return bad(format!("resolution must be even and ≥ 4, got {}", self.grid.resolution));
        }
        let s = &self.solver;
        let t = &self.thresholds;
        let positive = [
            ("solver.tol_residual", s.tol_residual),
            ("solver.tol_newton", s.tol_newton),
            ("thresholds.ma_residual", t.ma_residual),
            ("thresholds.volume", t.volume),
            ("thresholds.equivalence_relative", t.equivalence_relative),
            ("thresholds.trace_identity", t.trace_identity),
            ("thresholds.key_inequality", t.key_inequality),
            ("thresholds.good_term", t.good_term),
            ("thresholds.moser_chain", t.moser_chain),
            ("thresholds.lp_sup_fraction", t.lp_sup_fraction),
            ("thresholds.monotonicity_ratio", t.monotonicity_ratio),
            ("thresholds.skew_hermitian", t.skew_hermitian),
            ("thresholds.torsion_one_one", t.torsion_one_one),
            ("thresholds.ricci_closed", t.ricci_closed),
            ("thresholds.nijenhuis_torsion", t.nijenhuis_torsion),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if s.steps == 0 || s.max_newton == 0 {
            return bad("solver.steps and solver.max_newton must be positive".into());
        }
        let c = &self.checks;
        if c.ball_centers == 0 || c.ball_radius_count == 0 || !(0.0 < c.ball_radii[0] && c.ball_radii[0] <= c.ball_radii[1]) {
            return bad("ball family must have centers and increasing positive radii".into());
        }
        if c.exponential_a.iter().any(|a| !(*a >= 0.0)) {
            return bad("exponential_a values must be nonnegative".into());
        }
        if matches!(self.structure.background, OmegaRecipe::Taming { .. }) && self.grid.complex_dim == 1 {
            return bad("the taming background needs complex_dim = 2".into());
        }
        Ok(())
    }
}
