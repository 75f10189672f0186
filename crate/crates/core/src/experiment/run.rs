//! Stage orchestration: solve → verify → curvature → monotonicity → report.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::connection::CurvatureReport;
use crate::error::{Error, Result};
use crate::estimates::{self, EstimateReport, Verdict};
use crate::geometry::recipes::OmegaRecipe;
use crate::geometry::{
    metric_from_pair, one_one_part, traces, AlmostComplexField, MetricField, PeriodicGrid, TwoFormField,
};
use crate::monotonicity::{self, BallFamily};
use crate::solver::{continuity_resume, CYProblem, CYSolution, ContinuityState, StepRecord};

use super::config::ExperimentConfig;
use super::container::FieldContainer;

pub const SOLUTION_FILE: &str = "solution.cyf";
pub const CHECKPOINT_FILE: &str = "checkpoint.cyf";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Solve,
    Verify,
    Curvature,
    Monotonicity,
    Report,
}

impl Stage {
    pub const PIPELINE: [Stage; 4] = [Stage::Solve, Stage::Verify, Stage::Curvature, Stage::Monotonicity];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Solve => "solve",
            Stage::Verify => "verify",
            Stage::Curvature => "curvature",
            Stage::Monotonicity => "monotonicity",
            Stage::Report => "report",
        }
    }

    pub fn output_file(self) -> String {
        format!("{}.json", self.name())
    }

    /// Process exit status when this stage errors out.
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Solve => 3,
            Stage::Verify => 4,
            Stage::Curvature => 5,
            Stage::Monotonicity => 6,
            Stage::Report => 7,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error of a run, tagged with the stage that raised it.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(Error),
    #[error("stage {stage} failed: {source}")]
    Stage { stage: Stage, source: Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Stage { stage, .. } => stage.exit_code(),
        }
    }
}

/// JSON written by every stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageOutput {
    pub stage: Stage,
    pub config_hash: String,
    pub reports: Vec<EstimateReport>,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: Stage,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub module_versions: BTreeMap<String, String>,
    pub timings: Vec<StageTiming>,
    /// `stage/report` → verdict.
    pub verdicts: BTreeMap<String, Verdict>,
}

impl RunManifest {
    fn new(config: &ExperimentConfig) -> Self {
        let version = env!("CARGO_PKG_VERSION").to_string();
        let module_versions = ["geometry", "connection", "solver", "estimates", "monotonicity", "experiment"]
            .iter()
            .map(|m| (m.to_string(), version.clone()))
            .collect();
        Self {
            name: config.name.clone(),
            config_hash: config_hash(config),
            module_versions,
            timings: Vec::new(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, v)| **v == Verdict::Fail)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// 0 when no report failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures().is_empty() {
            0
        } else {
            1
        }
    }

    fn record(&mut self, stage: Stage, seconds: f64, reports: &[EstimateReport]) {
        self.timings.retain(|t| t.stage != stage);
        self.timings.push(StageTiming { stage, seconds });
        self.timings.sort_by_key(|t| t.stage);
        let prefix = format!("{stage}/");
        self.verdicts.retain(|k, _| !k.starts_with(&prefix));
        for r in reports {
            self.verdicts.insert(format!("{prefix}{}", r.name), r.verdict);
        }
    }
}

/// SHA-256 of the canonical TOML rendering, lowercase hex.
pub fn config_hash(config: &ExperimentConfig) -> String {
    Sha256::digest(config.to_toml().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Per-invocation options from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub resume: Option<PathBuf>,
    pub quiet: bool,
}

/// A validated config bound to its output directory.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub out: PathBuf,
    pub hash: String,
    resume: Option<PathBuf>,
    quiet: bool,
}

impl Experiment {
    pub fn new(config: ExperimentConfig, opts: RunOptions) -> std::result::Result<Self, RunError> {
        config.validate().map_err(RunError::Config)?;
        let out = opts.out.unwrap_or_else(|| config.output_dir.clone());
        let hash = config_hash(&config);
        Ok(Self {
            config,
            out,
            hash,
            resume: opts.resume,
            quiet: opts.quiet,
        })
    }

    fn log(&self, msg: &str) {
        if !self.quiet {
            println!("[{}] {msg}", self.config.name);
        }
    }

    fn path(&self, file: &str) -> PathBuf {
        self.out.join(file)
    }

    fn load_manifest(&self) -> RunManifest {
        std::fs::read(self.path(MANIFEST_FILE))
            .ok()
            .and_then(|b| serde_json::from_slice::<RunManifest>(&b).ok())
            .filter(|m| m.config_hash == self.hash)
            .unwrap_or_else(|| RunManifest::new(&self.config))
    }

    /// Run one stage, merging its verdicts into the manifest on disk.
    pub fn run_stage(&self, stage: Stage) -> std::result::Result<RunManifest, RunError> {
        let wrap = |source: Error| RunError::Stage { stage, source };
        std::fs::create_dir_all(&self.out).map_err(|e| wrap(e.into()))?;
        let started = Instant::now();
        self.log(&format!("stage {stage}"));
        let reports = match stage {
            Stage::Solve => self.solve().map(|o| o.reports),
            Stage::Verify => self.verify().map(|o| o.reports),
            Stage::Curvature => self.curvature().map(|o| o.reports),
            Stage::Monotonicity => self.monotonicity().map(|o| o.reports),
            Stage::Report => self.report_bundle().map(|_| Vec::new()),
        }
        .map_err(wrap)?;
        for r in &reports {
            self.log(&format!("  {:?} {} (margin {:.3e})", r.verdict, r.name, r.margin));
        }
        let mut manifest = self.load_manifest();
        if stage != Stage::Report {
            manifest.record(stage, started.elapsed().as_secs_f64(), &reports);
        }
        write_json(&self.path(MANIFEST_FILE), &manifest).map_err(wrap)?;
        Ok(manifest)
    }

    /// Every stage enabled by the check-list, then the report bundle.
    pub fn run_all(&self) -> std::result::Result<RunManifest, RunError> {
        let c = &self.config.checks;
        let verify_any = c.trace_identity || c.exponential_bound || c.key_inequality || c.good_term || c.moser_chain || c.third_order;
        for stage in Stage::PIPELINE {
            let enabled = match stage {
                Stage::Verify => verify_any,
                Stage::Curvature => c.curvature,
                Stage::Monotonicity => c.monotonicity,
                _ => true,
            };
            if enabled {
                self.run_stage(stage)?;
            }
        }
        self.run_stage(Stage::Report)
    }

    fn write_stage(&self, output: &StageOutput) -> Result<()> {
        write_json(&self.path(&output.stage.output_file()), output)
    }

    /// The continuity problem described by the config.
    pub fn problem(&self) -> Result<CYProblem> {
        let grid = self.config.grid()?;
        let f = self.config.structure.density.build(grid)?;
        let s = &self.config.solver;
        let mut p = CYProblem::new(&f, s.steps);
        p.tol_residual = s.tol_residual;
        p.tol_newton = s.tol_newton;
        p.max_newton = s.max_newton;
        p.max_bisections = s.max_bisections;
        Ok(p)
    }

    /// Container metadata identifying a continuity state of this config.
    pub fn state_meta(&self, t: f64, trace: &[StepRecord]) -> Value {
        json!({ "config_hash": self.hash, "t": t, "trace": trace })
    }

    fn read_checkpoint(&self, path: &Path, grid: PeriodicGrid) -> Result<ContinuityState> {
        let c = FieldContainer::read(path)?;
        if c.grid != grid {
            return Err(Error::Container("checkpoint grid differs from the config".into()));
        }
        if c.meta["config_hash"] != json!(self.hash) {
            return Err(Error::Container("checkpoint was written by a different config".into()));
        }
        let t = c.meta["t"].as_f64().ok_or_else(|| Error::Container("checkpoint lacks t".into()))?;
        let trace: Vec<StepRecord> = serde_json::from_value(c.meta["trace"].clone())?;
        Ok(ContinuityState {
            t,
            phi: c.require("phi")?.clone(),
            trace,
        })
    }

    pub fn solve(&self) -> Result<StageOutput> {
        let problem = self.problem()?;
        let state = match &self.resume {
            Some(path) => {
                let s = self.read_checkpoint(path, problem.grid)?;
                self.log(&format!("resuming from t = {}", s.t));
                s
            }
            None => ContinuityState::start(problem.grid),
        };
        let checkpoint = self.path(CHECKPOINT_FILE);
        let sol = continuity_resume(&problem, state, |s| {
            self.log(&format!("  t = {:.4} residual {:.3e}", s.t, s.trace.last().map_or(0.0, |r| r.residual)));
            FieldContainer::new(problem.grid)
                .with_field("phi", s.phi.clone())?
                .with_meta(self.state_meta(s.t, &s.trace))
                .write(&checkpoint)
        })?;
        FieldContainer::new(problem.grid)
            .with_field("phi", sol.phi.clone())?
            .with_field("F", problem.f.clone())?
            .with_meta(json!({
                "config_hash": self.hash,
                "t": 1.0,
                "trace": sol.trace,
                "final_residual": sol.final_residual,
            }))
            .write(&self.path(SOLUTION_FILE))?;

        let res = problem.grid.resolution();
        let th = &self.config.thresholds;
        let min_eig = sol.metric.min_eigenvalue();
        let reports = vec![
            EstimateReport::new(
                "monge_ampere_residual",
                "max |ω̃ⁿ/ωⁿ − e^F| is below the solver threshold",
                -sol.final_residual,
                th.ma_residual,
                res,
            ),
            EstimateReport::new(
                "volume_preservation",
                "∫ω̃ⁿ = ∫ωⁿ (relative error)",
                -sol.volume_error(),
                th.volume,
                res,
            ),
            EstimateReport::new("positivity", "g̃ is positive definite everywhere", min_eig, 0.0, res)
                .with_constant("min_eigenvalue", min_eig),
        ];
        let output = StageOutput {
            stage: Stage::Solve,
            config_hash: self.hash.clone(),
            reports,
            details: json!({
                "final_residual": sol.final_residual,
                "volume_error": sol.volume_error(),
                "min_eigenvalue": min_eig,
                "steps": sol.trace,
                "phi_range": [sol.phi.min(), sol.phi.max()],
            }),
        };
        self.write_stage(&output)?;
        Ok(output)
    }

    /// Load the solved potential written by the solve stage.
    pub fn load_solution(&self) -> Result<CYSolution> {
        let path = self.path(SOLUTION_FILE);
        if !path.exists() {
            return Err(Error::Container(format!(
                "missing stage outputs: {} (run the solve stage first)",
                path.display()
            )));
        }
        let c = FieldContainer::read(&path)?;
        if c.meta["config_hash"] != json!(self.hash) {
            return Err(Error::Container("solution was written by a different config".into()));
        }
        let trace: Vec<StepRecord> = serde_json::from_value(c.meta["trace"].clone())?;
        let residual = c.meta["final_residual"].as_f64().unwrap_or(f64::NAN);
        CYSolution::from_potential(c.require("phi")?.clone(), trace, residual)
    }

    fn background(&self, grid: PeriodicGrid, j: &AlmostComplexField) -> Result<(TwoFormField, MetricField)> {
        let omega = self.config.structure.background.build(grid)?;
        let g = metric_from_pair(&one_one_part(&omega, j), j)?;
        Ok((omega, g))
    }

    pub fn verify(&self) -> Result<StageOutput> {
        let sol = self.load_solution()?;
        let grid = *sol.phi.grid();
        let res = grid.resolution();
        let c = &self.config.checks;
        let th = &self.config.thresholds;
        let g = MetricField::euclidean(grid);
        let w = TwoFormField::standard(grid);
        let j0 = AlmostComplexField::standard(grid);
        let mut reports = Vec::new();
        let mut details = serde_json::Map::new();

        if c.trace_identity {
            let mut r = estimates::verify_trace_identity(&sol.omega_tilde, &w, &sol.metric, &g)?;
            r.tolerance = th.trace_identity;
            reports.push(rejudge(r));
            if self.config.structure.background != OmegaRecipe::Standard {
                let (omega, g_omega) = self.background(grid, &j0)?;
                let mut r = estimates::verify_trace_identity(&sol.omega_tilde, &omega, &sol.metric, &g_omega)?;
                r.name.push_str("_background");
                r.tolerance = th.trace_identity;
                reports.push(rejudge(r));
            }
        }
        if c.exponential_bound {
            let frontier = estimates::exponential_frontier(&sol.phi, &g, &sol.metric, &c.exponential_a)?;
            reports.push(estimates::exponential_bound(&sol.phi, &g, &sol.metric, &c.exponential_a)?);
            write_csv(&self.path("frontier.csv"), "A,C", frontier.iter().map(|(a, v)| format!("{a},{v:e}")))?;
            details.insert("frontier".into(), json!(frontier));
        }
        if c.key_inequality {
            reports.push(estimates::key_inequality(&g, &sol.metric, 0.0, th.key_inequality)?);
        }
        if c.good_term {
            reports.push(estimates::good_term_check(&sol.phi, th.good_term));
        }
        if c.third_order {
            reports.push(estimates::third_order_quantity(&sol.phi, &g, &sol.metric)?);
        }
        if c.moser_chain {
            let mut trace = estimates::moser_chain(&sol.phi, &w, &sol.omega_tilde)?;
            trace.i_alpha = estimates::i_alpha(&sol.sup_normalized(), &w, &[0.5, 1.0, 2.0, 4.0])?;
            let mut chain = EstimateReport::new(
                "moser_chain",
                "∫φ(ωⁿ − ω̃ⁿ) bounds the top mixed gradient term and C‖φ‖_{L¹}",
                trace.chain_margin(),
                th.moser_chain,
                res,
            );
            for (k, v) in &trace.chain_residuals {
                chain = chain.with_constant(k, *v);
            }
            reports.push(chain.with_constant("poincare_ratio", trace.poincare_ratio));
            let ratio = trace.sup_ratio();
            let mut lp = EstimateReport::new(
                "lp_sup_ratio",
                "‖φ‖_{L^p} is nondecreasing in p and its largest value is within the threshold of ‖φ‖_{C⁰}",
                ratio - (1.0 - th.lp_sup_fraction),
                0.0,
                res,
            )
            .with_constant("sup_ratio", ratio)
            .with_constant("c0_norm", trace.c0_norm);
            let (p, v) = sol.phi.map(f64::abs).argmax();
            lp = lp.with_worst(p, v);
            if !trace.lp_monotone() {
                lp.verdict = Verdict::Fail;
            }
            reports.push(lp);
            write_csv(
                &self.path("lp.csv"),
                "p,lp_norm",
                trace.p_values.iter().zip(&trace.lp_norms).map(|(p, v)| format!("{p},{v:e}")),
            )?;
            details.insert("moser".into(), json!(trace));
        }
        write_constants(&self.path("constants.csv"), &reports)?;
        let output = StageOutput {
            stage: Stage::Verify,
            config_hash: self.hash.clone(),
            reports,
            details: Value::Object(details),
        };
        self.write_stage(&output)?;
        Ok(output)
    }

    pub fn curvature(&self) -> Result<StageOutput> {
        let grid = self.config.grid()?;
        let th = &self.config.thresholds;
        let samples = self.config.checks.griffiths_samples;
        let j_recipe = &self.config.structure.j;
        let j = j_recipe.build(grid)?;
        let (_, g_bg) = self.background(grid, &j)?;
        let bg = CurvatureReport::compute("background", &g_bg, &j, samples, self.config.seed)?;
        let mut reports = curvature_reports(&bg, th, Some(j_recipe.is_integrable(grid.real_dim())));

        let mut details = json!({ "background": bg });
        if self.path(SOLUTION_FILE).exists() {
            let sol = self.load_solution()?;
            let j0 = AlmostComplexField::standard(grid);
            let solved = CurvatureReport::compute("solved", &sol.metric, &j0, samples, self.config.seed)?;
            reports.extend(curvature_reports(&solved, th, Some(true)));
            let bundle = crate::connection::CurvatureBundle::compute(&sol.metric, &j0)?;
            let total = bundle.integrated_ricci(&sol.omega_tilde)?;
            reports.push(
                EstimateReport::new(
                    "solved/total_ricci",
                    "∫Ric ∧ ω̃ⁿ⁻¹ vanishes on the torus",
                    -total.abs(),
                    th.ricci_closed,
                    grid.resolution(),
                )
                .with_constant("integral", total),
            );
            details["solved"] = json!(solved);
        }
        let output = StageOutput {
            stage: Stage::Curvature,
            config_hash: self.hash.clone(),
            reports,
            details,
        };
        self.write_stage(&output)?;
        Ok(output)
    }

    pub fn monotonicity(&self) -> Result<StageOutput> {
        let sol = self.load_solution()?;
        let grid = *sol.phi.grid();
        let res = grid.resolution();
        let c = &self.config.checks;
        let th = &self.config.thresholds;
        let g = MetricField::euclidean(grid);
        let (tr, _) = traces(&g, &sol.metric)?;
        let balls = BallFamily::standard(&tr, c.ball_centers, c.ball_radii[0], c.ball_radii[1], c.ball_radius_count)?;
        let a_values = monotonicity::a_grid();

        let (scan, chain) = if grid.complex_dim() == 2 {
            let w = TwoFormField::standard(grid);
            let (scan, chain) =
                monotonicity::decay_and_l1(&g, &sol.metric, &sol.omega_tilde, &w, &balls, sol.final_residual, th.moser_chain)?;
            (scan, Some(chain))
        } else {
            (monotonicity::monotonicity_scan(&g, &sol.metric, &balls, &a_values)?, None)
        };

        let mut mono = EstimateReport::new(
            "monotonicity",
            "e^{Ar} r^{2−2n} E(p, r) is nondecreasing in r for one A on every center",
            if scan.fitted_a.is_some() && scan.integrals_nondecreasing() { 0.0 } else { -1.0 },
            th.monotonicity_ratio,
            res,
        )
        .with_constant("decay_C", scan.decay_c);
        if let Some(a) = scan.fitted_a {
            mono = mono.with_constant("A", a);
        }
        let mut reports = vec![mono];
        if let Some(ch) = &chain {
            let margin = ch.margins.iter().copied().fold(f64::INFINITY, f64::min);
            reports.push(
                EstimateReport::new(
                    "l1_wedge_chain",
                    "each step of the wedge chain bounding ∫tr_ω ω̃ holds",
                    margin.min(-ch.cohomology_defect.abs() + th.moser_chain),
                    th.moser_chain,
                    res,
                )
                .with_constant("l1", ch.l1)
                .with_constant("c_a", ch.c_a)
                .with_constant("c_b", ch.c_b)
                .with_constant("cohomology_defect", ch.cohomology_defect),
            );
            let rel = (ch.equivalence_c / ch.equivalence_prediction - 1.0).abs();
            reports.push(
                EstimateReport::new(
                    "metric_equivalence",
                    "the fitted equivalence constant matches the determinant-ratio prediction",
                    th.equivalence_relative - rel,
                    0.0,
                    res,
                )
                .with_constant("equivalence_c", ch.equivalence_c)
                .with_constant("prediction", ch.equivalence_prediction),
            );
        }
        let eps = monotonicity::epsilon_regularity_probe(&g, &sol.metric, &balls)?;
        std::fs::write(self.path("monotonicity.csv"), scan.to_csv())?;
        write_csv(
            &self.path("epsilon.csv"),
            "center,r,energy,sup_density",
            eps.iter().map(|e| format!("{},{},{:e},{:e}", e.center, e.r, e.x, e.y)),
        )?;
        let output = StageOutput {
            stage: Stage::Monotonicity,
            config_hash: self.hash.clone(),
            reports,
            details: json!({ "scan": scan, "l1": chain, "epsilon": eps, "balls": balls }),
        };
        self.write_stage(&output)?;
        Ok(output)
    }

    /// Aggregate every stage JSON present into `summary.json` and a combined
    /// constants table.
    pub fn report_bundle(&self) -> Result<Summary> {
        let mut stages = BTreeMap::new();
        for stage in Stage::PIPELINE {
            let path = self.path(&stage.output_file());
            if !path.exists() {
                continue;
            }
            let out: StageOutput = serde_json::from_slice(&std::fs::read(&path)?)?;
            if out.config_hash != self.hash {
                return Err(Error::Container(format!("{} was written by a different config", path.display())));
            }
            stages.insert(stage, out.reports);
        }
        if stages.is_empty() {
            return Err(Error::Container(format!("missing stage outputs in {}", self.out.display())));
        }
        let all: Vec<EstimateReport> = stages.values().flatten().cloned().collect();
        write_constants(&self.path("summary_constants.csv"), &all)?;
        let failures = all.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.name.clone()).collect();
        let summary = Summary {
            name: self.config.name.clone(),
            config_hash: self.hash.clone(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            resolution: self.config.grid.resolution,
            complex_dim: self.config.grid.complex_dim,
            stages,
            failures,
        };
        write_json(&self.path(SUMMARY_FILE), &summary)?;
        Ok(summary)
    }
}

/// Timestamp-free aggregate of all stage reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub config_hash: String,
    pub crate_version: String,
    pub resolution: usize,
    pub complex_dim: usize,
    pub stages: BTreeMap<Stage, Vec<EstimateReport>>,
    pub failures: Vec<String>,
}

/// Validate, then run every enabled stage into `config.output_dir`.
pub fn run(config: &ExperimentConfig) -> std::result::Result<RunManifest, RunError> {
    Experiment::new(config.clone(), RunOptions { quiet: true, ..Default::default() })?.run_all()
}

fn rejudge(mut r: EstimateReport) -> EstimateReport {
    if r.verdict != Verdict::Info {
        r.verdict = if r.margin >= -r.tolerance { Verdict::Pass } else { Verdict::Fail };
    }
    r
}

fn curvature_reports(
    c: &CurvatureReport,
    th: &super::config::Thresholds,
    integrable: Option<bool>,
) -> Vec<EstimateReport> {
    let key = &c.key;
    let res = c.resolution;
    let bound = |name: &str, statement: &str, value: f64, tol: f64| {
        EstimateReport::new(&format!("{key}/{name}"), statement, -value, tol, res).with_constant("value", value)
    };
    let mut out = vec![
        bound(
            "skew_hermitian",
            "the canonical connection matrix is skew-Hermitian in a unitary frame",
            c.skew_hermitian_defect,
            th.skew_hermitian,
        ),
        bound(
            "torsion_one_one",
            "the torsion of the canonical connection has no (1,1)-part",
            c.torsion_one_one,
            th.torsion_one_one,
        ),
        bound("ricci_closed", "the Ricci form is closed", c.chern_closedness, th.ricci_closed),
        bound("ricci_real", "the Ricci form is real", c.ricci_imaginary, th.ricci_closed),
        bound(
            "nijenhuis_torsion",
            "the (0,2)-torsion equals the Nijenhuis tensor",
            c.nijenhuis_torsion_mismatch,
            th.nijenhuis_torsion,
        ),
    ];
    let nij = match integrable {
        Some(true) => bound("nijenhuis", "J is integrable", c.nijenhuis_norm, th.torsion_one_one),
        _ => EstimateReport::info(&format!("{key}/nijenhuis"), "size of the Nijenhuis tensor", res)
            .with_constant("value", c.nijenhuis_norm),
    };
    out.push(nij);
    out.push(
        EstimateReport::info(
            &format!("{key}/griffiths_min"),
            "minimum of the modified curvature on sampled unit vectors",
            res,
        )
        .with_constant("min", c.griffiths.min)
        .with_worst(c.griffiths.point, c.griffiths.min),
    );
    out
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}

fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_constants(path: &Path, reports: &[EstimateReport]) -> Result<()> {
    write_csv(
        path,
        "report,verdict,margin,constant,value",
        reports.iter().flat_map(|r| {
            let head = format!("{},{:?},{:e}", r.name, r.verdict, r.margin);
            if r.fitted_constants.is_empty() {
                vec![format!("{head},,")]
            } else {
                r.fitted_constants.iter().map(|(k, v)| format!("{head},{k},{v:e}")).collect()
            }
        }),
    )
}
