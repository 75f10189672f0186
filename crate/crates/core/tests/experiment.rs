use cylab::estimates::Verdict;
use cylab::experiment::*;
use cylab::solver::{continuity_resume, ContinuityState};
use cylab::Error;
use std::path::Path;
use std::time::Instant;

const SMOKE: &str = r#"
name = "smoke"
[grid]
complex_dim = 1
resolution = 64
[structure]
density = { kind = "zero" }
"#;

const SURFACE: &str = r#"
name = "surface"
seed = 3
[grid]
complex_dim = 1
resolution = 32
[structure]
density = { kind = "trig", amplitude = 0.5 }
[solver]
steps = 4
"#;

fn experiment(text: &str, out: &Path) -> Experiment {
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    Experiment::new(cfg, RunOptions { out: Some(out.to_path_buf()), quiet: true, ..Default::default() }).unwrap()
}

#[test]
fn smoke_config_passes_every_stage_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let manifest = experiment(SMOKE, dir.path()).run_all().unwrap();
    let secs = started.elapsed().as_secs_f64();
    println!("smoke run {secs:.3} s, {} verdicts", manifest.verdicts.len());
    assert!(secs < 5.0);
    assert_eq!(manifest.exit_code(), 0, "{:?}", manifest.failures());
    for stage in Stage::PIPELINE {
        assert!(manifest.timings.iter().any(|t| t.stage == stage));
        assert!(dir.path().join(stage.output_file()).exists());
    }
    for csv in ["frontier.csv", "lp.csv", "constants.csv", "monotonicity.csv", "epsilon.csv"] {
        assert!(dir.path().join(csv).exists(), "{csv}");
    }
}

#[test]
fn broken_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let text = format!("{SMOKE}[solver]\ntol_residual = -1e-9\n");
    let err = ExperimentConfig::from_toml(&text).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert_eq!(RunError::Config(err).exit_code(), 2);
    // a config mutated after parsing is caught before any directory exists
    let mut cfg = ExperimentConfig::from_toml(SMOKE).unwrap();
    cfg.thresholds.key_inequality = -1.0;
    let opts = RunOptions { out: Some(out.clone()), ..Default::default() };
    let err = Experiment::new(cfg, opts).err().unwrap();
    assert_eq!(err.exit_code(), 2);
    assert!(!out.exists());
}

#[test]
fn report_needs_stage_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let exp = experiment(SMOKE, dir.path());
    let err = exp.run_stage(Stage::Report).unwrap_err();
    println!("{err}");
    assert_eq!(err.exit_code(), Stage::Report.exit_code());
    assert!(err.to_string().contains("missing stage outputs"));
    let err = exp.run_stage(Stage::Verify).unwrap_err();
    assert_eq!(err.exit_code(), Stage::Verify.exit_code());
}

#[test]
fn single_stage_summary_lists_only_that_stage() {
    let dir = tempfile::tempdir().unwrap();
    let exp = experiment(SURFACE, dir.path());
    exp.run_stage(Stage::Solve).unwrap();
    let summary = exp.report_bundle().unwrap();
    assert_eq!(summary.stages.keys().copied().collect::<Vec<_>>(), vec![Stage::Solve]);
}

#[test]
fn identical_configs_give_identical_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = experiment(SURFACE, a.path()).run_all().unwrap();
    let mb = experiment(SURFACE, b.path()).run_all().unwrap();
    assert_eq!(ma.verdicts, mb.verdicts);
    for file in [SOLUTION_FILE, SUMMARY_FILE, "verify.json", "curvature.json", "monotonicity.json", "lp.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs");
    }
}

#[test]
fn resumed_solve_matches_uninterrupted_solve() {
    let full = tempfile::tempdir().unwrap();
    let part = tempfile::tempdir().unwrap();
    let exp = experiment(SURFACE, full.path());
    exp.run_stage(Stage::Solve).unwrap();
    let reference = FieldContainer::read(&full.path().join(SOLUTION_FILE)).unwrap();

    // interrupt a run after t = 0.5 and keep its checkpoint
    let problem = exp.problem().unwrap();
    let ckpt = part.path().join("mid.cyf");
    let stop = continuity_resume(&problem, ContinuityState::start(problem.grid), |s| {
        FieldContainer::new(problem.grid)
            .with_field("phi", s.phi.clone())?
            .with_meta(exp.state_meta(s.t, &s.trace))
            .write(&ckpt)?;
        if s.t >= 0.5 {
            return Err(Error::Hypothesis("interrupted".into()));
        }
        Ok(())
    });
    assert!(stop.is_err());

    let cfg = ExperimentConfig::from_toml(SURFACE).unwrap();
    let opts = RunOptions { out: Some(part.path().to_path_buf()), resume: Some(ckpt), quiet: true };
    Experiment::new(cfg, opts).unwrap().run_stage(Stage::Solve).unwrap();
    let resumed = FieldContainer::read(&part.path().join(SOLUTION_FILE)).unwrap();
    let d = resumed.require("phi").unwrap().max_abs_diff(reference.require("phi").unwrap());
    println!("resume difference {d:e}");
    assert!(d <= 1e-12);
}

#[test]
fn checkpoint_from_another_config_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let exp = experiment(SURFACE, dir.path());
    exp.run_stage(Stage::Solve).unwrap();
    let other = SURFACE.replace("amplitude = 0.5", "amplitude = 0.4");
    let cfg = ExperimentConfig::from_toml(&other).unwrap();
    let opts = RunOptions {
        out: Some(dir.path().join("other")),
        resume: Some(dir.path().join(CHECKPOINT_FILE)),
        quiet: true,
    };
    let err = Experiment::new(cfg, opts).unwrap().run_stage(Stage::Solve).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn failing_verdicts_set_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    // an impossible threshold on the L^p ratio forces a FAIL
    let text = format!("{SURFACE}[thresholds]\nlp_sup_fraction = 1e-6\n");
    let exp = experiment(&text, dir.path());
    exp.run_stage(Stage::Solve).unwrap();
    let m = exp.run_stage(Stage::Verify).unwrap();
    assert_eq!(m.verdicts["verify/lp_sup_ratio"], Verdict::Fail);
    assert_eq!(m.exit_code(), 1);
    let out: StageOutput = serde_json::from_slice(&std::fs::read(dir.path().join("verify.json")).unwrap()).unwrap();
    let lp = out.reports.iter().find(|r| r.name == "lp_sup_ratio").unwrap();
    assert!(lp.worst_point.is_some() && !lp.statement.is_empty());
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["smoke", "reference", "twisted"] {
        ExperimentConfig::load(&root.join(format!("{name}.toml"))).unwrap();
    }
    assert!(matches!(ExperimentConfig::load(&root.join("broken.toml")), Err(Error::Config(_))));
}
