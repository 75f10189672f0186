//! Configuration, binary field containers, stage orchestration and report
//! bundles.

pub mod config;
pub mod container;
pub mod run;

pub use config::{CheckList, ExperimentConfig, GridSpec, SolverSpec, StructureSpec, Thresholds};
pub use container::{ContainerHeader, FieldContainer, FORMAT_VERSION, MAGIC};
pub use run::{
    config_hash, run, Experiment, RunError, RunManifest, RunOptions, Stage, StageOutput, StageTiming, Summary,
    CHECKPOINT_FILE, MANIFEST_FILE, SOLUTION_FILE, SUMMARY_FILE,
};
