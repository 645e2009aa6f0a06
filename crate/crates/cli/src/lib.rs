//! Experiment drivers and report formats behind the `omprip` binary.

pub mod commands;
pub mod experiment;
pub mod report;
pub mod rng;

pub use experiment::{run_theorem1, run_theorem1_with, Ensemble, ExperimentConfig, PolicyChoice, Theorem1Summary};
pub use report::{Check, VerificationReport, SCHEMA_VERSION};
pub use rng::ExperimentRng;
