//! Parameter sweeps and recovery experiments.

pub mod experiment;
pub mod sweep;

pub use experiment::{run_experiment, DefectiveRule, ExperimentReport, ExperimentSpec, MatrixSource, TrialRecord};
pub use sweep::{simulate_bounds, to_csv, to_gnuplot, Scheme, SweepRow, SweepSpec};
