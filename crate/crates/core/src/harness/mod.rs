//! Reproducible experiments: seeded trials over a budget or cost sweep,
//! scored against exact oracles and written as CSV plus a JSON sidecar.

mod config;
mod report;
mod sweep;
mod trial;

pub use config::{
    CostSpec, ExperimentConfig, ModelSpec, PolicySpec, SweepAxis, SweepPoint, SweepSpec,
};
pub use report::{
    mean_and_stderr, read_cells, read_report_csv, sidecar_path, write_cells, write_report,
    OracleBlock, RegretKind, RegretReport, ReportCell,
};
pub use sweep::run_sweep;
pub use trial::{neumaier_sum, run_trial, run_trial_with, Oracle, TrialOutcome};
