//! Aggregated regret tables and their files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::trial::Oracle;
use crate::error::HarnessError;

/// Which regret a cell reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegretKind {
    Simple,
    Cumulative,
}

/// Mean regret of one policy at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub policy: String,
    pub sweep_axis: String,
    pub sweep_value: f64,
    pub trials: usize,
    pub mean_regret: f64,
    pub stderr: f64,
    pub regret_kind: RegretKind,
}

/// Oracle quantities of the first trial's model and costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBlock {
    #[serde(flatten)]
    pub oracle: Oracle,
    /// `(budget, R*(budget))` for every budget of the sweep, when costs are
    /// integers.
    pub optimal_values: Vec<(f64, f64)>,
}

/// Every cell of a sweep plus context for the JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub config: ExperimentConfig,
    pub cells: Vec<ReportCell>,
    pub oracle: Option<OracleBlock>,
    pub version: String,
    pub wall_clock_seconds: f64,
}

impl RegretReport {
    /// Cells of one policy, in sweep order.
    pub fn series(&self, policy: &str) -> Vec<&ReportCell> {
        self.cells.iter().filter(|c| c.policy == policy).collect()
    }

    /// The cell of `policy` at `sweep_value`.
    pub fn cell(&self, policy: &str, sweep_value: f64) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.policy == policy && c.sweep_value == sweep_value)
    }
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = super::trial::neumaier_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = super::trial::neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt())
}

/// Writes the cells as CSV.
pub fn write_cells<W: std::io::Write>(cells: &[ReportCell], w: W) -> Result<(), HarnessError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record([
        "policy",
        "sweep_axis",
        "sweep_value",
        "trials",
        "mean_regret",
        "stderr",
        "regret_kind",
    ])?;
    for cell in cells {
        writer.serialize(cell)?;
    }
    writer.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

/// Reads cells written by [`write_cells`].
pub fn read_cells<R: std::io::Read>(r: R) -> Result<Vec<ReportCell>, HarnessError> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}

/// Path of the JSON sidecar of a CSV report.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the CSV at `path` and the JSON sidecar next to it.
pub fn write_report(report: &RegretReport, path: &Path) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_cells(&report.cells, file)?;
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| HarnessError::ConfigInvalid(format!("cannot serialize report: {e}")))?;
    let side = sidecar_path(path);
    std::fs::write(&side, json + "\n").map_err(|e| HarnessError::io(&side, e))?;
    Ok(())
}

/// Reads the cells of a CSV report.
pub fn read_report_csv(path: &Path) -> Result<Vec<ReportCell>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_cells(file)
}
