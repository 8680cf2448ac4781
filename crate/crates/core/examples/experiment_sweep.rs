//! Runs a small budget sweep from an inline config and writes the CSV report
//! with its JSON sidecar.
//!
//! ```text
//! cargo run --release --example experiment_sweep -- [OUT.csv]
//! ```

use std::path::{Path, PathBuf};

use causal_bandits::harness::{run_sweep, write_report, ExperimentConfig};

const CONFIG: &str = r#"
name = "parallel-demo"
trials = 10
seed = 1

[model]
kind = "parallel"
n = 7

[costs]
kind = "random"
choices = [2, 3, 4, 5]

[sweep]
budgets = [200, 400, 800]

[[policy]]
kind = "simple-budgeted"

[[policy]]
kind = "successive-rejects"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map_or_else(
        || std::env::temp_dir().join("parallel-demo.csv"),
        PathBuf::from,
    );
    let config = ExperimentConfig::parse(CONFIG, Path::new("."))?;
    let report = run_sweep(&config, 0)?;
    for cell in &report.cells {
        println!(
            "{:<20} B={:<5} regret {:.4} ± {:.4}",
            cell.policy, cell.sweep_value, cell.mean_regret, cell.stderr
        );
    }
    write_report(&report, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
