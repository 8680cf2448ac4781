//! Writes the round-by-round trace of one policy run as CSV.
//!
//! ```text
//! cargo run --example policy_trace > trace.csv
//! ```

use causal_bandits::admg::catalog;
use causal_bandits::policies::{run_policy, PolicyConfig, PolicyKind};
use causal_bandits::scm::{make_xor_model, ArmSet, CostSet};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scm = make_xor_model(&catalog::cumulative_n6_hidden(), &mut seed::from_seed(5))?;
    let costs = CostSet::uniform(&ArmSet::for_graph(scm.graph()), 2.0)?;
    let mut config = PolicyConfig::new(PolicyKind::CumulativeUcb, 120.0, costs, 1);
    config.snapshot_every = Some(20);
    let trace = run_policy(&scm, &config)?;
    trace.write_lines(std::io::stdout().lock())?;
    eprintln!(
        "{} rounds, {} guard records, {} snapshots",
        trace.rounds.len(),
        trace.guards.len(),
        trace.snapshots.len()
    );
    Ok(())
}
