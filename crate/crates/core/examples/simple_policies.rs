//! Simple-regret policies on the parallel model: the two-phase policy, its
//! no-backdoor and gamma-NB variants, and successive rejects.
//!
//! ```text
//! cargo run --release --example simple_policies -- [BUDGET]
//! ```

use causal_bandits::harness::{run_trial_with, Oracle};
use causal_bandits::policies::{PolicyConfig, PolicyKind};
use causal_bandits::scm::{make_parallel_model, ArmSet, CostSet, ParallelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget: f64 = std::env::args().nth(1).map_or(Ok(600.0), |b| b.parse())?;
    let scm = make_parallel_model(&ParallelParams::standard(7))?;
    let arms = ArmSet::for_graph(scm.graph());
    let costs = CostSet::uniform(&arms, 4.0)?;
    let oracle = Oracle::new(&scm, &costs)?;
    for kind in [
        PolicyKind::SimpleBudgeted,
        PolicyKind::SimpleNobackdoor,
        PolicyKind::GammaNb,
        PolicyKind::SuccessiveRejects,
    ] {
        let config = PolicyConfig::new(kind, budget, costs.clone(), 9);
        let outcome = run_trial_with(&scm, &config, &oracle)?;
        let chosen = outcome.trace.chosen.unwrap_or(0);
        let explored: Vec<&str> = outcome
            .trace
            .infrequent
            .iter()
            .map(|&a| oracle.labels[a].as_str())
            .collect();
        println!(
            "{:<20} chose {:<10} regret {:.3}  explored {:?}",
            kind.name(),
            oracle.labels[chosen],
            outcome.simple_regret.unwrap_or(f64::NAN),
            explored
        );
    }
    Ok(())
}
