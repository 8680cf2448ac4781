//! Cumulative-regret policies.

use crate::error::PolicyError;
use crate::estimators::EstimatorState;
use crate::scm::{CostSet, Scm};
use crate::seed::{self, Purpose};

use super::env::Env;
use super::trace::{GuardRecord, Phase, PolicyTrace, Snapshot};
use super::{argmax_some, PolicyConfig};

fn init_cost(costs: &CostSet, budget: f64) -> Result<(), PolicyError> {
    let init: f64 = costs.as_slice().iter().sum();
    if budget < init {
        return Err(PolicyError::InsufficientBudget {
            budget,
            reason: format!("pulling every arm once costs {init}"),
        });
    }
    Ok(())
}

/// Budgeted UCB with observational sharing.
///
/// After one pull of every arm, each round observes when fewer than
/// `beta^2 ln t` observations exist or the budget cannot cover the cheapest
/// intervention, and otherwise pulls the affordable arm with the largest
/// upper confidence bound (divided by its cost unless
/// `cost_normalized` is off). After every round, `beta` shrinks towards
/// `2 sqrt(2) / gap` once some arm's estimated reward per cost beats the
/// observational mean, capped at `sqrt(ln t)`. The run ends when less than
/// one unit of budget remains.
pub fn run_cumulative_ucb(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    causal_ucb(scm, config, config.costs.clone())
}

/// [`run_cumulative_ucb`] choosing arms as if every cost were one, while
/// still charging true costs. Restricted to graphs without confounders.
pub fn run_uniform_cost_causal_ucb(
    scm: &Scm,
    config: &PolicyConfig,
) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    if scm.graph().has_bidirected_edges() {
        return Err(PolicyError::GraphHasHiddenConfounders);
    }
    causal_ucb(scm, config, config.costs.unit())
}

fn causal_ucb(
    scm: &Scm,
    config: &PolicyConfig,
    index_costs: CostSet,
) -> Result<PolicyTrace, PolicyError> {
    let g = scm.graph();
    let mut env = Env::new(scm, config);
    let k = env.arms.len();
    if k < 2 {
        return Err(PolicyError::TooFewArms);
    }
    init_cost(&config.costs, config.budget)?;
    let estimator_seed = seed::derive_seed(config.seed, 0, Purpose::Estimator);
    let mut state = EstimatorState::new(g, &env.arms, estimator_seed)?;
    env.trace.unidentified = state.unidentified().to_vec();
    for a in 0..k {
        env.pull(a, Phase::Init);
    }
    state.update(g, &env.log)?;

    let min_cost = config.costs.min_interventional();
    let scale = |a: usize| {
        if config.cost_normalized {
            index_costs.get(a)
        } else {
            1.0
        }
    };
    let mut beta = 1.0f64;
    while env.remaining >= 1.0 {
        let t = env.t + 1;
        let ln_t = (t as f64).ln();
        let observations = env.log.count(0);
        let forced = (observations as f64) < beta * beta * ln_t || env.remaining < min_cost;
        env.trace.guards.push(GuardRecord {
            t,
            observations,
            beta,
            budget: env.remaining,
            forced,
        });
        let arm = if forced {
            0
        } else {
            let indices = (0..k)
                .map(|a| {
                    if !env.affordable(a) {
                        return Ok(None);
                    }
                    Ok(Some(state.ucb(&env.log, a, t as f64)? / scale(a)))
                })
                .collect::<Result<Vec<_>, PolicyError>>()?;
            argmax_some(indices).unwrap_or(0)
        };
        env.pull(arm, Phase::Main);
        state.update(g, &env.log)?;

        let mu = (0..k)
            .map(|a| Ok(state.estimate(&env.log, a)?.mu))
            .collect::<Result<Vec<f64>, PolicyError>>()?;
        let best = argmax_some((0..k).map(|a| Some(mu[a] / index_costs.get(a)))).unwrap_or(0);
        let best_ratio = mu[best] / index_costs.get(best);
        if mu[0] < best_ratio {
            beta = (2.0 * 2f64.sqrt() / (best_ratio - mu[0])).min(ln_t.sqrt());
        }
        if let Some(every) = config.snapshot_every {
            if every > 0 && t.is_multiple_of(every) {
                let mut snap = Snapshot {
                    t,
                    mu: mu.clone(),
                    ucb: Vec::with_capacity(k),
                    counts: Vec::with_capacity(k),
                };
                for a in 0..k {
                    let e = state.estimate(&env.log, a)?;
                    snap.ucb.push(state.ucb(&env.log, a, t as f64)?);
                    snap.counts.push(e.count);
                }
                env.trace.snapshots.push(snap);
            }
        }
    }
    Ok(env.finish(None))
}

/// Cost-normalized UCB over all arms, each estimated from its own pulls
/// only: after one pull of every arm, pull the affordable arm maximizing
/// `(mean + sqrt(2 ln t / n)) / cost` until no arm is affordable.
pub fn run_budgeted_kube(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    let mut env = Env::new(scm, config);
    let k = env.arms.len();
    init_cost(&config.costs, config.budget)?;
    for a in 0..k {
        env.pull(a, Phase::Init);
    }
    loop {
        let t = (env.t + 1) as f64;
        let indices = (0..k).map(|a| {
            env.affordable(a).then(|| {
                let n = env.log.count(a) as f64;
                let mean = env.log.successes(a) as f64 / n;
                (mean + (2.0 * t.ln() / n).sqrt()) / config.costs.get(a)
            })
        });
        let Some(arm) = argmax_some(indices.collect::<Vec<_>>()) else {
            break;
        };
        env.pull(arm, Phase::Main);
    }
    Ok(env.finish(None))
}
