//! One policy run scored against the exact oracle.

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::policies::{run_policy, PolicyConfig, PolicyTrace};
use crate::scm::{argmax, optimal_value, ratio_optimal_arm, ArmSet, CostSet, Scm};

/// Exact arm means of a model under one cost set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub labels: Vec<String>,
    pub means: Vec<f64>,
    pub costs: Vec<f64>,
    /// Arm with the largest mean.
    pub best_arm: usize,
    /// Arm with the largest mean per unit cost.
    pub ratio_best_arm: usize,
    /// Reward-per-cost gap of every arm to the ratio-optimal arm.
    pub deltas: Vec<f64>,
}

impl Oracle {
    pub fn new(scm: &Scm, costs: &CostSet) -> Result<Self, HarnessError> {
        let arms = ArmSet::for_graph(scm.graph());
        let means = scm.oracle_means(&arms)?;
        Ok(Self::from_means(
            arms.iter().map(|a| a.label(scm.graph())).collect(),
            means,
            costs,
        ))
    }

    pub fn from_means(labels: Vec<String>, means: Vec<f64>, costs: &CostSet) -> Self {
        let best_arm = argmax(means.iter().copied());
        let ratio_best_arm = ratio_optimal_arm(&means, costs);
        let top = means[ratio_best_arm] / costs.get(ratio_best_arm);
        let deltas = means
            .iter()
            .zip(costs.as_slice())
            .map(|(m, c)| top - m / c)
            .collect();
        Oracle {
            labels,
            means,
            costs: costs.as_slice().to_vec(),
            best_arm,
            ratio_best_arm,
            deltas,
        }
    }

    /// `mu(best) - mu(chosen)`.
    pub fn simple_regret(&self, chosen: usize) -> f64 {
        self.means[self.best_arm] - self.means[chosen]
    }

    /// `R*(B)` minus the expected reward of the pulled arms.
    pub fn cumulative_regret(&self, trace: &PolicyTrace, budget: f64) -> Result<f64, HarnessError> {
        let costs = CostSet::explicit(self.costs.clone())?;
        let best = optimal_value(&self.means, &costs, budget)?;
        let earned = neumaier_sum(trace.rounds.iter().map(|r| self.means[r.arm]));
        Ok(best - earned)
    }
}

/// Compensated sum, independent of how rounding errors accumulate.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A finished trial: the trace and the regret matching the policy's goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trace: PolicyTrace,
    pub simple_regret: Option<f64>,
    pub cumulative_regret: Option<f64>,
}

/// Runs `config` on `scm` and scores it with `oracle`.
pub fn run_trial_with(
    scm: &Scm,
    config: &PolicyConfig,
    oracle: &Oracle,
) -> Result<TrialOutcome, HarnessError> {
    let trace = run_policy(scm, config)?;
    let (simple_regret, cumulative_regret) = if config.kind.is_simple() {
        (trace.chosen.map(|a| oracle.simple_regret(a)), None)
    } else {
        (None, Some(oracle.cumulative_regret(&trace, config.budget)?))
    };
    Ok(TrialOutcome {
        trace,
        simple_regret,
        cumulative_regret,
    })
}

/// Runs `config` on `scm` and scores it against the exact arm means.
pub fn run_trial(scm: &Scm, config: &PolicyConfig) -> Result<TrialOutcome, HarnessError> {
    let oracle = Oracle::new(scm, &config.costs)?;
    run_trial_with(scm, config, &oracle)
}
