//! Bandit policies and the baselines they are compared against.
//!
//! Every policy takes a model and a [`PolicyConfig`] and returns a
//! [`PolicyTrace`]. The budget is charged at each arm's true cost; ties in
//! every argmax go to the lowest arm index, so a (config, seed) pair always
//! produces the same trace.

mod cumulative;
mod env;
mod rejects;
mod simple;
mod trace;

use serde::{Deserialize, Serialize};

use crate::error::PolicyError;
use crate::scm::{CostSet, Scm};

pub use cumulative::{run_budgeted_kube, run_cumulative_ucb, run_uniform_cost_causal_ucb};
pub use rejects::run_successive_rejects;
pub use simple::{run_gamma_nb, run_simple_budgeted, run_simple_nobackdoor};
pub use trace::{fnv1a, GuardRecord, Phase, PolicyTrace, Round, Snapshot};

/// Which policy to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    /// Budgeted cumulative-regret UCB with observational sharing.
    CumulativeUcb,
    /// The cumulative policy with costs ignored when choosing arms.
    UniformCostCausalUcb,
    /// Cost-normalized UCB over arms, without the causal graph.
    BudgetedKube,
    /// Two-phase budgeted best-arm identification on general graphs.
    SimpleBudgeted,
    /// The two-phase policy specialized to graphs without backdoor paths.
    SimpleNobackdoor,
    /// Two-phase baseline with the unweighted infrequency threshold.
    GammaNb,
    /// Successive rejects over all arms.
    SuccessiveRejects,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 7] = [
        PolicyKind::CumulativeUcb,
        PolicyKind::UniformCostCausalUcb,
        PolicyKind::BudgetedKube,
        PolicyKind::SimpleBudgeted,
        PolicyKind::SimpleNobackdoor,
        PolicyKind::GammaNb,
        PolicyKind::SuccessiveRejects,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::CumulativeUcb => "cumulative-ucb",
            PolicyKind::UniformCostCausalUcb => "uniform-cost-causal-ucb",
            PolicyKind::BudgetedKube => "budgeted-kube",
            PolicyKind::SimpleBudgeted => "simple-budgeted",
            PolicyKind::SimpleNobackdoor => "simple-nobackdoor",
            PolicyKind::GammaNb => "gamma-nb",
            PolicyKind::SuccessiveRejects => "successive-rejects",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the policy returns an arm (simple regret) rather than
    /// accumulating reward.
    pub fn is_simple(self) -> bool {
        matches!(
            self,
            PolicyKind::SimpleBudgeted
                | PolicyKind::SimpleNobackdoor
                | PolicyKind::GammaNb
                | PolicyKind::SuccessiveRejects
        )
    }
}

/// How the two-phase policy estimates arm means from observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorPath {
    /// Smoothed Bayes net on the target's reduced graph.
    #[default]
    BayesNet,
    /// Mean of the sliced plug-in estimates on the full graph.
    Factorized,
}

/// Settings of one policy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub budget: f64,
    pub costs: CostSet,
    pub seed: u64,
    /// Divide the cumulative policy's index by the arm cost. When off the
    /// raw upper confidence bound is maximized.
    #[serde(default = "default_true")]
    pub cost_normalized: bool,
    #[serde(default)]
    pub estimator: EstimatorPath,
    /// Count threshold of the Bayes-net tables; defaults to the square root
    /// of the number of observations.
    #[serde(default)]
    pub threshold: Option<usize>,
    /// Record estimator snapshots every this many rounds.
    #[serde(default)]
    pub snapshot_every: Option<u64>,
}

fn default_true() -> bool {
    true
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind, budget: f64, costs: CostSet, seed: u64) -> Self {
        PolicyConfig {
            kind,
            budget,
            costs,
            seed,
            cost_normalized: true,
            estimator: EstimatorPath::default(),
            threshold: None,
            snapshot_every: None,
        }
    }

    /// Stable hash of the configuration, recorded in trace headers.
    pub fn hash(&self) -> u64 {
        fnv1a(serde_json::to_string(self).unwrap_or_default().as_bytes())
    }

    pub(crate) fn check(&self, scm: &Scm) -> Result<(), PolicyError> {
        let expected = crate::scm::ArmSet::for_graph(scm.graph()).len();
        if self.costs.len() != expected {
            return Err(PolicyError::CostMismatch {
                expected,
                got: self.costs.len(),
            });
        }
        if !self.budget.is_finite() || self.budget < 0.0 {
            return Err(PolicyError::InsufficientBudget {
                budget: self.budget,
                reason: "budget must be a finite non-negative number".into(),
            });
        }
        Ok(())
    }
}

/// Index of the largest value, lowest index on ties, skipping `None`.
pub(crate) fn argmax_some(values: impl IntoIterator<Item = Option<f64>>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (a, v) in values.into_iter().enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((a, v));
            }
        }
    }
    best.map(|(a, _)| a)
}

/// Runs the policy named by `config.kind`.
pub fn run_policy(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    match config.kind {
        PolicyKind::CumulativeUcb => run_cumulative_ucb(scm, config),
        PolicyKind::UniformCostCausalUcb => run_uniform_cost_causal_ucb(scm, config),
        PolicyKind::BudgetedKube => run_budgeted_kube(scm, config),
        PolicyKind::SimpleBudgeted => run_simple_budgeted(scm, config),
        PolicyKind::SimpleNobackdoor => run_simple_nobackdoor(scm, config),
        PolicyKind::GammaNb => run_gamma_nb(scm, config),
        PolicyKind::SuccessiveRejects => run_successive_rejects(scm, config),
    }
}
