//! Error types, one enum per subsystem.

use thiserror::Error;

/// Errors raised while building, parsing or transforming a causal graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("directed part of the graph contains a cycle through `{0}`")]
    DirectedCycle(String),
    #[error("node `{name}` has domain size {size}; sizes must be in 2..=255")]
    InvalidDomain { name: String, size: usize },
    #[error("reward node `{0}` cannot be intervenable")]
    RewardIntervenable(String),
    #[error("keep set is invalid: {0}")]
    KeepSetInvalid(String),
    #[error("node `{0}` is not intervenable")]
    NotIntervenable(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Errors raised by the structural causal model and its oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("conditional table for `{node}` is invalid: {reason}")]
    InvalidCpt { node: String, reason: String },
    #[error("latent `{0}` is invalid")]
    InvalidLatent(String),
    #[error("invalid probability {value} for {what}")]
    InvalidProbability { what: String, value: f64 },
    #[error("joint state space of {configurations} configurations exceeds the cap of {cap}")]
    StateSpaceTooLarge { configurations: f64, cap: f64 },
    #[error("the knapsack benchmark needs integer costs; arm {arm} costs {cost}")]
    NonIntegerCosts { arm: String, cost: f64 },
    #[error("graph must be binary for this generator; `{0}` is not")]
    NonBinaryGraph(String),
    #[error("reward node `{0}` must be binary")]
    NonBinaryReward(String),
    #[error("invalid cost {cost} for arm {arm}")]
    InvalidCost { arm: String, cost: f64 },
    #[error("arm {0} is not in this model")]
    UnknownArm(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Errors raised by reward and frequency estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("no observational records")]
    NoObservations,
    #[error("no interventional records and no complete observational slices")]
    NoEffectiveSamples,
    #[error("effective count must be at least one")]
    ZeroCount,
    #[error("round index must be at least one")]
    ZeroRound,
    #[error("slice {slice} is out of range ({slices} slices available)")]
    EmptySlice { slice: usize, slices: usize },
    #[error("estimator state space too large: {0}")]
    StateSpaceTooLarge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by bandit policies.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("budget {budget} is insufficient: {reason}")]
    InsufficientBudget { budget: f64, reason: String },
    #[error("graph has an unblocked backdoor path from `{0}` to the reward")]
    GraphNotNoBackdoor(String),
    #[error("interventional costs are not uniform")]
    NonUniformCost,
    #[error("graph has hidden confounders (bidirected edges)")]
    GraphHasHiddenConfounders,
    #[error("policy needs at least two arms")]
    TooFewArms,
    #[error("cost set has {got} entries but the model has {expected} arms")]
    CostMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors raised by the experiment harness.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    ConfigInvalid(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl HarnessError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

/// Converts a byte offset into a 1-based (line, column) pair.
pub(crate) fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}
