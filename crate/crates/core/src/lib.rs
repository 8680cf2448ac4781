//! Budgeted causal multi-armed bandits on graphs with hidden confounders and
//! non-uniform arm costs.
//!
//! * [`admg`] holds the causal graph and its structural algorithms.
//! * [`scm`] samples discrete structural causal models and computes exact
//!   arm means and the knapsack benchmark.
//! * [`estimators`] implements the reward and frequency estimators.
//! * [`policies`] runs the bandit policies and baselines.
//! * [`harness`] sweeps budgets or costs over seeded trials and writes reports.

pub mod admg;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod policies;
pub mod scm;
pub mod seed;

pub use error::{EstimatorError, GraphError, HarnessError, ModelError, PolicyError};
