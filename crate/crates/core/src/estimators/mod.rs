//! Reward and frequency estimators.
//!
//! * [`ObsLog`] records every pull.
//! * The factorized estimator pools an arm's pulls with plug-in estimates
//!   computed from disjoint slices of the observational rounds.
//! * The Bayes-net estimator learns smoothed tables on the target's reduced
//!   graph and reads the arm mean off them.
//! * [`FrequencyProfile`] and the thresholds [`compute_n_of_q`] and
//!   [`compute_m_prime`] decide which arms are too rare to learn from
//!   observation alone.

mod bayes;
mod factor;
mod factorized;
mod frequency;
mod log;
mod state;

pub use bayes::{
    default_threshold, estimate_mu_bayes, learn_bayes_net, mu_from_bayes_net, BayesNet,
};
pub use factor::ENUMERATION_CAP;
pub use factorized::{
    build_strata, estimate_mu_ix, factorized_stratum_estimate, slice_estimates, ucb_index,
    ObservationalIndex, SliceTables, StrataIndex,
};
pub use frequency::{
    compute_m_prime, compute_n_of_q, conditional_mean, estimate_q_hat, estimate_q_hat_unstratified,
    FrequencyEntry, FrequencyProfile,
};
pub use log::{update_mu0, ObsLog, Record};
pub use state::{ArmEstimate, EstimatorState};
