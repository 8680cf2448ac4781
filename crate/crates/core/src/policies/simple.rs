//! Two-phase simple-regret policies.
//!
//! Half the budget is spent observing. Arms whose estimated frequency is too
//! low to learn from observation are then pulled directly with the other
//! half; every other arm keeps its observational estimate.

use crate::admg::{Admg, NodeId};
use crate::error::PolicyError;
use crate::estimators::{
    build_strata, compute_m_prime, compute_n_of_q, conditional_mean, default_threshold,
    estimate_mu_bayes, slice_estimates, update_mu0, FrequencyProfile, ObsLog, ObservationalIndex,
};
use crate::scm::{Arm, ArmSet, Scm};
use crate::seed::{self, Purpose};

use super::env::Env;
use super::trace::{Phase, PolicyTrace};
use super::{argmax_some, EstimatorPath, PolicyConfig};

/// Where interventional means come from in the observation phase.
#[derive(Debug, Clone, Copy)]
enum MeanSource {
    /// Identification through the graph.
    Graph(EstimatorPath),
    /// Conditional mean of the reward given the treatment value.
    Conditional,
}

/// How the infrequent arms are selected.
#[derive(Debug, Clone, Copy)]
enum Selection {
    /// `q^k <= 1 / n(q)` with the cost-weighted threshold.
    CostWeighted,
    /// `q < 1 / m'(q)` with the unweighted threshold.
    Unweighted,
}

#[derive(Debug, Clone, Copy)]
struct Variant {
    stratified: bool,
    means: MeanSource,
    selection: Selection,
}

/// Two-phase best-arm identification on general graphs.
///
/// Observes for `floor(B / 2)` rounds, estimates every interventional mean
/// from the observations and every arm's stratified frequency `q`, and
/// selects the infrequent arms `q^k <= 1 / n(q)`. If none is infrequent the
/// rest of the budget is spent observing and all estimates are recomputed;
/// otherwise each infrequent arm is pulled `floor(B / (2 sum c))` times,
/// leftover budget buys extra pulls in cost-ascending order, and those
/// arms are re-estimated from their own pulls only. Returns the arm with the
/// largest estimate. Arms without an observational estimate are always
/// treated as infrequent.
pub fn run_simple_budgeted(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    two_phase(
        scm,
        config,
        Variant {
            stratified: true,
            means: MeanSource::Graph(config.estimator),
            selection: Selection::CostWeighted,
        },
    )
}

fn require_no_backdoor(g: &Admg) -> Result<(), PolicyError> {
    for &i in g.intervenable() {
        if g.has_unblocked_backdoor(i)
            .map_err(crate::error::ModelError::from)?
        {
            return Err(PolicyError::GraphNotNoBackdoor(g.name(i).to_string()));
        }
    }
    Ok(())
}

/// [`run_simple_budgeted`] for graphs without backdoor paths: means are
/// conditional means, frequencies are unstratified and every exponent is one.
pub fn run_simple_nobackdoor(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    require_no_backdoor(scm.graph())?;
    two_phase(
        scm,
        config,
        Variant {
            stratified: false,
            means: MeanSource::Conditional,
            selection: Selection::CostWeighted,
        },
    )
}

/// Baseline for graphs without backdoor paths and with one common
/// interventional cost: as [`run_simple_nobackdoor`] but the infrequent arms
/// are those with `q < 1 / m'(q)`.
pub fn run_gamma_nb(scm: &Scm, config: &PolicyConfig) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    require_no_backdoor(scm.graph())?;
    if config.costs.len() > 1 && config.costs.uniform_interventional().is_none() {
        return Err(PolicyError::NonUniformCost);
    }
    two_phase(
        scm,
        config,
        Variant {
            stratified: false,
            means: MeanSource::Conditional,
            selection: Selection::Unweighted,
        },
    )
}

fn target(arms: &ArmSet, a: usize) -> (NodeId, crate::admg::Value) {
    match arms.get(a) {
        Arm::Intervene { node, value } => (node, value),
        Arm::Observe => unreachable!("arm 0 is the observational arm"),
    }
}

/// Observational estimate of every arm; `None` where none is available.
fn estimate_all(
    log: &ObsLog,
    g: &Admg,
    arms: &ArmSet,
    source: MeanSource,
    config: &PolicyConfig,
) -> Result<Vec<Option<f64>>, PolicyError> {
    let mut out = vec![Some(update_mu0(log)?)];
    let threshold = config
        .threshold
        .unwrap_or_else(|| default_threshold(log.count(0)));
    let index = match source {
        MeanSource::Graph(EstimatorPath::Factorized) => Some(ObservationalIndex::build(
            log,
            g,
            seed::derive_seed(config.seed, 0, Purpose::Estimator),
        )),
        _ => None,
    };
    for a in arms.interventional() {
        let (i, x) = target(arms, a);
        let estimate = match source {
            MeanSource::Conditional => conditional_mean(log, i, x),
            MeanSource::Graph(_)
                if !g
                    .identifiable_sufficient(i)
                    .map_err(crate::error::ModelError::from)? =>
            {
                None
            }
            MeanSource::Graph(EstimatorPath::BayesNet) => {
                Some(estimate_mu_bayes(log, g, i, x, threshold)?)
            }
            MeanSource::Graph(EstimatorPath::Factorized) => {
                let index = index.as_ref().expect("index is built for this path");
                let strata = build_strata(index, g, i, x)?;
                let ys = slice_estimates(g, index, &strata, log)?;
                (!ys.is_empty()).then(|| ys.iter().sum::<f64>() / ys.len() as f64)
            }
        };
        out.push(estimate);
    }
    Ok(out)
}

fn two_phase(
    scm: &Scm,
    config: &PolicyConfig,
    variant: Variant,
) -> Result<PolicyTrace, PolicyError> {
    let g = scm.graph();
    let mut env = Env::new(scm, config);
    let k = env.arms.len();
    if k < 2 {
        return Err(PolicyError::TooFewArms);
    }
    let budget = config.budget;
    if budget < 2.0 {
        return Err(PolicyError::InsufficientBudget {
            budget,
            reason: "the observation phase needs at least one round".into(),
        });
    }
    let observe_rounds = (budget / 2.0).floor() as u64;
    for _ in 0..observe_rounds {
        env.pull(0, Phase::Observe);
    }

    let mut estimates = estimate_all(&env.log, g, &env.arms, variant.means, config)?;
    let mut profile = if variant.stratified {
        FrequencyProfile::stratified(&env.log, g, &env.arms, budget)?
    } else {
        FrequencyProfile::unstratified(&env.log, &env.arms, budget)
    };
    for e in &mut profile.entries {
        if estimates[e.arm].is_none() {
            e.q = 0.0;
        }
    }
    env.trace.unidentified = (1..k).filter(|&a| estimates[a].is_none()).collect();

    let infrequent: Vec<usize> = match variant.selection {
        Selection::CostWeighted => {
            let n = compute_n_of_q(&profile, &config.costs) as f64;
            profile
                .entries
                .iter()
                .filter(|e| e.q.powi(e.k as i32) <= 1.0 / n)
                .map(|e| e.arm)
                .collect()
        }
        Selection::Unweighted => {
            let m = compute_m_prime(&profile) as f64;
            profile
                .entries
                .iter()
                .filter(|e| e.q < 1.0 / m)
                .map(|e| e.arm)
                .collect()
        }
    };

    env.trace.infrequent = infrequent.clone();
    if infrequent.is_empty() {
        while env.affordable(0) {
            env.pull(0, Phase::Observe);
        }
        estimates = estimate_all(&env.log, g, &env.arms, variant.means, config)?;
    } else {
        let total: f64 = infrequent.iter().map(|&a| config.costs.get(a)).sum();
        let pulls = (budget / (2.0 * total)).floor() as u64;
        for _ in 0..pulls {
            for &a in &infrequent {
                env.pull(a, Phase::Explore);
            }
        }
        let mut by_cost = infrequent.clone();
        by_cost.sort_by(|&a, &b| config.costs.get(a).total_cmp(&config.costs.get(b)));
        loop {
            let mut pulled = false;
            for &a in &by_cost {
                if env.affordable(a) {
                    env.pull(a, Phase::Leftover);
                    pulled = true;
                }
            }
            if !pulled {
                break;
            }
        }
        for &a in &infrequent {
            let n = env.log.count(a);
            if n > 0 {
                estimates[a] = Some(env.log.successes(a) as f64 / n as f64);
            }
        }
    }
    let chosen = argmax_some(estimates).unwrap_or(0);
    Ok(env.finish(Some(chosen)))
}
