//! Successive rejects over all arms.

use crate::error::PolicyError;
use crate::scm::Scm;

use super::env::Env;
use super::trace::{Phase, PolicyTrace};
use super::PolicyConfig;

/// Best-arm identification by successive rejects, ignoring the graph.
///
/// With `K` arms, horizon `T = floor(B / mean cost)` and
/// `log_bar K = 1/2 + sum_{i=2..K} 1/i`, phase `k` of `K - 1` brings every
/// surviving arm to `ceil((T - K) / (log_bar K (K + 1 - k)))` pulls and then
/// rejects the arm with the lowest empirical mean (the highest index among
/// ties). Pulls are charged at each arm's cost; a phase stops early when its
/// next pull is unaffordable. Returns the last surviving arm.
pub fn run_successive_rejects(
    scm: &Scm,
    config: &PolicyConfig,
) -> Result<PolicyTrace, PolicyError> {
    config.check(scm)?;
    let mut env = Env::new(scm, config);
    let k = env.arms.len();
    if k < 2 {
        return Err(PolicyError::TooFewArms);
    }
    let all: f64 = config.costs.as_slice().iter().sum();
    if config.budget < all {
        return Err(PolicyError::InsufficientBudget {
            budget: config.budget,
            reason: format!("pulling every arm once costs {all}"),
        });
    }
    let horizon = (config.budget / (all / k as f64)).floor();
    let log_bar = 0.5 + (2..=k).map(|i| 1.0 / i as f64).sum::<f64>();
    let mut alive: Vec<usize> = (0..k).collect();
    let mut exhausted = false;
    for phase in 1..k {
        let quota = ((horizon - k as f64) / (log_bar * (k + 1 - phase) as f64))
            .ceil()
            .max(1.0) as usize;
        'fill: while !exhausted {
            let mut pulled = false;
            for &a in &alive {
                if env.log.count(a) >= quota {
                    continue;
                }
                if !env.affordable(a) {
                    exhausted = true;
                    break 'fill;
                }
                env.pull(a, Phase::Reject);
                pulled = true;
            }
            if !pulled {
                break;
            }
        }
        let mean = |a: usize| {
            let n = env.log.count(a);
            if n == 0 {
                0.0
            } else {
                env.log.successes(a) as f64 / n as f64
            }
        };
        let worst = alive
            .iter()
            .copied()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (pos, a)| match acc {
                Some((_, m)) if mean(a) > m => acc,
                _ => Some((pos, mean(a))),
            })
            .map(|(pos, _)| pos)
            .expect("at least two arms survive before the last phase");
        alive.remove(worst);
    }
    Ok(env.finish(Some(alive[0])))
}
