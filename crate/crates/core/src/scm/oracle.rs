//! Exact ground truth: arm means by enumeration and the knapsack benchmark.

use super::arms::{Arm, ArmSet, CostSet};
use super::model::{Scm, Var};
use crate::admg::{NodeId, Value};
use crate::error::ModelError;

/// Largest number of joint configurations the enumeration oracle visits.
pub const STATE_SPACE_CAP: f64 = (1u64 << 24) as f64;

impl Scm {
    /// Variables whose mechanisms can influence `targets` under `arm`, in an
    /// order where every variable follows its table parents.
    fn mechanism_closure(&self, arm: Arm, targets: &[NodeId]) -> Vec<Var> {
        let g = self.graph();
        let clamped = match arm {
            Arm::Intervene { node, .. } => Some(node),
            Arm::Observe => None,
        };
        let mut in_closure = vec![false; self.slot_count()];
        let mut stack: Vec<Var> = targets.iter().map(|&v| Var::Observed(v)).collect();
        while let Some(var) = stack.pop() {
            let slot = self.slot(var);
            if std::mem::replace(&mut in_closure[slot], true) {
                continue;
            }
            if let Var::Observed(v) = var {
                if Some(v) != clamped {
                    stack.extend(self.cpt(v).parents().iter().copied());
                }
            }
        }
        let latents = (0..self.latents().len())
            .map(Var::Latent)
            .filter(|&l| in_closure[self.slot(l)]);
        let observed = g
            .topological_order()
            .iter()
            .map(|&v| Var::Observed(v))
            .filter(|&v| in_closure[self.slot(v)]);
        latents.chain(observed).collect()
    }

    /// Exact joint distribution of `targets` under `arm`, as a dense table in
    /// mixed radix with the first target most significant.
    pub fn joint_marginal(&self, arm: Arm, targets: &[NodeId]) -> Result<Vec<f64>, ModelError> {
        let order = self.mechanism_closure(arm, targets);
        let configurations: f64 = order.iter().map(|&v| self.var_domain(v) as f64).product();
        if configurations > STATE_SPACE_CAP {
            return Err(ModelError::StateSpaceTooLarge {
                configurations,
                cap: STATE_SPACE_CAP,
            });
        }
        let mut strides = vec![0usize; targets.len()];
        let mut size = 1;
        for (k, &t) in targets.iter().enumerate().rev() {
            strides[k] = size;
            size *= self.graph().domain(t);
        }
        let mut table = vec![0.0; size];
        let mut values = vec![0 as Value; self.slot_count()];
        let mut walk = Walk {
            scm: self,
            arm,
            order: &order,
            targets,
            strides: &strides,
            values: &mut values,
            table: &mut table,
        };
        walk.visit(0, 1.0);
        Ok(table)
    }

    /// Exact `E[Y | arm]`.
    pub fn oracle_mean(&self, arm: Arm) -> Result<f64, ModelError> {
        Ok(self.joint_marginal(arm, &[self.graph().reward()])?[1])
    }

    /// Exact means of every arm, indexed like `arms`.
    pub fn oracle_means(&self, arms: &ArmSet) -> Result<Vec<f64>, ModelError> {
        arms.iter().map(|a| self.oracle_mean(a)).collect()
    }
}

struct Walk<'a> {
    scm: &'a Scm,
    arm: Arm,
    order: &'a [Var],
    targets: &'a [NodeId],
    strides: &'a [usize],
    values: &'a mut Vec<Value>,
    table: &'a mut Vec<f64>,
}

impl Walk<'_> {
    fn visit(&mut self, depth: usize, mass: f64) {
        let Some(&var) = self.order.get(depth) else {
            let index: usize = self
                .targets
                .iter()
                .zip(self.strides)
                .map(|(&t, &s)| usize::from(self.values[t.0]) * s)
                .sum();
            self.table[index] += mass;
            return;
        };
        let slot = self.scm.slot(var);
        match (var, self.arm) {
            (Var::Observed(v), Arm::Intervene { node, value }) if v == node => {
                self.values[slot] = value;
                self.visit(depth + 1, mass);
            }
            _ => {
                let probs: Vec<f64> = match var {
                    Var::Latent(l) => self.scm.latents()[l].probs.clone(),
                    Var::Observed(v) => self.scm.row_for(v, self.values).to_vec(),
                };
                for (k, p) in probs.into_iter().enumerate() {
                    if p > 0.0 {
                        self.values[slot] = k as Value;
                        self.visit(depth + 1, mass * p);
                    }
                }
            }
        }
    }
}

/// Index of the arm with the largest mean (lowest index on ties).
pub fn best_arm(means: &[f64]) -> usize {
    argmax(means.iter().copied())
}

/// Index of the arm with the largest mean per unit cost.
pub fn ratio_optimal_arm(means: &[f64], costs: &CostSet) -> usize {
    argmax(means.iter().enumerate().map(|(a, &m)| m / costs.get(a)))
}

/// Position of the first maximum.
pub fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.into_iter().enumerate() {
        if v > best.1 {
            best = (k, v);
        }
    }
    best.0
}

/// Integer cost of each arm, or an error naming the first non-integer one.
pub fn integer_costs(costs: &CostSet) -> Result<Vec<usize>, ModelError> {
    costs
        .as_slice()
        .iter()
        .enumerate()
        .map(|(a, &c)| {
            if c.fract() == 0.0 && c >= 1.0 {
                Ok(c as usize)
            } else {
                Err(ModelError::NonIntegerCosts {
                    arm: format!("#{a}"),
                    cost: c,
                })
            }
        })
        .collect()
}

/// Reward of the best pull-count mix within `budget`: the maximum of
/// `sum_a n_a * mean_a` over non-negative integers with `sum_a n_a * c_a <= budget`.
pub fn optimal_value(means: &[f64], costs: &CostSet, budget: f64) -> Result<f64, ModelError> {
    Ok(optimal_value_table(means, costs, budget)?
        .last()
        .copied()
        .unwrap_or(0.0))
}

/// `R*(b)` for every integer `b` from 0 to `floor(budget)`.
pub fn optimal_value_table(
    means: &[f64],
    costs: &CostSet,
    budget: f64,
) -> Result<Vec<f64>, ModelError> {
    let costs = integer_costs(costs)?;
    let budget = if budget > 0.0 {
        budget.floor() as usize
    } else {
        0
    };
    let mut best = vec![0.0; budget + 1];
    for b in 1..=budget {
        let mut value = best[b - 1];
        for (&c, &m) in costs.iter().zip(means) {
            if c <= b {
                value = f64::max(value, best[b - c] + m);
            }
        }
        best[b] = value;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admg::AdmgBuilder;
    use crate::scm::{make_parallel_model, Cpt, ParallelParams};

    fn costs(c: &[f64]) -> CostSet {
        CostSet::explicit(c.to_vec()).unwrap()
    }

    #[test]
    fn knapsack_examples() {
        let v = optimal_value(&[0.5, 0.8], &costs(&[1.0, 2.0]), 4.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert_eq!(
            optimal_value(&[0.5, 0.8], &costs(&[1.0, 2.0]), 0.0).unwrap(),
            0.0
        );
        // The observational arm is forced into the set, so give it no value.
        let v = optimal_value(&[0.0, 0.3], &costs(&[1.0, 2.0]), 7.0).unwrap();
        assert!((v - 0.9).abs() < 1e-12);
    }

    #[test]
    fn knapsack_rejects_fractional_costs() {
        assert!(matches!(
            optimal_value(&[0.5, 0.5], &costs(&[1.0, 2.5]), 5.0),
            Err(ModelError::NonIntegerCosts { .. })
        ));
    }

    #[test]
    fn parallel_oracle_matches_closed_form() {
        let scm = make_parallel_model(&ParallelParams::standard(50)).unwrap();
        let x1 = scm.graph().node("X1").unwrap();
        let x3 = scm.graph().node("X3").unwrap();
        assert!((scm.oracle_mean(Arm::Observe).unwrap() - 0.5).abs() < 1e-12);
        assert!((scm.oracle_mean(Arm::intervene(x1, 1)).unwrap() - 0.8).abs() < 1e-12);
        assert!((scm.oracle_mean(Arm::intervene(x3, 1)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn joint_marginal_sums_to_one() {
        let scm = make_parallel_model(&ParallelParams::standard(4)).unwrap();
        let g = scm.graph();
        let table = scm
            .joint_marginal(
                Arm::Observe,
                &[g.node("X1").unwrap(), g.node("X2").unwrap()],
            )
            .unwrap();
        assert_eq!(table.len(), 4);
        assert!((table.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((table[3] - 0.02 * 0.02).abs() < 1e-15);
    }

    #[test]
    fn long_chain_exceeds_the_cap() {
        let names: Vec<String> = (0..25).map(|i| format!("V{i}")).collect();
        let mut b = AdmgBuilder::new().nodes(names.clone());
        for w in names.windows(2) {
            b = b.directed(&w[0], &w[1]);
        }
        let g = b.reward("V24").build().unwrap();
        let mut cpts = vec![Cpt::constant(vec![0.5, 0.5])];
        for v in 1..25 {
            cpts.push(Cpt::new(
                vec![crate::scm::Var::Observed(NodeId(v - 1))],
                vec![vec![0.3, 0.7], vec![0.6, 0.4]],
            ));
        }
        let scm = Scm::new(g, vec![], cpts).unwrap();
        assert!(matches!(
            scm.oracle_mean(Arm::Observe),
            Err(ModelError::StateSpaceTooLarge { .. })
        ));
    }
}
