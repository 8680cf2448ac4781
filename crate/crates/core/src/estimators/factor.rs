//! Conditioning-set keys and the truncated c-component factorization shared
//! by the factorized and Bayes-net estimators.

use crate::admg::{Admg, NodeId, Value};
use crate::error::EstimatorError;

/// Largest number of assignments the factorization sum will enumerate.
pub const ENUMERATION_CAP: usize = 1 << 20;

/// Mixed-radix index of a node's conditioning-set realization, with the
/// first conditioning node most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct KeyLayout {
    pub parents: Vec<NodeId>,
    strides: Vec<usize>,
    pub key_count: usize,
}

impl KeyLayout {
    pub fn new(parents: Vec<NodeId>, domains: &[usize]) -> Self {
        let mut strides = vec![0; parents.len()];
        let mut stride = 1;
        for (k, p) in parents.iter().enumerate().rev() {
            strides[k] = stride;
            stride *= domains[p.0];
        }
        KeyLayout {
            parents,
            strides,
            key_count: stride,
        }
    }

    /// Key of `values`, reading node `sub.0` as `sub.1` when given.
    pub fn key(&self, values: &[Value], sub: Option<(NodeId, Value)>) -> usize {
        self.parents
            .iter()
            .zip(&self.strides)
            .map(|(&p, &s)| {
                let v = match sub {
                    Some((node, value)) if node == p => value,
                    _ => values[p.0],
                };
                usize::from(v) * s
            })
            .sum()
    }

    /// Key of a realization listed in the order of `parents`.
    pub fn key_of(&self, z: &[Value]) -> usize {
        z.iter()
            .zip(&self.strides)
            .map(|(&v, &s)| usize::from(v) * s)
            .sum()
    }

    /// Every key whose realization agrees with `fixed` on the listed nodes.
    pub fn keys_matching(&self, domains: &[usize], fixed: &[(NodeId, Value)]) -> Vec<usize> {
        let mut keys = vec![0usize];
        for (&p, &s) in self.parents.iter().zip(&self.strides) {
            let choices: Vec<usize> = match fixed.iter().find(|(n, _)| *n == p) {
                Some(&(_, v)) => vec![usize::from(v)],
                None => (0..domains[p.0]).collect(),
            };
            keys = keys
                .iter()
                .flat_map(|&k| choices.iter().map(move |&c| k + c * s))
                .collect();
        }
        keys
    }
}

/// Conditioning layouts for every node, using the topological-prefix
/// c-component factorization of `g`.
pub(crate) fn factorization_layouts(g: &Admg) -> Vec<KeyLayout> {
    g.nodes()
        .map(|j| {
            KeyLayout::new(
                g.factorization_parents(j).into_iter().collect(),
                g.domains(),
            )
        })
        .collect()
}

/// The truncated factorization of `P(Y = 1 | do(X_i = x))`:
///
/// sum over assignments `w` of the other nodes with `Y = 1` and over `x'` of
/// the product of `P(v_j | z_j)` where nodes in the c-component of `X_i` read
/// `X_i = x'` and all other nodes read `X_i = x`.
pub(crate) struct Truncation<'a> {
    pub graph: &'a Admg,
    pub layouts: &'a [KeyLayout],
    pub in_component: &'a [bool],
    pub target: NodeId,
    pub value: Value,
}

impl Truncation<'_> {
    /// Errors when the enumeration would exceed [`ENUMERATION_CAP`].
    pub fn check_size(g: &Admg) -> Result<(), EstimatorError> {
        let mut total: usize = 1;
        for v in g.nodes().filter(|&v| v != g.reward()) {
            total = total.saturating_mul(g.domain(v));
            if total > ENUMERATION_CAP {
                return Err(EstimatorError::StateSpaceTooLarge(format!(
                    "{} nodes exceed {ENUMERATION_CAP} assignments",
                    g.len()
                )));
            }
        }
        Ok(())
    }

    /// Evaluates the sum with `prob(j, key, v)` as the conditional table.
    pub fn sum(&self, prob: impl Fn(usize, usize, Value) -> f64) -> f64 {
        let mut values = vec![0 as Value; self.graph.len()];
        self.descend(0, 1.0, &mut values, &prob)
    }

    fn descend(
        &self,
        depth: usize,
        acc: f64,
        values: &mut [Value],
        prob: &impl Fn(usize, usize, Value) -> f64,
    ) -> f64 {
        let order = self.graph.topological_order();
        let Some(&j) = order.get(depth) else {
            return acc;
        };
        let sub = (!self.in_component[j.0]).then_some((self.target, self.value));
        let key = self.layouts[j.0].key(values, sub);
        let candidates = if j == self.graph.reward() {
            1..2
        } else {
            0..self.graph.domain(j)
        };
        let mut total = 0.0;
        for v in candidates {
            let v = v as Value;
            let p = prob(j.0, key, v);
            if p == 0.0 {
                continue;
            }
            values[j.0] = v;
            total += self.descend(depth + 1, acc * p, values, prob);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admg::AdmgBuilder;

    #[test]
    fn keys_are_mixed_radix() {
        let domains = [2, 3, 2];
        let layout = KeyLayout::new(vec![NodeId(1), NodeId(2)], &domains);
        assert_eq!(layout.key_count, 6);
        assert_eq!(layout.key(&[0, 2, 1], None), 5);
        assert_eq!(layout.key(&[0, 2, 1], Some((NodeId(1), 0))), 1);
        assert_eq!(
            layout.keys_matching(&domains, &[(NodeId(2), 1)]),
            vec![1, 3, 5]
        );
    }

    #[test]
    fn chain_truncation_matches_hand_computation() {
        // X -> M -> Y with P(M=1|X) = {0.2, 0.7} and P(Y=1|M) = {0.1, 0.9}.
        let g = AdmgBuilder::new()
            .nodes(["X", "M", "Y"])
            .directed("X", "M")
            .directed("M", "Y")
            .reward("Y")
            .build()
            .unwrap();
        let layouts = factorization_layouts(&g);
        let in_component = [true, false, false];
        let t = Truncation {
            graph: &g,
            layouts: &layouts,
            in_component: &in_component,
            target: NodeId(0),
            value: 1,
        };
        let m1 = [0.2, 0.7];
        let y1 = [0.1, 0.9];
        let mu = t.sum(|j, key, v| {
            let p1 = match j {
                0 => 0.5,
                1 => m1[key],
                _ => y1[key],
            };
            if v == 1 {
                p1
            } else {
                1.0 - p1
            }
        });
        let expected = 0.7 * 0.9 + 0.3 * 0.1;
        assert!((mu - expected).abs() < 1e-12);
    }
}
