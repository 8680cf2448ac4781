//! Model generators for the experiment families.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::model::{Cpt, LatentVar, Scm, Var};
use crate::admg::{catalog, Admg, NodeId};
use crate::error::ModelError;

/// Probability that a non-root node equals the XOR of its inputs.
pub const XOR_FIDELITY: f64 = 0.8;

/// One Bernoulli(`p`) latent per bidirected edge, named `U_<a>_<b>`.
fn edge_latents(g: &Admg, p: impl FnMut() -> f64) -> Vec<LatentVar> {
    let mut p = p;
    g.bidirected_edges()
        .into_iter()
        .map(|(a, b)| LatentVar::bernoulli(format!("U_{}_{}", g.name(a), g.name(b)), (a, b), p()))
        .collect()
}

/// Graph parents of `v` followed by the latents touching it.
fn full_inputs(g: &Admg, latents: &[LatentVar], v: NodeId) -> Vec<Var> {
    let mut inputs: Vec<Var> = g.parents(v).iter().map(|&p| Var::Observed(p)).collect();
    for (l, latent) in latents.iter().enumerate() {
        if latent.between.0 == v || latent.between.1 == v {
            inputs.push(Var::Latent(l));
        }
    }
    inputs
}

/// XOR model: a node with any observed or latent input equals the XOR of its
/// inputs with probability 0.8 and the XNOR otherwise. A node with no inputs
/// is Bernoulli(0.5 + 0.5 e) with `e ~ U(0, 1)` drawn once here. Latents are
/// Bernoulli(0.5).
pub fn make_xor_model<R: Rng + ?Sized>(g: &Admg, rng: &mut R) -> Result<Scm, ModelError> {
    if let Some(v) = g.nodes().find(|&v| g.domain(v) != 2) {
        return Err(ModelError::NonBinaryGraph(g.name(v).to_string()));
    }
    let latents = edge_latents(g, || 0.5);
    let mut cpts = Vec::with_capacity(g.len());
    for v in g.nodes() {
        let inputs = full_inputs(g, &latents, v);
        if inputs.is_empty() {
            let e: f64 = rng.gen();
            let p = 0.5 + 0.5 * e;
            cpts.push(Cpt::constant(vec![1.0 - p, p]));
            continue;
        }
        let rows = (0..1usize << inputs.len())
            .map(|row| {
                let p = if row.count_ones() % 2 == 1 {
                    XOR_FIDELITY
                } else {
                    1.0 - XOR_FIDELITY
                };
                vec![1.0 - p, p]
            })
            .collect();
        cpts.push(Cpt::new(inputs, rows));
    }
    Scm::new(g.clone(), latents, cpts)
}

/// Parameters of the parallel-graph model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelParams {
    /// `P(X_i = 1)` for each of the `N` parents.
    pub probs: Vec<f64>,
    /// Reward lift when `X_1 = 1`.
    pub epsilon: f64,
}

impl ParallelParams {
    /// `p_1 = p_2 = 0.02`, every other `p_i = 0.5`, `epsilon = 0.3`.
    pub fn standard(n: usize) -> Self {
        let probs = (0..n).map(|i| if i < 2 { 0.02 } else { 0.5 }).collect();
        ParallelParams {
            probs,
            epsilon: 0.3,
        }
    }

    /// Reward drop when `X_1 = 0`, chosen so that `E[Y] = 0.5`.
    pub fn epsilon_prime(&self) -> f64 {
        let p1 = self.probs[0];
        if p1 >= 1.0 {
            0.0
        } else {
            p1 * self.epsilon / (1.0 - p1)
        }
    }
}

/// Parallel model: `X_i ~ Bernoulli(p_i)` independently, and
/// `Y ~ Bernoulli(0.5 + epsilon)` if `X_1 = 1`, else
/// `Bernoulli(0.5 - epsilon')` with `epsilon' = p_1 epsilon / (1 - p_1)`.
///
/// `Y`'s table depends on `X_1` only; the other parents are inert.
pub fn make_parallel_model(params: &ParallelParams) -> Result<Scm, ModelError> {
    let n = params.probs.len();
    if n == 0 {
        return Err(ModelError::InvalidProbability {
            what: "parallel model needs at least one parent".into(),
            value: 0.0,
        });
    }
    for (i, &p) in params.probs.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(ModelError::InvalidProbability {
                what: format!("P(X{} = 1)", i + 1),
                value: p,
            });
        }
    }
    let high = 0.5 + params.epsilon;
    let low = 0.5 - params.epsilon_prime();
    for (what, p) in [("P(Y = 1 | X1 = 1)", high), ("P(Y = 1 | X1 = 0)", low)] {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(ModelError::InvalidProbability {
                what: what.into(),
                value: p,
            });
        }
    }
    let g = catalog::parallel(n);
    let mut cpts: Vec<Cpt> = params
        .probs
        .iter()
        .map(|&p| Cpt::constant(vec![1.0 - p, p]))
        .collect();
    cpts.push(Cpt::new(
        vec![Var::Observed(NodeId(0))],
        vec![vec![1.0 - low, low], vec![1.0 - high, high]],
    ));
    Scm::new(g, vec![], cpts)
}

/// Model with every table row drawn uniformly from the simplex and binary
/// latents with `P(U = 1) ~ U(0.1, 0.9)`. Tables use all graph inputs.
pub fn make_random_model<R: Rng + ?Sized>(g: &Admg, rng: &mut R) -> Result<Scm, ModelError> {
    let latents = edge_latents(g, || rng.gen_range(0.1..0.9));
    let mut cpts = Vec::with_capacity(g.len());
    for v in g.nodes() {
        let inputs = full_inputs(g, &latents, v);
        let rows: usize = inputs
            .iter()
            .map(|&var| match var {
                Var::Observed(u) => g.domain(u),
                Var::Latent(_) => 2,
            })
            .product();
        let table = (0..rows)
            .map(|_| random_simplex_point(g.domain(v), rng))
            .collect();
        cpts.push(Cpt::new(inputs, table));
    }
    Scm::new(g.clone(), latents, cpts)
}

/// Uniform point of the probability simplex, normalized so that the entries
/// sum to one up to rounding in the last place.
fn random_simplex_point<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let weights: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let mut point: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = point[..k - 1].iter().sum();
    point[k - 1] = (1.0 - head).max(0.0);
    point
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admg::AdmgBuilder;
    use crate::scm::Arm;
    use crate::seed;

    #[test]
    fn xor_rows_follow_parity() {
        let g = AdmgBuilder::new()
            .nodes(["A", "B", "Y"])
            .directed("A", "Y")
            .directed("B", "Y")
            .reward("Y")
            .build()
            .unwrap();
        let scm = make_xor_model(&g, &mut seed::from_seed(1)).unwrap();
        let rows = scm.cpt(g.reward()).rows();
        // Row index is A * 2 + B.
        assert_eq!(rows[0b10][1], 0.8);
        assert_eq!(rows[0b11][1], 1.0 - 0.8);
        for v in [NodeId(0), NodeId(1)] {
            let p = scm.cpt(v).rows()[0][1];
            assert!((0.5..=1.0).contains(&p));
        }
    }

    #[test]
    fn xor_latents_enter_like_parents() {
        let g = catalog::cumulative_n6_hidden();
        let scm = make_xor_model(&g, &mut seed::from_seed(2)).unwrap();
        assert_eq!(scm.latents().len(), 2);
        let x1 = g.node("X1").unwrap();
        // X1 has no observed parents but is confounded with X2.
        assert_eq!(scm.cpt(x1).parents(), &[Var::Latent(0)]);
    }

    #[test]
    fn xor_rejects_non_binary_graphs() {
        let g = AdmgBuilder::new()
            .node_with_domain("A", 3)
            .node("Y")
            .directed("A", "Y")
            .reward("Y")
            .build()
            .unwrap();
        assert!(matches!(
            make_xor_model(&g, &mut seed::from_seed(0)),
            Err(ModelError::NonBinaryGraph(_))
        ));
    }

    #[test]
    fn parallel_edge_cases() {
        let flat = ParallelParams {
            probs: vec![0.02, 0.02, 0.5],
            epsilon: 0.0,
        };
        let scm = make_parallel_model(&flat).unwrap();
        let arms = crate::scm::ArmSet::for_graph(scm.graph());
        for mu in scm.oracle_means(&arms).unwrap() {
            assert!((mu - 0.5).abs() < 1e-12);
        }
        let sure = ParallelParams {
            probs: vec![1.0],
            epsilon: 0.3,
        };
        let scm = make_parallel_model(&sure).unwrap();
        assert!((scm.oracle_mean(Arm::Observe).unwrap() - 0.8).abs() < 1e-12);
        let bad = ParallelParams {
            probs: vec![0.5],
            epsilon: 0.7,
        };
        assert!(matches!(
            make_parallel_model(&bad),
            Err(ModelError::InvalidProbability { .. })
        ));
    }

    #[test]
    fn parallel_interventional_sampling_matches_oracle() {
        let scm = make_parallel_model(&ParallelParams::standard(50)).unwrap();
        let x1 = scm.graph().node("X1").unwrap();
        let mut rng = seed::from_seed(5);
        let n = 100_000;
        let hits: u32 = (0..n)
            .map(|_| u32::from(scm.sample(Arm::intervene(x1, 1), &mut rng).1))
            .sum();
        assert!((f64::from(hits) / f64::from(n) - 0.8).abs() < 0.01);
    }

    #[test]
    fn random_models_are_valid() {
        let mut rng = seed::from_seed(8);
        for g in [catalog::simple_general_n7(), catalog::confounded_example()] {
            let scm = make_random_model(&g, &mut rng).unwrap();
            let mu = scm.oracle_mean(Arm::Observe).unwrap();
            assert!((0.0..=1.0).contains(&mu));
        }
    }
}
