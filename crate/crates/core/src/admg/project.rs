//! Latent projection of an ADMG onto a subset of its nodes.

use std::collections::BTreeSet;

use super::graph::{Admg, NodeId, NodeSet};
use crate::error::GraphError;

impl Admg {
    /// Projects the graph onto `keep`, treating every other node as hidden.
    ///
    /// * `a -> b` is kept iff `a -> b` exists or a directed path from `a` to
    ///   `b` runs only through dropped nodes.
    /// * `a <-> b` is added iff some hidden source (a dropped node, or the
    ///   latent behind an original bidirected edge) reaches both `a` and `b`
    ///   along directed paths whose intermediate nodes are all dropped.
    ///
    /// Kept nodes appear in the result in their original index order. The
    /// reward must be kept; intervenable nodes are intersected with `keep`.
    pub fn latent_project(&self, keep: &NodeSet) -> Result<Admg, GraphError> {
        if let Some(bad) = keep.iter().find(|v| v.0 >= self.len()) {
            return Err(GraphError::KeepSetInvalid(format!("unknown node {bad}")));
        }
        if !keep.contains(&self.reward()) {
            return Err(GraphError::KeepSetInvalid(format!(
                "reward `{}` must be kept",
                self.name(self.reward())
            )));
        }
        let kept: Vec<NodeId> = keep.iter().copied().collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &v) in kept.iter().enumerate() {
            new_index[v.0] = k;
        }
        let is_kept = |v: NodeId| new_index[v.0] != usize::MAX;

        // Kept nodes reachable from `v`'s children through dropped nodes only.
        let frontier_below = |v: NodeId| -> NodeSet {
            let mut reached = NodeSet::new();
            let mut seen = NodeSet::new();
            let mut stack: Vec<NodeId> = self.children(v).to_vec();
            while let Some(u) = stack.pop() {
                if is_kept(u) {
                    reached.insert(u);
                } else if seen.insert(u) {
                    stack.extend(self.children(u).iter().copied());
                }
            }
            reached
        };

        let mut directed = BTreeSet::new();
        for &a in &kept {
            for b in frontier_below(a) {
                directed.insert((NodeId(new_index[a.0]), NodeId(new_index[b.0])));
            }
        }

        let mut bidirected = BTreeSet::new();
        let mut connect_all = |targets: &NodeSet| {
            let t: Vec<NodeId> = targets.iter().copied().collect();
            for x in 0..t.len() {
                for y in x + 1..t.len() {
                    bidirected.insert((NodeId(new_index[t[x].0]), NodeId(new_index[t[y].0])));
                }
            }
        };
        for u in self.nodes().filter(|&u| !is_kept(u)) {
            connect_all(&frontier_below(u));
        }
        let entry = |v: NodeId| -> NodeSet {
            if is_kept(v) {
                NodeSet::from([v])
            } else {
                frontier_below(v)
            }
        };
        for (a, b) in self.bidirected_edges() {
            let mut targets = entry(a);
            targets.extend(entry(b));
            connect_all(&targets);
        }

        let names = kept.iter().map(|&v| self.name(v).to_string()).collect();
        let domains = kept.iter().map(|&v| self.domain(v)).collect();
        let intervenable = self
            .intervenable()
            .iter()
            .filter(|&&v| is_kept(v))
            .map(|&v| NodeId(new_index[v.0]))
            .collect();
        let directed: Vec<_> = directed.into_iter().collect();
        let bidirected: Vec<_> = bidirected.into_iter().collect();
        Admg::from_parts(
            names,
            domains,
            &directed,
            &bidirected,
            NodeId(new_index[self.reward().0]),
            Some(intervenable),
        )
    }

    /// Nodes kept when estimating the effect of intervening on `i`:
    /// `i`, its effective parents and the reward.
    pub fn reduction_keep_set(&self, i: NodeId) -> Result<NodeSet, GraphError> {
        let (mut keep, _) = self.component_parents(i)?;
        keep.insert(i);
        keep.insert(self.reward());
        Ok(keep)
    }

    /// The projected graph used to estimate the effect of intervening on `i`
    /// from observational data.
    pub fn reduced_graph_for(&self, i: NodeId) -> Result<Admg, GraphError> {
        self.latent_project(&self.reduction_keep_set(i)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admg::{catalog, AdmgBuilder};

    #[test]
    fn chain_becomes_direct_edge() {
        let g = AdmgBuilder::new()
            .nodes(["A", "B", "C"])
            .directed("A", "B")
            .directed("B", "C")
            .reward("C")
            .build()
            .unwrap();
        let keep = NodeSet::from([g.node("A").unwrap(), g.node("C").unwrap()]);
        let h = g.latent_project(&keep).unwrap();
        assert_eq!(h.names(), &["A".to_string(), "C".to_string()]);
        assert_eq!(h.directed_edges(), vec![(NodeId(0), NodeId(1))]);
        assert!(h.bidirected_edges().is_empty());
    }

    #[test]
    fn dropped_fork_becomes_bidirected_edge() {
        let g = AdmgBuilder::new()
            .nodes(["U", "A", "B"])
            .directed("U", "A")
            .directed("U", "B")
            .reward("B")
            .build()
            .unwrap();
        let keep = NodeSet::from([g.node("A").unwrap(), g.node("B").unwrap()]);
        let h = g.latent_project(&keep).unwrap();
        assert!(h.directed_edges().is_empty());
        assert_eq!(h.bidirected_edges(), vec![(NodeId(0), NodeId(1))]);
    }

    #[test]
    fn confounded_example_projection_onto_x1_x2_x4() {
        let g = catalog::confounded_example();
        let keep: NodeSet = ["X1", "X2", "X4"]
            .iter()
            .map(|n| g.node(n).unwrap())
            .collect();
        let h = g.latent_project(&keep).unwrap();
        let name = |e: (NodeId, NodeId)| (h.name(e.0).to_string(), h.name(e.1).to_string());
        let directed: BTreeSet<_> = h.directed_edges().into_iter().map(name).collect();
        let expected: BTreeSet<_> = [("X2", "X4"), ("X4", "X1"), ("X2", "X1")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(directed, expected);
        let bidirected: Vec<_> = h.bidirected_edges().into_iter().map(name).collect();
        assert_eq!(bidirected, vec![("X1".to_string(), "X2".to_string())]);
    }

    #[test]
    fn projection_onto_everything_is_identity() {
        let g = catalog::simple_general_n7();
        let all: NodeSet = g.nodes().collect();
        assert_eq!(g.latent_project(&all).unwrap(), g);
    }

    #[test]
    fn reward_must_be_kept() {
        let g = catalog::parallel(2);
        let keep = NodeSet::from([g.node("X1").unwrap()]);
        assert!(matches!(
            g.latent_project(&keep),
            Err(GraphError::KeepSetInvalid(_))
        ));
        let keep = NodeSet::from([NodeId(42), g.reward()]);
        assert!(matches!(
            g.latent_project(&keep),
            Err(GraphError::KeepSetInvalid(_))
        ));
    }

    #[test]
    fn parallel_reduction_is_single_edge() {
        let g = catalog::parallel(4);
        let h = g.reduced_graph_for(g.node("X1").unwrap()).unwrap();
        assert_eq!(h.names(), &["X1".to_string(), "Y".to_string()]);
        assert_eq!(h.directed_edges(), vec![(NodeId(0), NodeId(1))]);
        assert!(h.bidirected_edges().is_empty());
    }

    #[test]
    fn reduction_of_two_node_graph_is_identity() {
        let g = AdmgBuilder::new()
            .nodes(["X", "Y"])
            .directed("X", "Y")
            .reward("Y")
            .build()
            .unwrap();
        assert_eq!(g.reduced_graph_for(NodeId(0)).unwrap(), g);
    }
}
