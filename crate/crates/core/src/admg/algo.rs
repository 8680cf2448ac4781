//! Structural queries on an [`Admg`].
//!
//! Path-based checks treat each bidirected edge `A <-> B` as a fresh latent
//! common cause `A <- U -> B`.

use std::collections::{BTreeSet, VecDeque};

use super::graph::{Admg, NodeId, NodeSet};
use crate::error::GraphError;

impl Admg {
    /// Partition of the nodes into c-components (connected components of the
    /// bidirected part), ordered by smallest member.
    pub fn c_components(&self) -> Vec<NodeSet> {
        let mut label = vec![usize::MAX; self.len()];
        let mut components = Vec::new();
        for start in self.nodes() {
            if label[start.0] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = NodeSet::new();
            let mut stack = vec![start];
            label[start.0] = id;
            while let Some(v) = stack.pop() {
                members.insert(v);
                for &s in self.spouses(v) {
                    if label[s.0] == usize::MAX {
                        label[s.0] = id;
                        stack.push(s);
                    }
                }
            }
            components.push(members);
        }
        components
    }

    /// The c-component containing `v`.
    pub fn c_component_of(&self, v: NodeId) -> NodeSet {
        self.bidirected_closure(v, |_| true)
    }

    fn bidirected_closure(&self, v: NodeId, allowed: impl Fn(NodeId) -> bool) -> NodeSet {
        let mut seen = NodeSet::new();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(u) = stack.pop() {
            for &s in self.spouses(u) {
                if allowed(s) && seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        seen
    }

    fn parents_of_set(&self, set: &NodeSet) -> NodeSet {
        set.iter()
            .flat_map(|&v| self.parents(v).iter().copied())
            .collect()
    }

    /// Effective parents of `j`: every parent of every member of `j`'s
    /// c-component, together with the c-component itself, minus `j`.
    pub fn effective_parents(&self, j: NodeId) -> NodeSet {
        let component = self.c_component_of(j);
        let mut set = self.parents_of_set(&component);
        set.extend(component);
        set.remove(&j);
        set
    }

    /// Effective parents of an intervenable node together with the size of
    /// its c-component (the exponent applied to its frequency estimate).
    pub fn component_parents(&self, i: NodeId) -> Result<(NodeSet, usize), GraphError> {
        self.require_intervenable(i)?;
        let size = self.c_component_of(i).len();
        Ok((self.effective_parents(i), size))
    }

    /// Conditioning set of `j` in the c-component factorization of the
    /// observational joint.
    ///
    /// Only nodes up to `j` in the topological order are considered: the
    /// c-component of `j` inside that prefix, plus its parents, minus `j`.
    /// This coincides with [`Admg::effective_parents`] whenever `j`'s
    /// c-component is a singleton.
    pub fn factorization_parents(&self, j: NodeId) -> NodeSet {
        let order = self.topological_order();
        let mut position = vec![0usize; self.len()];
        for (p, &v) in order.iter().enumerate() {
            position[v.0] = p;
        }
        let limit = position[j.0];
        let component = self.bidirected_closure(j, |u| position[u.0] <= limit);
        let mut set = self.parents_of_set(&component);
        set.extend(component);
        set.remove(&j);
        set
    }

    /// Every node reachable from `v` along directed edges, excluding `v`.
    pub fn descendants(&self, v: NodeId) -> NodeSet {
        let mut seen = NodeSet::new();
        let mut queue: VecDeque<NodeId> = self.children(v).iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            if u != v && seen.insert(u) {
                queue.extend(self.children(u).iter().copied());
            }
        }
        seen
    }

    /// `set` together with all of its ancestors.
    pub fn ancestors_inclusive(&self, set: &NodeSet) -> NodeSet {
        let mut seen = set.clone();
        let mut stack: Vec<NodeId> = set.iter().copied().collect();
        while let Some(u) = stack.pop() {
            for &p in self.parents(u) {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Whether some backdoor path (a path from `i` to the reward that starts
    /// with an edge into `i`) is open given the empty conditioning set.
    pub fn has_unblocked_backdoor(&self, i: NodeId) -> Result<bool, GraphError> {
        self.has_unblocked_backdoor_given(i, &NodeSet::new())
    }

    /// Backdoor check with an explicit conditioning set.
    ///
    /// Reachability over (node, direction) states in the graph where every
    /// bidirected edge is replaced by a latent common parent; `i` itself is
    /// never traversed.
    pub fn has_unblocked_backdoor_given(
        &self,
        i: NodeId,
        conditioning: &NodeSet,
    ) -> Result<bool, GraphError> {
        self.require_intervenable(i)?;
        let reward = self.reward();
        if conditioning.contains(&i) || conditioning.contains(&reward) {
            return Err(GraphError::KeepSetInvalid(
                "conditioning set may not contain the endpoints".into(),
            ));
        }
        let active_colliders = self.ancestors_inclusive(conditioning);
        let bidirected = self.bidirected_edges();
        let latents_of = |v: NodeId| {
            bidirected
                .iter()
                .enumerate()
                .filter(move |(_, &(a, b))| a == v || b == v)
                .map(|(e, _)| e)
        };

        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        enum Site {
            Observed(NodeId),
            Latent(usize),
        }
        // (site, arrived_from_child)
        let mut visited: BTreeSet<(Site, bool)> = BTreeSet::new();
        let mut stack: Vec<(Site, bool)> = Vec::new();
        for &p in self.parents(i) {
            stack.push((Site::Observed(p), true));
        }
        for e in latents_of(i) {
            stack.push((Site::Latent(e), true));
        }

        while let Some(state) = stack.pop() {
            if !visited.insert(state) {
                continue;
            }
            let (site, upward) = state;
            match site {
                Site::Latent(e) => {
                    let (a, b) = bidirected[e];
                    for v in [a, b] {
                        if v != i {
                            stack.push((Site::Observed(v), false));
                        }
                    }
                }
                Site::Observed(w) => {
                    if w == reward {
                        return Ok(true);
                    }
                    let blocked = conditioning.contains(&w);
                    let go_up = if upward {
                        !blocked
                    } else {
                        active_colliders.contains(&w)
                    };
                    let go_down = !blocked;
                    if go_up {
                        for &p in self.parents(w) {
                            if p != i {
                                stack.push((Site::Observed(p), true));
                            }
                        }
                        for e in latents_of(w) {
                            stack.push((Site::Latent(e), true));
                        }
                    }
                    if go_down {
                        for &c in self.children(w) {
                            if c != i {
                                stack.push((Site::Observed(c), false));
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    /// Whether every intervenable node is free of open backdoor paths.
    pub fn is_no_backdoor(&self) -> bool {
        self.intervenable()
            .iter()
            .all(|&i| !self.has_unblocked_backdoor(i).unwrap_or(true))
    }

    /// Sufficient graphical condition for identifiability of the effect of
    /// `i` on the reward: no child of `i` shares its c-component.
    pub fn identifiable_sufficient(&self, i: NodeId) -> Result<bool, GraphError> {
        self.require_intervenable(i)?;
        let component = self.c_component_of(i);
        Ok(self.children(i).iter().all(|c| !component.contains(c)))
    }
}
