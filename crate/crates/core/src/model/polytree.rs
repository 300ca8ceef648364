use std::collections::HashMap;

use crate::error::ModelError;
use crate::model::{Instance, NodeId, NodeSet, Score};
use crate::unionfind::DisjointSets;

/// One parent set per node. A valid polytree has a forest skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polytree {
    parent_sets: Vec<NodeSet>,
}

impl Polytree {
    pub fn new(parent_sets: Vec<NodeSet>) -> Self {
        Self { parent_sets }
    }

    /// `n` nodes, no arcs.
    pub fn empty(n: usize) -> Self {
        Self {
            parent_sets: vec![NodeSet::new(); n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut out = Self::empty(n);
        for (parent, child) in arcs {
            out.parent_sets[child].insert(parent);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.parent_sets.len()
    }

    pub fn parent_sets(&self) -> &[NodeSet] {
        &self.parent_sets
    }

    pub fn parents(&self, v: NodeId) -> &NodeSet {
        &self.parent_sets[v]
    }

    pub fn set_parents(&mut self, v: NodeId, parents: NodeSet) {
        self.parent_sets[v] = parents;
    }

    /// `(parent, child)` pairs sorted by child, then parent.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.parent_sets
            .iter()
            .enumerate()
            .flat_map(|(child, ps)| ps.iter().map(move |p| (p, child)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.parent_sets.iter().map(NodeSet::len).sum()
    }
}

/// Sum of local scores; `-inf` if any chosen set is not a candidate.
pub fn score(instance: &Instance, polytree: &Polytree) -> Score {
    polytree
        .parent_sets
        .iter()
        .enumerate()
        .map(|(v, ps)| instance.local_score(v, ps))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytreeCheck {
    /// First arc (in child, parent order) that closes a skeleton cycle.
    pub offending_arc: Option<(NodeId, NodeId)>,
}

impl PolytreeCheck {
    pub fn is_polytree(&self) -> bool {
        self.offending_arc.is_none()
    }
}

/// Checks that the skeleton of the parent sets is a forest.
pub fn validate_polytree(n: usize, parent_sets: &[NodeSet]) -> Result<PolytreeCheck, ModelError> {
    if parent_sets.len() != n {
        return Err(ModelError::FamilyCount {
            expected: n,
            got: parent_sets.len(),
        });
    }
    for (child, ps) in parent_sets.iter().enumerate() {
        if let Some(m) = ps.max_member().filter(|&m| m >= n) {
            return Err(ModelError::NodeOutOfRange { node: m, n });
        }
        if ps.contains(child) {
            return Err(ModelError::SelfParent { node: child });
        }
    }
    let mut ds = DisjointSets::new(n);
    for (child, ps) in parent_sets.iter().enumerate() {
        for parent in ps {
            if ds.union(parent, child).is_none() {
                return Ok(PolytreeCheck {
                    offending_arc: Some((parent, child)),
                });
            }
        }
    }
    Ok(PolytreeCheck { offending_arc: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintViolation {
    InDegree { node: NodeId, indegree: usize, bound: usize },
    /// `node` is the smallest member of the offending component.
    ComponentArcs { node: NodeId, arcs: usize, bound: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub violations: Vec<ConstraintViolation>,
}

impl ConstraintReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the instance's declared in-degree and component-arc bounds.
/// Assumes the skeleton is a forest.
pub fn check_constraints(instance: &Instance, polytree: &Polytree) -> ConstraintReport {
    check_bounds(
        polytree,
        instance.max_indegree(),
        instance.max_component_arcs(),
    )
}

pub fn check_bounds(
    polytree: &Polytree,
    max_indegree: Option<usize>,
    max_component_arcs: Option<usize>,
) -> ConstraintReport {
    let mut violations = Vec::new();
    if let Some(k) = max_indegree {
        for (node, ps) in polytree.parent_sets.iter().enumerate() {
            if ps.len() > k {
                violations.push(ConstraintViolation::InDegree {
                    node,
                    indegree: ps.len(),
                    bound: k,
                });
            }
        }
    }
    if let Some(q) = max_component_arcs {
        for (node, arcs) in component_arc_counts(polytree) {
            if arcs > q {
                violations.push(ConstraintViolation::ComponentArcs {
                    node,
                    arcs,
                    bound: q,
                });
            }
        }
    }
    ConstraintReport { violations }
}

/// Skeleton components as `(smallest member, arc count)`, ordered by member.
pub fn component_arc_counts(polytree: &Polytree) -> Vec<(NodeId, usize)> {
    let n = polytree.n();
    let mut ds = DisjointSets::new(n);
    for (parent, child) in polytree.arcs() {
        ds.union(parent, child);
    }
    let mut by_root: HashMap<usize, (NodeId, usize)> = HashMap::new();
    for v in 0..n {
        let root = ds.find(v);
        let e = by_root.entry(root).or_insert((v, 0));
        e.1 += polytree.parent_sets[v].len();
    }
    let mut out: Vec<_> = by_root.into_values().collect();
    out.sort_unstable();
    out
}
