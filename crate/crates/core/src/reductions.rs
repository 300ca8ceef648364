//! Hardness constructions as instance generators.
//!
//! Each reduction returns a normalized instance together with a
//! [`ReductionCertificate`] that names the role of every produced node and
//! states what the optimum of the instance must be in terms of the source
//! problem. The certificate can be checked against the combinatorial oracles
//! in [`crate::oracle`].

use serde::Serialize;
use thiserror::Error;

use crate::model::{Instance, NodeId, NodeSet, ParentSetFamily, Polytree, Score};
use crate::scoreio::{GraphInput, SetFamilyInput};

/// Refuse set-partition constructions with more parent-set entries than this.
pub const ENTRY_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid reduction input: {0}")]
    InvalidInput(String),
    #[error("construction too large: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    SetPartition,
    IndependentSet,
    IndependentSetComp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum NodeRole {
    /// Element of the set-partition universe.
    Universe { element: usize },
    /// Picks a union of at most `budget` disjoint family sets.
    Choice { index: usize, budget: usize },
    /// Shared parent that ties the gadgets together.
    Connecting,
    /// Vertex of the source graph.
    Element { vertex: usize },
    Edge { u: usize, v: usize },
    /// Padding parent owned by one vertex.
    Dummy { vertex: usize },
}

/// What the optimum of the produced instance says about the source problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum ExpectedScore {
    /// Optimum equals `target` iff the family has a partition within budget.
    PartitionIff { target: usize },
    /// Optimum equals the maximum independent set size.
    IndependentSetSize,
    /// Optimum over polytrees whose components have at most `q` arcs equals
    /// the maximum independent set size.
    IndependentSetSizeComp { q: usize },
}

/// Answer of the combinatorial oracle for the source problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceAnswer {
    HasPartition(bool),
    MaxIndependentSet(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    pub kind: ReductionKind,
    /// One role per node of the produced instance, by index.
    pub roles: Vec<NodeRole>,
    pub expected: ExpectedScore,
}

impl ReductionCertificate {
    /// Whether `optimum` (of the produced instance, under the certificate's
    /// constraints) agrees with the source answer.
    pub fn holds(&self, optimum: Score, answer: SourceAnswer) -> bool {
        match (self.expected, answer) {
            (ExpectedScore::PartitionIff { target }, SourceAnswer::HasPartition(yes)) => {
                (optimum == Score::finite(target as f64)) == yes
            }
            (
                ExpectedScore::IndependentSetSize | ExpectedScore::IndependentSetSizeComp { .. },
                SourceAnswer::MaxIndependentSet(size),
            ) => optimum == Score::finite(size as f64),
            _ => false,
        }
    }

    /// Source solution read off a polytree of the produced instance: for set
    /// partition, the universe elements gathered by each choice node; for
    /// independent set, the vertices with a non-empty parent set (as
    /// singletons).
    pub fn back_translate(&self, polytree: &Polytree) -> Vec<NodeSet> {
        let mut out = Vec::new();
        for (node, role) in self.roles.iter().enumerate() {
            let parents = polytree.parents(node);
            match role {
                NodeRole::Choice { .. } => {
                    let elements: NodeSet = parents
                        .iter()
                        .filter_map(|u| match self.roles[u] {
                            NodeRole::Universe { element } => Some(element),
                            _ => None,
                        })
                        .collect();
                    if !elements.is_empty() {
                        out.push(elements);
                    }
                }
                NodeRole::Element { vertex } if !parents.is_empty() => {
                    out.push(NodeSet::singleton(*vertex));
                }
                _ => {}
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Every union of at most `budget` pairwise-disjoint sets, once per
/// distinct union. Refuses past [`ENTRY_GUARD`] unions.
fn disjoint_unions(sets: &[NodeSet], budget: usize) -> Result<Vec<NodeSet>, ReductionError> {
    fn rec(
        sets: &[NodeSet],
        from: usize,
        left: usize,
        current: &NodeSet,
        out: &mut std::collections::BTreeSet<NodeSet>,
    ) -> Result<(), ReductionError> {
        if out.insert(current.clone()) && out.len() > ENTRY_GUARD {
            return Err(ReductionError::TooLarge(format!(
                "more than {ENTRY_GUARD} disjoint unions"
            )));
        }
        if left == 0 {
            return Ok(());
        }
        for i in from..sets.len() {
            if sets[i].is_disjoint(current) {
                rec(sets, i + 1, left - 1, &current.union(&sets[i]), out)?;
            }
        }
        Ok(())
    }
    let mut out = std::collections::BTreeSet::new();
    rec(sets, 0, budget, &NodeSet::new(), &mut out)?;
    Ok(out.into_iter().collect())
}

/// Set partition with budget `t` to polytree learning.
///
/// Nodes are the `n'` universe elements, `t' = ⌈t / epsilon_inv⌉` choice
/// nodes and one connecting node `p`, in that order. Choice node `s_j` may
/// take `{p} ∪ U` for any union `U` of at most `epsilon_inv` disjoint sets
/// (the last one only of the remaining budget), scored by `|U|`. The optimum
/// is `n'` exactly when the universe splits into at most `t` disjoint sets.
pub fn reduce_set_partition(
    input: &SetFamilyInput,
    epsilon_inv: usize,
) -> Result<(Instance, ReductionCertificate), ReductionError> {
    if epsilon_inv == 0 {
        return Err(ReductionError::InvalidInput("epsilon_inv must be at least 1".into()));
    }
    let n_prime = input.universe;
    let choices = input.t.div_ceil(epsilon_inv);
    let p = n_prime + choices;
    let mut names: Vec<String> = (0..n_prime).map(|e| format!("u{e}")).collect();
    let mut roles: Vec<NodeRole> = (0..n_prime).map(|element| NodeRole::Universe { element }).collect();
    let mut families: Vec<ParentSetFamily> = (0..n_prime).map(ParentSetFamily::empty_only).collect();
    let mut total_entries = 0usize;
    for j in 0..choices {
        let budget = if j + 1 < choices {
            epsilon_inv
        } else {
            input.t - (choices - 1) * epsilon_inv
        };
        let unions = disjoint_unions(&input.sets, budget)?;
        total_entries += unions.len();
        if total_entries > ENTRY_GUARD {
            return Err(ReductionError::TooLarge(format!(
                "more than {ENTRY_GUARD} parent-set entries"
            )));
        }
        let node = n_prime + j;
        let entries = unions.into_iter().map(|u| {
            let score = Score::finite(u.len() as f64);
            let mut parents = u;
            parents.insert(p);
            (parents, score)
        });
        families.push(ParentSetFamily::new(
            node,
            std::iter::once((NodeSet::new(), Score::ZERO)).chain(entries),
        ));
        names.push(format!("s{}", j + 1));
        roles.push(NodeRole::Choice { index: j + 1, budget });
    }
    families.push(ParentSetFamily::empty_only(p));
    names.push("p".into());
    roles.push(NodeRole::Connecting);
    let instance = Instance::new(names, families).expect("reduction output is valid");
    let certificate = ReductionCertificate {
        kind: ReductionKind::SetPartition,
        roles,
        expected: ExpectedScore::PartitionIff { target: n_prime },
    };
    Ok((instance, certificate))
}

fn graph_nodes(graph: &GraphInput) -> (Vec<String>, Vec<NodeRole>) {
    let mut names: Vec<String> = (0..graph.n).map(|v| format!("v{v}")).collect();
    let mut roles: Vec<NodeRole> = (0..graph.n).map(|vertex| NodeRole::Element { vertex }).collect();
    for &(u, v) in &graph.edges {
        names.push(format!("e{u}_{v}"));
        roles.push(NodeRole::Edge { u, v });
    }
    (names, roles)
}

/// Maximum independent set to polytree learning.
///
/// Nodes are the graph's vertices, one node per edge, and a connecting node
/// `p`. Vertex `v` scores 1 with parents `E_v ∪ {p}` (its incident edge
/// nodes plus `p`); nothing else scores. Two adjacent vertices cannot both
/// take their set, so the optimum is the independence number.
pub fn reduce_independent_set(graph: &GraphInput) -> (Instance, ReductionCertificate) {
    let (mut names, mut roles) = graph_nodes(graph);
    let m = graph.edges.len();
    let p = graph.n + m;
    let mut families: Vec<ParentSetFamily> = (0..graph.n)
        .map(|v| {
            let mut parents: NodeSet = graph.incident(v).map(|i| graph.n + i).collect();
            parents.insert(p);
            ParentSetFamily::new(v, [(NodeSet::new(), Score::ZERO), (parents, Score::from(1))])
        })
        .collect();
    families.extend((graph.n..=p).map(ParentSetFamily::empty_only));
    names.push("p".into());
    roles.push(NodeRole::Connecting);
    let instance = Instance::new(names, families).expect("reduction output is valid");
    let certificate = ReductionCertificate {
        kind: ReductionKind::IndependentSet,
        roles,
        expected: ExpectedScore::IndependentSetSize,
    };
    (instance, certificate)
}

/// Maximum independent set to polytree learning with at most `q` arcs per
/// component.
///
/// Each vertex `v` scores 1 with parents `E_v` padded with fresh dummy nodes
/// to `d' = max(d, 2)` members, where `d` is the maximum degree, and
/// `q = d' + 1`. Two adjacent vertices taking their sets would form one
/// component of `2d' > q` arcs. Padding to at least 2 matters for `d = 1`:
/// with `q = 2` both endpoints of an edge could take their set together.
pub fn reduce_independent_set_comp(
    graph: &GraphInput,
) -> Result<(Instance, usize, ReductionCertificate), ReductionError> {
    let d = graph.max_degree();
    if d == 0 {
        return Err(ReductionError::InvalidInput(
            "graph needs at least one edge".into(),
        ));
    }
    let width = d.max(2);
    let q = width + 1;
    let (mut names, mut roles) = graph_nodes(graph);
    let mut next = graph.n + graph.edges.len();
    let mut families = Vec::with_capacity(next);
    for v in 0..graph.n {
        let mut parents: NodeSet = graph.incident(v).map(|i| graph.n + i).collect();
        for j in 0..width - parents.len() {
            parents.insert(next);
            names.push(format!("d{v}_{j}"));
            roles.push(NodeRole::Dummy { vertex: v });
            next += 1;
        }
        families.push(ParentSetFamily::new(
            v,
            [(NodeSet::new(), Score::ZERO), (parents, Score::from(1))],
        ));
    }
    families.extend((graph.n..next).map(ParentSetFamily::empty_only));
    let instance = Instance::new(names, families)
        .expect("reduction output is valid")
        .with_max_component_arcs(q)
        .expect("q >= 1");
    let certificate = ReductionCertificate {
        kind: ReductionKind::IndependentSetComp,
        roles,
        expected: ExpectedScore::IndependentSetSizeComp { q },
    };
    Ok((instance, q, certificate))
}

/// Node ids of a given role, for inspection in tests and tools.
pub fn nodes_with_role(
    certificate: &ReductionCertificate,
    pred: impl Fn(&NodeRole) -> bool,
) -> Vec<NodeId> {
    certificate
        .roles
        .iter()
        .enumerate()
        .filter(|(_, r)| pred(r))
        .map(|(i, _)| i)
        .collect()
}
