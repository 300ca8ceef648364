//! Brute-force ground truth.
//!
//! Everything here is deliberately simple and independent of the solvers it
//! checks: [`brute_force`] enumerates every assignment of one candidate per
//! node, the others enumerate subsets.

use std::time::Instant;

use crate::error::SolveError;
use crate::model::{
    is_additive_consistent, Algorithm, Instance, NodeId, NodeSet, Polytree, Score, SolveResult,
    SolveStats,
};
use crate::scoreio::{GraphInput, SetFamilyInput};
use crate::unionfind::DisjointSets;

/// Refuse enumerations with more assignments than this.
pub const ASSIGNMENT_GUARD: u128 = 10_000_000;

/// Largest graph [`brute_mis`] accepts.
pub const MIS_NODE_LIMIT: usize = 20;

/// Largest family [`brute_set_partition`] accepts.
pub const SET_FAMILY_LIMIT: usize = 20;

/// Structural restrictions on the polytrees [`brute_force`] considers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub max_indegree: Option<usize>,
    pub max_component_arcs: Option<usize>,
    /// Only polytrees whose skeleton is a single spanning tree.
    pub require_connected: bool,
}

impl ConstraintSet {
    pub fn unconstrained() -> Self {
        Self::default()
    }

    pub fn indegree(k: usize) -> Self {
        Self {
            max_indegree: Some(k),
            ..Self::default()
        }
    }

    pub fn component_arcs(q: usize) -> Self {
        Self {
            max_component_arcs: Some(q),
            ..Self::default()
        }
    }

    pub fn connected() -> Self {
        Self {
            require_connected: true,
            ..Self::default()
        }
    }

    /// The bounds declared on the instance.
    pub fn from_instance(instance: &Instance) -> Self {
        Self {
            max_indegree: instance.max_indegree(),
            max_component_arcs: instance.max_component_arcs(),
            require_connected: false,
        }
    }
}

/// Union-find without path compression so that every union can be undone.
struct RollbackForest {
    parent: Vec<usize>,
    size: Vec<usize>,
    arcs: Vec<usize>,
    history: Vec<Undo>,
}

enum Undo {
    Merge { child_root: usize, root: usize },
    Arc { root: usize },
}

impl RollbackForest {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            arcs: vec![0; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Adds the arc `a – b`; false if it would close a cycle.
    fn add_arc(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.arcs[ra] += self.arcs[rb];
        self.history.push(Undo::Merge {
            child_root: rb,
            root: ra,
        });
        self.arcs[ra] += 1;
        self.history.push(Undo::Arc { root: ra });
        true
    }

    fn component_arcs(&self, v: usize) -> usize {
        self.arcs[self.find(v)]
    }

    fn checkpoint(&self) -> usize {
        self.history.len()
    }

    fn rollback(&mut self, to: usize) {
        while self.history.len() > to {
            match self.history.pop().expect("len > to") {
                Undo::Arc { root } => self.arcs[root] -= 1,
                Undo::Merge { child_root, root } => {
                    self.parent[child_root] = child_root;
                    self.size[root] -= self.size[child_root];
                    self.arcs[root] -= self.arcs[child_root];
                }
            }
        }
    }
}

struct Search<'a> {
    candidates: Vec<Vec<(&'a NodeSet, Score)>>,
    constraints: ConstraintSet,
    forest: RollbackForest,
    chosen: Vec<usize>,
    best: Option<(Score, Vec<(NodeId, NodeId)>, Vec<usize>)>,
    leaves: u64,
    arcs: usize,
}

impl Search<'_> {
    fn run(&mut self, v: usize, acc: Score) {
        let n = self.candidates.len();
        if v == n {
            self.leaf(acc);
            return;
        }
        for i in 0..self.candidates[v].len() {
            let (parents, x) = self.candidates[v][i];
            let mark = self.forest.checkpoint();
            let mut ok = true;
            for u in parents {
                if !self.forest.add_arc(u, v) {
                    ok = false;
                    break;
                }
            }
            if ok {
                if let Some(q) = self.constraints.max_component_arcs {
                    ok = self.forest.component_arcs(v) <= q;
                }
            }
            if ok {
                self.chosen[v] = i;
                self.arcs += parents.len();
                self.run(v + 1, acc + x);
                self.arcs -= parents.len();
            }
            self.forest.rollback(mark);
        }
    }

    fn leaf(&mut self, acc: Score) {
        self.leaves += 1;
        let n = self.candidates.len();
        if self.constraints.require_connected && self.arcs + 1 != n {
            return;
        }
        let better = match &self.best {
            None => true,
            Some((best, _, _)) => acc > *best,
        };
        let tie = matches!(&self.best, Some((best, _, _)) if acc == *best);
        if better || tie {
            let arcs = self.polytree().arcs();
            if better || arcs < self.best.as_ref().expect("tie implies best").1 {
                self.best = Some((acc, arcs, self.chosen.clone()));
            }
        }
    }

    fn polytree(&self) -> Polytree {
        Polytree::new(
            self.chosen
                .iter()
                .enumerate()
                .map(|(v, &i)| self.candidates[v][i].0.clone())
                .collect(),
        )
    }
}

/// Maximum-score polytree by exhaustive enumeration. Ties go to the
/// lexicographically smallest arc list. When no assignment satisfies the
/// constraints the score is `-inf` and the polytree empty.
pub fn brute_force(
    instance: &Instance,
    constraints: &ConstraintSet,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let n = instance.n();
    let candidates: Vec<Vec<(&NodeSet, Score)>> = instance
        .families()
        .iter()
        .map(|fam| {
            fam.entries()
                .iter()
                .filter(|(s, _)| constraints.max_indegree.is_none_or(|k| s.len() <= k))
                .map(|(s, x)| (s, *x))
                .collect()
        })
        .collect();
    let mut total: u128 = 1;
    for c in &candidates {
        total = total.saturating_mul(c.len() as u128);
    }
    if total > ASSIGNMENT_GUARD {
        return Err(SolveError::Refused(format!(
            "brute force would enumerate {total} assignments (limit {ASSIGNMENT_GUARD})"
        )));
    }
    let mut search = Search {
        candidates,
        constraints: *constraints,
        forest: RollbackForest::new(n),
        chosen: vec![0; n],
        best: None,
        leaves: 0,
        arcs: 0,
    };
    search.run(0, Score::ZERO);
    let (score, polytree) = match search.best.take() {
        Some((score, _, chosen)) => {
            search.chosen = chosen;
            (score, search.polytree())
        }
        None => (Score::NEG_INFINITY, Polytree::empty(n)),
    };
    Ok(SolveResult {
        score,
        polytree,
        algorithm: Algorithm::BruteForce,
        stats: SolveStats {
            states_visited: search.leaves,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        ratio_bound: None,
    })
}

/// Optimum of an additive instance without in-degree bound, as a
/// maximum-weight spanning forest.
///
/// Each pair `{u, v}` weighs `max(f_v({u}), f_u({v}))`; positive edges are
/// taken greedily by weight while they join distinct components, and each is
/// oriented in its better direction. The reported score is the sum of the
/// chosen arc weights.
pub fn max_weight_forest_additive(instance: &Instance) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    if instance.max_indegree().is_some() {
        return Err(SolveError::Refused(
            "the forest oracle ignores in-degree bounds; use brute force".into(),
        ));
    }
    if !is_additive_consistent(instance) {
        return Err(SolveError::Precondition("instance is not additive".into()));
    }
    let n = instance.n();
    let weight = |parent: NodeId, child: NodeId| {
        instance
            .family(child)
            .get(&NodeSet::singleton(parent))
            .filter(|x| x.value() > 0.0)
    };
    // (weight, parent, child) for the better direction of each pair.
    let mut edges: Vec<(Score, NodeId, NodeId)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let best = match (weight(a, b), weight(b, a)) {
                (Some(x), Some(y)) if y > x => Some((y, b, a)),
                (Some(x), _) => Some((x, a, b)),
                (None, Some(y)) => Some((y, b, a)),
                (None, None) => None,
            };
            edges.extend(best);
        }
    }
    edges.sort_by(|x, y| {
        y.0.cmp(&x.0)
            .then((x.1.min(x.2), x.1.max(x.2)).cmp(&(y.1.min(y.2), y.1.max(y.2))))
    });
    let mut ds = DisjointSets::new(n);
    let mut polytree = Polytree::empty(n);
    let mut total = Score::ZERO;
    for &(w, parent, child) in &edges {
        if ds.union(parent, child).is_some() {
            let mut ps = polytree.parents(child).clone();
            ps.insert(parent);
            polytree.set_parents(child, ps);
            total = total + w;
        }
    }
    Ok(SolveResult {
        score: total,
        polytree,
        algorithm: Algorithm::MaxWeightForest,
        stats: SolveStats {
            states_visited: edges.len() as u64,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        ratio_bound: None,
    })
}

/// Size of a maximum independent set, by subset enumeration.
pub fn brute_mis(graph: &GraphInput) -> Result<usize, SolveError> {
    let n = graph.n;
    if n > MIS_NODE_LIMIT {
        return Err(SolveError::Refused(format!(
            "independent set enumeration is limited to {MIS_NODE_LIMIT} nodes, graph has {n}"
        )));
    }
    let mut adjacent = vec![0u32; n];
    for &(u, v) in &graph.edges {
        adjacent[u] |= 1 << v;
        adjacent[v] |= 1 << u;
    }
    let best = (0u32..1 << n)
        .filter(|&set| (0..n).all(|v| set & (1 << v) == 0 || adjacent[v] & set == 0))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0);
    Ok(best as usize)
}

/// Whether at most `t` pairwise-disjoint sets of the family cover the
/// universe, by exhaustive search.
pub fn brute_set_partition(family: &SetFamilyInput) -> Result<bool, SolveError> {
    if family.sets.len() > SET_FAMILY_LIMIT {
        return Err(SolveError::Refused(format!(
            "set partition search is limited to {SET_FAMILY_LIMIT} sets, family has {}",
            family.sets.len()
        )));
    }
    fn search(family: &SetFamilyInput, covered: &NodeSet, used: usize) -> bool {
        let Some(first) = (0..family.universe).find(|&e| !covered.contains(e)) else {
            return true;
        };
        if used == family.t {
            return false;
        }
        family.sets.iter().any(|s| {
            s.contains(first) && s.is_disjoint(covered) && search(family, &covered.union(s), used + 1)
        })
    }
    Ok(search(family, &NodeSet::new(), 0))
}
