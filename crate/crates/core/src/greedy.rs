//! Greedy approximations.
//!
//! All three algorithms grow a polytree one committed parent set (or arc) at
//! a time, keeping the skeleton a forest with a union-find. Priorities never
//! change and feasibility only ever goes from true to false, so each
//! candidate is examined once: popped from a max-heap, committed if still
//! feasible, discarded otherwise.
//!
//! | algorithm | priority | extra feasibility | certified ratio |
//! |---|---|---|---|
//! | [`greedy_parent_sets`] | `f_v(D)` | `v` unassigned | `k + 1` |
//! | [`greedy_arcs_additive`] | `f_v({u})` | in-degree of `v` below `k` | `2` |
//! | [`greedy_density_comp`] | `f_v(D) / |D|` | component stays within `q` arcs | `2q` |

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::SolveError;
use crate::model::{
    is_additive_consistent, Algorithm, Instance, NodeId, NodeSet, Polytree, Score, SolveResult,
    SolveStats,
};
use crate::unionfind::DisjointSets;

/// Partial polytree under construction.
#[derive(Debug, Clone)]
pub struct ForestState {
    components: DisjointSets,
    /// Arc count, valid at component roots.
    arcs: Vec<usize>,
    parents: Vec<NodeSet>,
    assigned: Vec<bool>,
}

impl ForestState {
    pub fn new(n: usize) -> Self {
        Self {
            components: DisjointSets::new(n),
            arcs: vec![0; n],
            parents: vec![NodeSet::new(); n],
            assigned: vec![false; n],
        }
    }

    pub fn is_assigned(&self, v: NodeId) -> bool {
        self.assigned[v]
    }

    pub fn indegree(&self, v: NodeId) -> usize {
        self.parents[v].len()
    }

    /// Arc count of the component holding `v`.
    pub fn component_arcs(&mut self, v: NodeId) -> usize {
        let root = self.components.find(v);
        self.arcs[root]
    }

    /// Roots of `D ∪ {v}`, if they are pairwise distinct (so adding the
    /// arcs `D → v` keeps the skeleton a forest).
    pub fn distinct_roots(&mut self, v: NodeId, parents: &NodeSet) -> Option<Vec<usize>> {
        let mut roots = Vec::with_capacity(parents.len() + 1);
        for x in std::iter::once(v).chain(parents.iter()) {
            let r = self.components.find(x);
            if roots.contains(&r) {
                return None;
            }
            roots.push(r);
        }
        Some(roots)
    }

    /// Total arcs of the distinct components the arcs `D → v` would merge,
    /// counting the new arcs, or `None` if they would close a cycle.
    pub fn merged_arcs(&mut self, v: NodeId, parents: &NodeSet) -> Option<usize> {
        let roots = self.distinct_roots(v, parents)?;
        Some(roots.iter().map(|&r| self.arcs[r]).sum::<usize>() + parents.len())
    }

    /// Adds the arcs `D → v` and marks `v` assigned.
    ///
    /// # Panics
    /// If the arcs would close a skeleton cycle.
    pub fn commit(&mut self, v: NodeId, parents: &NodeSet) {
        let total = self
            .merged_arcs(v, parents)
            .expect("committed arcs keep the skeleton a forest");
        for u in parents {
            self.components.union(u, v);
            self.parents[v].insert(u);
        }
        let root = self.components.find(v);
        self.arcs[root] = total;
        self.assigned[v] = true;
    }

    pub fn arc_count(&self) -> usize {
        self.parents.iter().map(NodeSet::len).sum()
    }

    pub fn into_polytree(self) -> Polytree {
        Polytree::new(self.parents)
    }
}

/// Options shared by the greedy solvers.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyOptions {
    /// After every commit, re-check every discarded candidate and count any
    /// that became feasible again. The count is always zero; this exists to
    /// test that claim.
    pub audit: bool,
}

/// Outcome of a greedy run.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub result: SolveResult,
    /// Discarded candidates found feasible again (audit mode only).
    pub revived: usize,
}

struct Candidate {
    node: NodeId,
    parents: NodeSet,
    score: Score,
}

/// Runs the shared loop over candidates already sorted best first.
fn run_greedy(
    n: usize,
    candidates: &[Candidate],
    options: &GreedyOptions,
    mut feasible: impl FnMut(&mut ForestState, &Candidate) -> bool,
) -> (ForestState, Score, u64, usize) {
    let mut heap: BinaryHeap<Reverse<usize>> = (0..candidates.len()).map(Reverse).collect();
    let mut state = ForestState::new(n);
    let mut total = Score::ZERO;
    let mut popped = 0u64;
    let mut discarded: Vec<usize> = Vec::new();
    let mut revived = 0;
    while let Some(Reverse(i)) = heap.pop() {
        popped += 1;
        let c = &candidates[i];
        if !feasible(&mut state, c) {
            if options.audit {
                discarded.push(i);
            }
            continue;
        }
        state.commit(c.node, &c.parents);
        total = total + c.score;
        if options.audit {
            revived += discarded
                .iter()
                .filter(|&&j| feasible(&mut state, &candidates[j]))
                .count();
        }
    }
    (state, total, popped, revived)
}

fn finish(
    state: ForestState,
    score: Score,
    algorithm: Algorithm,
    popped: u64,
    ratio_bound: Option<f64>,
    start: Instant,
) -> SolveResult {
    SolveResult {
        score,
        polytree: state.into_polytree(),
        algorithm,
        stats: SolveStats {
            states_visited: popped,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        ratio_bound,
    }
}

/// Non-empty candidates with strictly positive score.
fn positive_candidates(instance: &Instance) -> Vec<Candidate> {
    instance
        .families()
        .iter()
        .flat_map(|fam| {
            fam.entries()
                .iter()
                .filter(|(d, x)| !d.is_empty() && x.value() > 0.0)
                .map(|(d, x)| Candidate {
                    node: fam.node(),
                    parents: d.clone(),
                    score: *x,
                })
        })
        .collect()
}

fn check_normalized(instance: &Instance) -> Result<(), SolveError> {
    if instance.is_normalized() {
        Ok(())
    } else {
        Err(SolveError::Precondition(
            "greedy needs a normalized instance".into(),
        ))
    }
}

/// Highest-scoring feasible parent set first; `(k_eff + 1)`-approximation.
pub fn greedy_parent_sets(instance: &Instance) -> Result<SolveResult, SolveError> {
    Ok(greedy_parent_sets_with(instance, &GreedyOptions::default())?.result)
}

pub fn greedy_parent_sets_with(
    instance: &Instance,
    options: &GreedyOptions,
) -> Result<GreedyRun, SolveError> {
    let start = Instant::now();
    check_normalized(instance)?;
    let mut candidates = positive_candidates(instance);
    candidates.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(a.node.cmp(&b.node))
            .then_with(|| a.parents.cmp(&b.parents))
    });
    let (state, score, popped, revived) =
        run_greedy(instance.n(), &candidates, options, |state, c| {
            !state.is_assigned(c.node) && state.distinct_roots(c.node, &c.parents).is_some()
        });
    let bound = (instance.k_eff() + 1) as f64;
    Ok(GreedyRun {
        result: finish(state, score, Algorithm::GreedyParentSets, popped, Some(bound), start),
        revived,
    })
}

/// Highest-weight feasible arc first on an additive instance; 2-approximation
/// of the best polytree with in-degree at most `k`. The score is the sum of
/// the chosen arc weights.
pub fn greedy_arcs_additive(instance: &Instance, k: usize) -> Result<SolveResult, SolveError> {
    Ok(greedy_arcs_additive_with(instance, k, &GreedyOptions::default())?.result)
}

pub fn greedy_arcs_additive_with(
    instance: &Instance,
    k: usize,
    options: &GreedyOptions,
) -> Result<GreedyRun, SolveError> {
    let start = Instant::now();
    if k == 0 {
        return Err(SolveError::Precondition("in-degree bound must be at least 1".into()));
    }
    if !instance.is_additive() && !is_additive_consistent(instance) {
        return Err(SolveError::Precondition("instance is not additive".into()));
    }
    let mut candidates: Vec<Candidate> = positive_candidates(instance)
        .into_iter()
        .filter(|c| c.parents.len() == 1)
        .collect();
    candidates.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(a.node.cmp(&b.node))
            .then_with(|| a.parents.cmp(&b.parents))
    });
    let (state, score, popped, revived) =
        run_greedy(instance.n(), &candidates, options, |state, c| {
            state.indegree(c.node) < k && state.distinct_roots(c.node, &c.parents).is_some()
        });
    Ok(GreedyRun {
        result: finish(state, score, Algorithm::GreedyArcsAdditive, popped, Some(2.0), start),
        revived,
    })
}

/// `ω = f / |D|` compared exactly, as `f_a · |D_b|` against `f_b · |D_a|`.
fn density_order(a: &Candidate, b: &Candidate) -> Ordering {
    let lhs = a.score.value() * b.parents.len() as f64;
    let rhs = b.score.value() * a.parents.len() as f64;
    rhs.total_cmp(&lhs)
}

/// Densest feasible parent set first, keeping every component within `q`
/// arcs; `2q`-approximation of the component-bounded optimum.
pub fn greedy_density_comp(instance: &Instance, q: usize) -> Result<SolveResult, SolveError> {
    Ok(greedy_density_comp_with(instance, q, &GreedyOptions::default())?.result)
}

pub fn greedy_density_comp_with(
    instance: &Instance,
    q: usize,
    options: &GreedyOptions,
) -> Result<GreedyRun, SolveError> {
    let start = Instant::now();
    check_normalized(instance)?;
    if q == 0 {
        return Err(SolveError::Precondition("component bound must be at least 1".into()));
    }
    let mut candidates: Vec<Candidate> = positive_candidates(instance)
        .into_iter()
        .filter(|c| c.parents.len() <= q)
        .collect();
    candidates.sort_by(|a, b| {
        density_order(a, b)
            .then(b.score.cmp(&a.score))
            .then(a.node.cmp(&b.node))
            .then_with(|| a.parents.cmp(&b.parents))
    });
    let (state, score, popped, revived) =
        run_greedy(instance.n(), &candidates, options, |state, c| {
            !state.is_assigned(c.node)
                && state.merged_arcs(c.node, &c.parents).is_some_and(|arcs| arcs <= q)
        });
    let bound = 2.0 * q as f64;
    Ok(GreedyRun {
        result: finish(state, score, Algorithm::GreedyDensityComp, popped, Some(bound), start),
        revived,
    })
}

/// Comparison mode: highest raw score first under the component bound.
/// Carries no guarantee and reports no ratio.
pub fn greedy_parent_sets_comp(instance: &Instance, q: usize) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    check_normalized(instance)?;
    if q == 0 {
        return Err(SolveError::Precondition("component bound must be at least 1".into()));
    }
    let mut candidates = positive_candidates(instance);
    candidates.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(a.node.cmp(&b.node))
            .then_with(|| a.parents.cmp(&b.parents))
    });
    let (state, score, popped, _) =
        run_greedy(instance.n(), &candidates, &GreedyOptions::default(), |state, c| {
            !state.is_assigned(c.node)
                && state.merged_arcs(c.node, &c.parents).is_some_and(|arcs| arcs <= q)
        });
    Ok(finish(state, score, Algorithm::GreedyParentSetsComp, popped, None, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{score, validate_polytree, InstanceBuilder};

    fn hub() -> Instance {
        let mut b = InstanceBuilder::new(["c", "a1", "a2", "a3", "a4", "a5"])
            .entry("c", &["a1", "a2", "a3", "a4", "a5"], 10);
        for i in 1..5 {
            b = b.entry(&format!("a{i}"), &[&format!("a{}", i + 1)], 9);
        }
        b.build_normalized().unwrap()
    }

    #[test]
    fn all_empty() {
        let inst = InstanceBuilder::new(["a", "b"]).build_normalized().unwrap();
        let r = greedy_parent_sets(&inst).unwrap();
        assert_eq!((r.score, r.polytree.arc_count()), (Score::ZERO, 0));
        let r = greedy_arcs_additive(&inst, 1).unwrap();
        assert_eq!((r.score, r.polytree.arc_count()), (Score::ZERO, 0));
    }

    #[test]
    fn hub_blocks_the_ring() {
        let r = greedy_parent_sets(&hub()).unwrap();
        assert_eq!(r.score, Score::from(10));
        assert_eq!(r.ratio_bound, Some(6.0));
        assert_eq!(r.polytree.parents(0).len(), 5);
        assert_eq!(r.polytree.arc_count(), 5);
    }

    #[test]
    fn triangle_takes_the_pair() {
        let inst = InstanceBuilder::new(["a", "b", "c"])
            .entry("c", &["a", "b"], 5)
            .entry("b", &["a"], 4)
            .build_normalized()
            .unwrap();
        let r = greedy_parent_sets(&inst).unwrap();
        assert_eq!(r.score, Score::from(5));
        assert_eq!(r.polytree.arcs(), vec![(0, 2), (1, 2)]);
        assert_eq!(score(&inst, &r.polytree), r.score);
    }

    #[test]
    fn additive_three_cycle() {
        let inst = InstanceBuilder::new(["a", "b", "c"])
            .entry("b", &["a"], 10)
            .entry("a", &["c"], 9)
            .entry("c", &["b"], 9)
            .build_normalized()
            .unwrap();
        let r = greedy_arcs_additive(&inst, 1).unwrap();
        assert_eq!(r.score, Score::from(19));
        assert_eq!(r.polytree.arcs(), vec![(2, 0), (0, 1)]);
        assert_eq!(r.ratio_bound, Some(2.0));
    }

    #[test]
    fn additive_precondition() {
        let inst = InstanceBuilder::new(["a", "b", "c"])
            .entry("c", &["a", "b"], 5)
            .build_normalized()
            .unwrap();
        assert!(matches!(greedy_arcs_additive(&inst, 1), Err(SolveError::Precondition(_))));
        assert!(matches!(greedy_density_comp(&inst, 0), Err(SolveError::Precondition(_))));
    }

    #[test]
    fn density_examples() {
        let single = InstanceBuilder::new(["a", "b"])
            .entry("b", &["a"], 6)
            .build_normalized()
            .unwrap();
        let r = greedy_density_comp(&single, 1).unwrap();
        assert_eq!((r.score, r.polytree.arc_count()), (Score::from(6), 1));

        let inst = InstanceBuilder::new(["a", "b", "x", "y"])
            .entry("x", &["a"], 5)
            .entry("y", &["a", "b"], 8)
            .build_normalized()
            .unwrap();
        let r = greedy_density_comp(&inst, 3).unwrap();
        // x ← a goes first; y ← {a, b} would then need 3 arcs, which fits.
        assert_eq!(r.polytree.arcs()[0], (0, 2));
        assert_eq!(r.score, Score::from(13));
        let r = greedy_density_comp(&inst, 2).unwrap();
        assert_eq!(r.score, Score::from(5));
        assert_eq!(r.ratio_bound, Some(4.0));
        // The raw-score comparison mode takes the pair instead.
        let naive = greedy_parent_sets_comp(&inst, 2).unwrap();
        assert_eq!(naive.score, Score::from(8));
        assert_eq!(naive.ratio_bound, None);
    }

    #[test]
    fn audit_finds_nothing_revived() {
        let run = greedy_parent_sets_with(&hub(), &GreedyOptions { audit: true }).unwrap();
        assert_eq!(run.revived, 0);
        assert!(validate_polytree(6, run.result.polytree.parent_sets()).unwrap().is_polytree());
    }
}
