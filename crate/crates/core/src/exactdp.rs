//! Exact polytree learning by dynamic programming over node-set pairs.
//!
//! `Q[S, T]` is the best score of a connected polytree on the nodes `S` in
//! which only nodes of `T ⊆ S` may have non-empty parent sets. With one
//! auxiliary node that every other node may take as an extra parent at no
//! cost, the best polytree of the original instance becomes the best
//! connected polytree of the augmented one, i.e. `Q[V, V]`.
//!
//! The table is filled by memoized descent from `Q[V, V]`. For `|T| > 1`:
//!
//! ```text
//! Q[S, T] = max over v ∈ T, D ∈ F_v, D ⊆ S of
//!     f_v(D) + Q[S \ D, T \ {v}]                     if D ∩ T = ∅
//!     f_v(D) + Q[S \ ((D ∪ {v}) \ {u}), T \ {v}]     if D ∩ T = {u}
//!     -inf                                           otherwise
//! ```
//!
//! and `Q[S, {v}] = f_v(S \ {v})`. Only reachable states are stored. The
//! pruned variant additionally drops every state with
//! `|S| - |T| > k · (⌊log₂ n⌋ + slack)`; for bounded in-degree an optimal
//! polytree always has a derivation that stays within that gap.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::error::SolveError;
use crate::model::{
    Algorithm, Instance, NodeId, NodeSet, ParentSetFamily, Polytree, Score, SolveResult,
    SolveStats,
};

/// Largest instance the exact solvers accept without `force`.
pub const DEFAULT_NODE_CAP: usize = 25;

/// Default headroom added to `⌊log₂ n⌋` in the pruning bound.
pub const DEFAULT_SLACK: usize = 2;

/// Upper limit on pre-sizing the memo of a full run.
const RESERVE_LIMIT: usize = 1 << 26;

/// One table node is taken by the auxiliary node.
const MASK_NODE_LIMIT: usize = TABLE_NODE_LIMIT - 1;

/// `k · (⌊log₂ n⌋ + slack)`: the largest `|S| - |T|` gap the pruned DP keeps.
///
/// # Panics
/// If `k` or `n` is zero.
pub fn state_bound(k: usize, n: usize, slack: usize) -> usize {
    assert!(k >= 1 && n >= 1, "state_bound needs k >= 1 and n >= 1");
    k * (n.ilog2() as usize + slack)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneBound {
    pub k: usize,
    pub n: usize,
    pub slack: usize,
}

impl PruneBound {
    pub fn bound(&self) -> usize {
        state_bound(self.k, self.n, self.slack)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DpOptions {
    /// Lift [`DEFAULT_NODE_CAP`]. Instances over 31 nodes are always refused.
    pub force: bool,
    /// Give up with a refusal once this many states are stored.
    pub max_states: Option<u64>,
}

/// Name of the auxiliary node added by [`connectify`], made unique if needed.
fn aux_name(instance: &Instance) -> String {
    let mut name = String::from("__aux");
    while instance.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Appends an auxiliary node with family `{∅: 0}` and gives every other node
/// a copy `D ∪ {aux}` of each candidate `D`, at the same score. A declared
/// in-degree bound grows by one.
pub fn connectify(instance: &Instance) -> (Instance, NodeId) {
    let aux = instance.n();
    let mut names = instance.names().to_vec();
    names.push(aux_name(instance));
    let mut families: Vec<ParentSetFamily> = instance
        .families()
        .iter()
        .map(|fam| {
            let doubled = fam.entries().iter().flat_map(|(s, x)| {
                let mut with_aux = s.clone();
                with_aux.insert(aux);
                [(s.clone(), *x), (with_aux, *x)]
            });
            ParentSetFamily::new(fam.node(), doubled)
        })
        .collect();
    families.push(ParentSetFamily::empty_only(aux));
    let mut out = Instance::new(names, families).expect("augmenting a valid instance");
    if let Some(k) = instance.max_indegree() {
        out = out.with_max_indegree(k + 1).expect("k + 1 >= 1");
    }
    (out, aux)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpCase {
    /// `|T| = 1`: the single node of `T` takes `S \ T` as parents.
    Base,
    /// The parents lie outside `T`; `v` stays in the sub-problem as a
    /// parentless node.
    Disjoint,
    /// Exactly one parent `u` lies in `T`; `v` joins the sub-tree through it.
    SingleOverlap { u: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpChoice {
    pub node: NodeId,
    pub parents: NodeSet,
    pub case: DpCase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpEntry {
    pub value: Score,
    /// The maximizing branch; absent when `value` is `-inf`.
    pub choice: Option<DpChoice>,
}

/// Nodes a table can hold: `S` and `T` share one 64-bit key.
const TABLE_NODE_LIMIT: usize = 32;

fn pack(s: u64, t: u64) -> u64 {
    s << 32 | t
}

/// Memoized `Q[S, T]` over a normalized instance of at most 32 nodes.
///
/// Only values are stored. The maximizing branch of a state is recovered on
/// demand as the first candidate, in evaluation order, that reproduces the
/// stored value.
pub struct DpTable {
    n: usize,
    /// Per node: family entries as `(mask, score)` in family order.
    families: Vec<Vec<(u64, f64)>>,
    /// Per node: parent mask → index into `families[v]`.
    lookup: Vec<FxHashMap<u64, u32>>,
    max_gap: Option<u32>,
    max_states: Option<u64>,
    exhausted: bool,
    memo: FxHashMap<u64, f64>,
}

impl DpTable {
    /// `max_gap` discards states with `|S| - |T|` above it.
    pub fn new(instance: &Instance, max_gap: Option<usize>) -> Result<Self, SolveError> {
        check_normalized(instance)?;
        let n = instance.n();
        if n > TABLE_NODE_LIMIT {
            return Err(SolveError::Refused(format!(
                "DP table supports at most {TABLE_NODE_LIMIT} nodes, instance has {n}"
            )));
        }
        let families: Vec<Vec<(u64, f64)>> = instance
            .families()
            .iter()
            .map(|fam| {
                fam.entries()
                    .iter()
                    .map(|(s, x)| (s.as_mask().expect("n <= 32"), x.value()))
                    .collect()
            })
            .collect();
        let lookup = families
            .iter()
            .map(|fam| {
                fam.iter()
                    .enumerate()
                    .map(|(i, &(mask, _))| (mask, i as u32))
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            families,
            lookup,
            max_gap: max_gap.map(|g| g.min(u32::MAX as usize) as u32),
            max_states: None,
            exhausted: false,
            memo: FxHashMap::default(),
        })
    }

    /// Stop storing states once `limit` are held; see [`Self::is_exhausted`].
    pub fn with_state_limit(mut self, limit: Option<u64>) -> Self {
        self.max_states = limit;
        self
    }

    /// Pre-sizes the memo for about `states` entries.
    pub fn reserve(&mut self, states: usize) {
        self.memo.reserve(states);
    }

    /// True once the state limit was hit. Values computed afterwards are
    /// meaningless.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct `(S, T)` states evaluated so far.
    pub fn states_visited(&self) -> u64 {
        self.memo.len() as u64
    }

    /// # Panics
    /// Unless `T` is a nonempty subset of `S ⊆ [0, n)`.
    pub fn value(&mut self, s: &NodeSet, t: &NodeSet) -> Score {
        let (s, t) = self.key(s, t);
        Score::new(self.q(s, t)).expect("table values are finite or -inf")
    }

    pub fn entry(&mut self, s: &NodeSet, t: &NodeSet) -> DpEntry {
        let (s, t) = self.key(s, t);
        let value = self.q(s, t);
        let choice = self.choice(s, t).map(|(v, d, tag)| DpChoice {
            node: v,
            parents: NodeSet::from_mask(d),
            case: match tag {
                Tag::Base => DpCase::Base,
                Tag::Disjoint => DpCase::Disjoint,
                Tag::Overlap => DpCase::SingleOverlap {
                    u: (d & t).trailing_zeros() as usize,
                },
            },
        });
        DpEntry {
            value: Score::new(value).expect("finite or -inf"),
            choice,
        }
    }

    /// The polytree on the nodes of `S` behind `Q[S, T]`, as parent sets over
    /// all `n` nodes (nodes outside `S` get none). `None` when infeasible.
    pub fn traceback(&mut self, s: &NodeSet, t: &NodeSet) -> Option<Polytree> {
        let (mut s, mut t) = self.key(s, t);
        if self.q(s, t) == f64::NEG_INFINITY {
            return None;
        }
        let mut polytree = Polytree::empty(self.n);
        loop {
            let (v, d, tag) = self.choice(s, t).expect("finite states have a maximizer");
            polytree.set_parents(v, NodeSet::from_mask(d));
            let vb = 1u64 << v;
            match tag {
                Tag::Base => return Some(polytree),
                Tag::Disjoint => s &= !d,
                Tag::Overlap => s &= !((d | vb) & !(d & t)),
            }
            t &= !vb;
        }
    }

    fn key(&self, s: &NodeSet, t: &NodeSet) -> (u64, u64) {
        let sm = s.as_mask().expect("node set within 64 nodes");
        let tm = t.as_mask().expect("node set within 64 nodes");
        let full = (1u64 << self.n) - 1;
        assert!(
            tm != 0 && tm & !sm == 0 && sm & !full == 0,
            "DP key needs nonempty T ⊆ S ⊆ V"
        );
        (sm, tm)
    }

    fn q(&mut self, s: u64, t: u64) -> f64 {
        if let Some(gap) = self.max_gap {
            if s.count_ones() - t.count_ones() > gap {
                return f64::NEG_INFINITY;
            }
        }
        if let Some(&value) = self.memo.get(&pack(s, t)) {
            return value;
        }
        if self.exhausted {
            return f64::NEG_INFINITY;
        }
        let value = if t & (t - 1) == 0 {
            self.base(s, t).map_or(f64::NEG_INFINITY, |i| {
                self.families[t.trailing_zeros() as usize][i as usize].1
            })
        } else {
            self.recur(s, t)
        };
        if self.max_states.is_some_and(|m| self.memo.len() as u64 >= m) {
            self.exhausted = true;
        } else {
            self.memo.insert(pack(s, t), value);
        }
        value
    }

    fn base(&self, s: u64, t: u64) -> Option<u32> {
        let v = t.trailing_zeros() as usize;
        self.lookup[v].get(&(s & !t)).copied()
    }

    /// The sub-state a candidate leads to, or `None` when `|D ∩ T| ≥ 2`.
    fn successor(s: u64, t: u64, v: usize, d: u64) -> Option<(u64, Tag)> {
        let overlap = d & t;
        if overlap == 0 {
            Some((s & !d, Tag::Disjoint))
        } else if overlap & (overlap - 1) == 0 {
            Some((s & !((d | 1 << v) & !overlap), Tag::Overlap))
        } else {
            None
        }
    }

    fn recur(&mut self, s: u64, t: u64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let mut rest = t;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let t_sub = t & !(1u64 << v);
            for i in 0..self.families[v].len() {
                let (d, f) = self.families[v][i];
                if d & !s != 0 {
                    continue;
                }
                let Some((s_sub, _)) = Self::successor(s, t, v, d) else {
                    continue;
                };
                let value = f + self.q(s_sub, t_sub);
                if value > best {
                    best = value;
                }
            }
        }
        best
    }

    /// First maximizer of a finite state: smallest `v`, then the family's
    /// lexicographic parent-set order.
    fn choice(&mut self, s: u64, t: u64) -> Option<(NodeId, u64, Tag)> {
        let value = self.q(s, t);
        if value == f64::NEG_INFINITY {
            return None;
        }
        if t & (t - 1) == 0 {
            let v = t.trailing_zeros() as usize;
            let i = self.base(s, t).expect("finite base state");
            return Some((v, self.families[v][i as usize].0, Tag::Base));
        }
        let mut rest = t;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let t_sub = t & !(1u64 << v);
            for i in 0..self.families[v].len() {
                let (d, f) = self.families[v][i];
                if d & !s != 0 {
                    continue;
                }
                let Some((s_sub, tag)) = Self::successor(s, t, v, d) else {
                    continue;
                };
                if f + self.q(s_sub, t_sub) == value {
                    return Some((v, d, tag));
                }
            }
        }
        unreachable!("a finite value is attained by some candidate")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Base,
    Disjoint,
    Overlap,
}

fn check_normalized(instance: &Instance) -> Result<(), SolveError> {
    for fam in instance.families() {
        if fam.get(&NodeSet::new()) != Some(Score::ZERO) {
            return Err(SolveError::Precondition(format!(
                "node {} has no empty parent set with score 0; normalize the instance first",
                instance.name(fam.node())
            )));
        }
    }
    Ok(())
}

fn check_size(instance: &Instance, options: &DpOptions) -> Result<(), SolveError> {
    let n = instance.n();
    if n > MASK_NODE_LIMIT {
        return Err(SolveError::Refused(format!(
            "exact DP supports at most {MASK_NODE_LIMIT} nodes, instance has {n}"
        )));
    }
    if n > DEFAULT_NODE_CAP && !options.force {
        return Err(SolveError::Refused(format!(
            "exact DP is capped at {DEFAULT_NODE_CAP} nodes (instance has {n}); pass force to override"
        )));
    }
    Ok(())
}

/// Exact optimum by the full `(S, T)` dynamic program.
pub fn solve_full_dp(instance: &Instance) -> Result<SolveResult, SolveError> {
    solve_full_dp_with(instance, &DpOptions::default())
}

pub fn solve_full_dp_with(
    instance: &Instance,
    options: &DpOptions,
) -> Result<SolveResult, SolveError> {
    solve(instance, options, None)
}

/// Exact DP restricted to states with `|S| - |T|` within the pruning bound
/// for the augmented instance's in-degree. Never exceeds the full DP's score.
pub fn solve_pruned_dp(instance: &Instance, slack: usize) -> Result<SolveResult, SolveError> {
    solve_pruned_dp_with(instance, slack, &DpOptions::default())
}

pub fn solve_pruned_dp_with(
    instance: &Instance,
    slack: usize,
    options: &DpOptions,
) -> Result<SolveResult, SolveError> {
    solve(instance, options, Some(slack))
}

/// The bound the pruned DP applies to `instance`.
pub fn prune_bound(instance: &Instance, slack: usize) -> PruneBound {
    let (augmented, _) = connectify(instance);
    PruneBound {
        k: augmented.k_eff().max(1),
        n: augmented.n(),
        slack,
    }
}

fn solve(
    instance: &Instance,
    options: &DpOptions,
    slack: Option<usize>,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    check_normalized(instance)?;
    check_size(instance, options)?;
    let n = instance.n();
    if n == 0 {
        return Ok(SolveResult {
            score: Score::ZERO,
            polytree: Polytree::empty(0),
            algorithm: if slack.is_some() { Algorithm::PrunedDp } else { Algorithm::FullDp },
            stats: SolveStats::default(),
            ratio_bound: None,
        });
    }
    let (augmented, aux) = connectify(instance);
    let max_gap = slack.map(|slack| {
        PruneBound {
            k: augmented.k_eff().max(1),
            n: augmented.n(),
            slack,
        }
        .bound()
    });
    let mut table = DpTable::new(&augmented, max_gap)?.with_state_limit(options.max_states);
    if slack.is_none() {
        // Almost every pair is reachable in the full recursion.
        let full = 3usize.pow(augmented.n() as u32);
        let cap = options.max_states.map_or(usize::MAX, |m| m as usize);
        table.reserve(full.min(cap).min(RESERVE_LIMIT));
    }
    let all: NodeSet = (0..augmented.n()).collect();
    let value = table.value(&all, &all);
    if table.is_exhausted() {
        return Err(SolveError::Refused(format!(
            "state limit of {} reached",
            options.max_states.unwrap_or_default()
        )));
    }
    let polytree = match table.traceback(&all, &all) {
        Some(p) => strip_node(&p, aux),
        // Only reachable when pruning cut every derivation.
        None => Polytree::empty(n),
    };
    Ok(SolveResult {
        score: value,
        polytree,
        algorithm: if slack.is_some() { Algorithm::PrunedDp } else { Algorithm::FullDp },
        stats: SolveStats {
            states_visited: table.states_visited(),
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        ratio_bound: None,
    })
}

/// Drops the last node and every arc touching it.
fn strip_node(polytree: &Polytree, aux: NodeId) -> Polytree {
    debug_assert_eq!(aux + 1, polytree.n());
    Polytree::new(
        polytree.parent_sets()[..aux]
            .iter()
            .map(|ps| {
                let mut ps = ps.clone();
                ps.remove(aux);
                ps
            })
            .collect(),
    )
}
