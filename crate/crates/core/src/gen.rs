//! Seeded instance generators.
//!
//! Every generator is a pure function of its arguments; randomness comes
//! from a ChaCha stream seeded by [`GenConfig::seed`]. Scores are integers so
//! that solvers can be compared exactly.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, InstanceBuilder, NodeId, NodeSet, ParentSetFamily, Score};

/// Pools up to this size are listed and sampled without replacement;
/// larger ones are sampled by rejection.
const ENUMERATION_LIMIT: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("node {node} has only {available} candidate parent sets, {requested} requested")]
    NotEnoughSets {
        node: NodeId,
        available: u128,
        requested: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub max_parent_size: usize,
    /// Non-empty candidate sets drawn per node (singletons when additive).
    pub sets_per_node: usize,
    pub score_low: i64,
    pub score_high: i64,
    pub seed: u64,
    /// Draw singleton scores only and fill in every union of the drawn
    /// singletons up to `max_parent_size` with the summed score.
    pub additive: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n: 6,
            max_parent_size: 2,
            sets_per_node: 3,
            score_low: 1,
            score_high: 10,
            seed: 0,
            additive: false,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.max_parent_size == 0 || self.max_parent_size >= self.n {
            return Err(GenError::InvalidConfig(format!(
                "need 1 <= max_parent_size < n, got max_parent_size={} n={}",
                self.max_parent_size, self.n
            )));
        }
        if self.score_low > self.score_high {
            return Err(GenError::InvalidConfig(format!(
                "score_low {} exceeds score_high {}",
                self.score_low, self.score_high
            )));
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// All non-empty subsets of `pool` with at most `max` members, in
/// size-then-lexicographic order.
fn subsets_up_to(pool: &[NodeId], max: usize) -> Vec<NodeSet> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(pool: &[NodeId], from: usize, max: usize, current: &mut Vec<NodeId>, out: &mut Vec<NodeSet>) {
        if !current.is_empty() {
            out.push(current.iter().copied().collect());
        }
        if current.len() == max {
            return;
        }
        for i in from..pool.len() {
            current.push(pool[i]);
            rec(pool, i + 1, max, current, out);
            current.pop();
        }
    }
    rec(pool, 0, max, &mut current, &mut out);
    out
}

/// `count` distinct non-empty subsets of `others` with at most `max`
/// members, uniformly at random.
fn draw_sets(
    rng: &mut ChaCha8Rng,
    node: NodeId,
    others: &[NodeId],
    max: usize,
    count: usize,
) -> Result<Vec<NodeSet>, GenError> {
    let by_size: Vec<u128> = (1..=max).map(|s| binomial(others.len(), s)).collect();
    let available: u128 = by_size.iter().sum();
    if (count as u128) > available {
        return Err(GenError::NotEnoughSets {
            node,
            available,
            requested: count,
        });
    }
    if available <= ENUMERATION_LIMIT {
        let pool = subsets_up_to(others, max);
        return Ok(index::sample(rng, pool.len(), count)
            .into_iter()
            .map(|i| pool[i].clone())
            .collect());
    }
    let sizes = WeightedIndex::new(by_size.iter().map(|&c| c as f64)).expect("positive weights");
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = sizes.sample(rng) + 1;
        let set: NodeSet = index::sample(rng, others.len(), size)
            .into_iter()
            .map(|i| others[i])
            .collect();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    Ok(out)
}

/// A random normalized instance; see [`GenConfig`].
pub fn random_instance(cfg: &GenConfig) -> Result<Instance, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut families = Vec::with_capacity(cfg.n);
    for v in 0..cfg.n {
        let others: Vec<NodeId> = (0..cfg.n).filter(|&u| u != v).collect();
        let size = if cfg.additive { 1 } else { cfg.max_parent_size };
        let drawn = draw_sets(&mut rng, v, &others, size, cfg.sets_per_node)?;
        let mut score = || Score::finite(rng.gen_range(cfg.score_low..=cfg.score_high) as f64);
        let entries: Vec<(NodeSet, Score)> = if cfg.additive {
            let mut parents: Vec<NodeId> = drawn.iter().filter_map(NodeSet::max_member).collect();
            parents.sort_unstable();
            let weights: Vec<Score> = parents.iter().map(|_| score()).collect();
            subsets_up_to(&parents, cfg.max_parent_size)
                .into_iter()
                .map(|set| {
                    let total = set
                        .iter()
                        .map(|u| weights[parents.binary_search(&u).expect("drawn parent")])
                        .sum();
                    (set, total)
                })
                .collect()
        } else {
            drawn.into_iter().map(|set| (set, score())).collect()
        };
        families.push(ParentSetFamily::new(
            v,
            std::iter::once((NodeSet::new(), Score::ZERO)).chain(entries),
        ));
    }
    let instance = Instance::with_default_names(families).expect("generated families are valid");
    Ok(if cfg.additive {
        instance.with_additive().expect("additive by construction")
    } else {
        instance
    })
}

/// A family of random instances whose shape parameters are drawn per
/// instance from the given inclusive ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub count: usize,
    pub nodes: (usize, usize),
    pub max_parent_size: (usize, usize),
    pub sets_per_node: (usize, usize),
    pub scores: (i64, i64),
    pub additive: bool,
    pub seed: u64,
}

impl SuiteConfig {
    /// `n ∈ [3, 7]`, sets of at most 3 parents, at most 6 per node, scores in
    /// `[-5, 10]`: small enough for brute force.
    pub fn exhaustive(count: usize, seed: u64) -> Self {
        Self {
            count,
            nodes: (3, 7),
            max_parent_size: (1, 3),
            sets_per_node: (1, 6),
            scores: (-5, 10),
            additive: false,
            seed,
        }
    }

    /// `n ∈ [8, 12]` with in-degree at most 3.
    pub fn medium(count: usize, seed: u64) -> Self {
        Self {
            nodes: (8, 12),
            sets_per_node: (2, 6),
            ..Self::exhaustive(count, seed)
        }
    }

    /// Additive instances on `n ∈ [3, 7]` with up to `singletons` candidate
    /// parents per node, every union up to `max_parent_size` materialized.
    pub fn additive(count: usize, seed: u64, singletons: usize, max_parent_size: usize) -> Self {
        Self {
            count,
            nodes: (3, 7),
            max_parent_size: (max_parent_size, max_parent_size),
            sets_per_node: (1, singletons),
            scores: (-5, 10),
            additive: true,
            seed,
        }
    }
}

/// Builds the instances of a suite. Ranges are clipped per instance so that
/// every draw is feasible.
pub fn suite(cfg: &SuiteConfig) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count)
        .map(|_| {
            let n = rng.gen_range(cfg.nodes.0.max(2)..=cfg.nodes.1.max(2));
            let max_parent_size =
                rng.gen_range(cfg.max_parent_size.0..=cfg.max_parent_size.1).clamp(1, n - 1);
            let pool_size = if cfg.additive { 1 } else { max_parent_size };
            let pool: u128 = (1..=pool_size).map(|s| binomial(n - 1, s)).sum();
            let sets_per_node = rng
                .gen_range(cfg.sets_per_node.0..=cfg.sets_per_node.1)
                .min(pool.min(usize::MAX as u128) as usize);
            let gen = GenConfig {
                n,
                max_parent_size,
                sets_per_node,
                score_low: cfg.scores.0,
                score_high: cfg.scores.1,
                seed: rng.gen(),
                additive: cfg.additive,
            };
            random_instance(&gen).expect("clipped configuration is feasible")
        })
        .collect()
}

/// Hub `c` with the single set `{a_1, …, a_k}`, and a chain `a_{i+1} → a_i`
/// of singleton sets. Greedy by score takes the hub and blocks every chain
/// arc; the optimum is the chain when `(k - 1) · ring > hub`.
pub fn adversarial_hub(k: usize, hub_score: f64, ring_score: f64) -> Result<Instance, GenError> {
    if k < 2 {
        return Err(GenError::InvalidConfig(format!("hub needs k >= 2, got {k}")));
    }
    if !(hub_score > ring_score && ring_score > 0.0 && hub_score.is_finite()) {
        return Err(GenError::InvalidConfig(format!(
            "need hub_score > ring_score > 0, got {hub_score} and {ring_score}"
        )));
    }
    let ring: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = ring.iter().map(String::as_str).collect();
    let mut builder = InstanceBuilder::new(std::iter::once("c").chain(refs.iter().copied()))
        .entry("c", &refs, hub_score);
    for pair in refs.windows(2) {
        builder = builder.entry(pair[0], &[pair[1]], ring_score);
    }
    Ok(builder.build_normalized().expect("hub instance is valid"))
}
