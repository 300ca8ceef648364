use std::fmt;

use crate::model::{Polytree, Score};

/// Which solver produced a [`SolveResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    FullDp,
    PrunedDp,
    BruteForce,
    GreedyParentSets,
    GreedyArcsAdditive,
    GreedyDensityComp,
    /// Parent-set greedy with the component bound, for comparison only.
    GreedyParentSetsComp,
    MaxWeightForest,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::FullDp => "dp",
            Algorithm::PrunedDp => "dp-pruned",
            Algorithm::BruteForce => "brute",
            Algorithm::GreedyParentSets => "greedy",
            Algorithm::GreedyArcsAdditive => "additive",
            Algorithm::GreedyDensityComp => "density",
            Algorithm::GreedyParentSetsComp => "greedy-comp",
            Algorithm::MaxWeightForest => "forest",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    /// Distinct search states evaluated (DP table entries, enumerated
    /// assignments, or committed greedy candidates, depending on the solver).
    pub states_visited: u64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub score: Score,
    pub polytree: Polytree,
    pub algorithm: Algorithm,
    pub stats: SolveStats,
    /// Proven approximation factor, for the approximation algorithms.
    pub ratio_bound: Option<f64>,
}
