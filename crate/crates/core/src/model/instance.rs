use std::collections::HashMap;

use crate::error::ModelError;
use crate::model::{NodeId, NodeSet, Score};

/// Absolute tolerance for comparing an entry against its additive expansion.
pub const ADDITIVE_TOLERANCE: f64 = 1e-9;

/// Candidate parent sets of one node with their local scores.
///
/// Entries are kept sorted in [`NodeSet`] order with no duplicates. Sets
/// scored `-inf` are dropped: under the non-zero encoding an absent set
/// already scores `-inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParentSetFamily {
    node: NodeId,
    entries: Vec<(NodeSet, Score)>,
}

impl ParentSetFamily {
    /// Duplicate parent sets collapse to their maximum score.
    pub fn new(node: NodeId, entries: impl IntoIterator<Item = (NodeSet, Score)>) -> Self {
        let mut entries: Vec<_> = entries
            .into_iter()
            .filter(|(_, s)| s.is_finite())
            .collect();
        // Sort descending by score inside equal sets so dedup keeps the max.
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        entries.dedup_by(|later, first| later.0 == first.0);
        Self { node, entries }
    }

    /// A family containing only the empty set with score 0.
    pub fn empty_only(node: NodeId) -> Self {
        Self {
            node,
            entries: vec![(NodeSet::new(), Score::ZERO)],
        }
    }

    pub fn node(&self) -> NodeId {
        self.node
    }

    pub fn entries(&self) -> &[(NodeSet, Score)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, parents: &NodeSet) -> Option<Score> {
        self.entries
            .binary_search_by(|(s, _)| s.cmp(parents))
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Local score with the non-zero encoding: `-inf` when absent.
    pub fn score_of(&self, parents: &NodeSet) -> Score {
        self.get(parents).unwrap_or(Score::NEG_INFINITY)
    }

    pub fn max_parent_size(&self) -> usize {
        self.entries.iter().map(|(s, _)| s.len()).max().unwrap_or(0)
    }
}

/// A polytree learning instance: named nodes, one family per node, and the
/// optional in-degree (`k`) and per-component arc (`q`) bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    names: Vec<String>,
    families: Vec<ParentSetFamily>,
    max_indegree: Option<usize>,
    max_component_arcs: Option<usize>,
    additive: bool,
}

impl Instance {
    pub fn new(names: Vec<String>, families: Vec<ParentSetFamily>) -> Result<Self, ModelError> {
        let n = names.len();
        if families.len() != n {
            return Err(ModelError::FamilyCount {
                expected: n,
                got: families.len(),
            });
        }
        let mut seen = HashMap::with_capacity(n);
        for name in &names {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(ModelError::InvalidName(name.clone()));
            }
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        for (v, fam) in families.iter().enumerate() {
            if fam.node != v {
                return Err(ModelError::NodeOutOfRange { node: fam.node, n });
            }
            for (parents, _) in &fam.entries {
                if parents.contains(v) {
                    return Err(ModelError::SelfParent { node: v });
                }
                if let Some(m) = parents.max_member().filter(|&m| m >= n) {
                    return Err(ModelError::NodeOutOfRange { node: m, n });
                }
            }
        }
        Ok(Self {
            names,
            families,
            max_indegree: None,
            max_component_arcs: None,
            additive: false,
        })
    }

    /// Nodes named `v0, v1, …`.
    pub fn with_default_names(families: Vec<ParentSetFamily>) -> Result<Self, ModelError> {
        let names = (0..families.len()).map(|i| format!("v{i}")).collect();
        Self::new(names, families)
    }

    /// Restricts to parent sets of size at most `k` and records the bound.
    pub fn with_max_indegree(mut self, k: usize) -> Result<Self, ModelError> {
        if k == 0 {
            return Err(ModelError::ZeroBound);
        }
        for fam in &mut self.families {
            fam.entries.retain(|(s, _)| s.len() <= k);
        }
        self.max_indegree = Some(k);
        Ok(self)
    }

    pub fn with_max_component_arcs(mut self, q: usize) -> Result<Self, ModelError> {
        if q == 0 {
            return Err(ModelError::ZeroBound);
        }
        self.max_component_arcs = Some(q);
        Ok(self)
    }

    /// Declares the scores additive, checking every entry against the sum of
    /// its singleton scores.
    pub fn with_additive(mut self) -> Result<Self, ModelError> {
        if let Some(node) = first_non_additive(&self) {
            return Err(ModelError::NotAdditive { node });
        }
        self.additive = true;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|x| x == name)
    }

    pub fn families(&self) -> &[ParentSetFamily] {
        &self.families
    }

    pub fn family(&self, v: NodeId) -> &ParentSetFamily {
        &self.families[v]
    }

    pub fn max_indegree(&self) -> Option<usize> {
        self.max_indegree
    }

    pub fn max_component_arcs(&self) -> Option<usize> {
        self.max_component_arcs
    }

    pub fn is_additive(&self) -> bool {
        self.additive
    }

    /// Largest candidate parent set over all families.
    pub fn k_eff(&self) -> usize {
        self.families
            .iter()
            .map(ParentSetFamily::max_parent_size)
            .max()
            .unwrap_or(0)
    }

    /// The declared in-degree bound, falling back to [`Self::k_eff`].
    pub fn effective_max_indegree(&self) -> usize {
        self.max_indegree.unwrap_or_else(|| self.k_eff())
    }

    pub fn local_score(&self, v: NodeId, parents: &NodeSet) -> Score {
        self.families[v].score_of(parents)
    }

    /// Total number of family entries.
    pub fn size(&self) -> usize {
        self.families.iter().map(ParentSetFamily::len).sum()
    }

    /// True when every family holds the empty set with score exactly 0.
    pub fn is_normalized(&self) -> bool {
        self.families
            .iter()
            .all(|f| f.get(&NodeSet::new()) == Some(Score::ZERO))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalizeWarning {
    /// The family had no empty parent set; one was inserted with score 0.
    MissingEmptySet { node: NodeId },
    /// Every score of the family was shifted by `-offset`.
    Shifted { node: NodeId, offset: f64 },
}

/// Shifts each family so that the empty parent set scores exactly 0,
/// inserting it where missing. Maximizers are unchanged.
pub fn normalize(instance: &Instance) -> (Instance, Vec<NormalizeWarning>) {
    let mut warnings = Vec::new();
    let families = instance
        .families
        .iter()
        .map(|fam| {
            let node = fam.node;
            match fam.get(&NodeSet::new()) {
                None => {
                    warnings.push(NormalizeWarning::MissingEmptySet { node });
                    let mut entries = fam.entries.clone();
                    entries.push((NodeSet::new(), Score::ZERO));
                    ParentSetFamily::new(node, entries)
                }
                Some(base) if base == Score::ZERO => fam.clone(),
                Some(base) => {
                    warnings.push(NormalizeWarning::Shifted {
                        node,
                        offset: base.value(),
                    });
                    let entries = fam
                        .entries
                        .iter()
                        .map(|(s, x)| {
                            let shifted = if s.is_empty() {
                                Score::ZERO
                            } else {
                                Score::finite(x.value() - base.value())
                            };
                            (s.clone(), shifted)
                        })
                        .collect();
                    ParentSetFamily { node, entries }
                }
            }
        })
        .collect();
    let out = Instance {
        families,
        ..instance.clone()
    };
    (out, warnings)
}

/// True iff every non-singleton entry equals the sum of the family's
/// singleton scores over its members (a missing singleton counts as `-inf`).
pub fn is_additive_consistent(instance: &Instance) -> bool {
    first_non_additive(instance).is_none()
}

fn first_non_additive(instance: &Instance) -> Option<NodeId> {
    instance.families.iter().position(|fam| {
        fam.entries.iter().any(|(parents, score)| {
            if parents.len() == 1 {
                return false;
            }
            let expected: Score = parents
                .iter()
                .map(|u| fam.score_of(&NodeSet::singleton(u)))
                .sum();
            !(expected.is_finite() && (expected.value() - score.value()).abs() <= ADDITIVE_TOLERANCE)
        })
    })
}

/// Name-based construction, mostly for tests and small hand-built instances.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    names: Vec<String>,
    entries: Vec<Vec<(NodeSet, Score)>>,
}

impl InstanceBuilder {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let entries = vec![Vec::new(); names.len()];
        Self { names, entries }
    }

    /// # Panics
    /// On an unknown node name.
    pub fn entry(mut self, node: &str, parents: &[&str], score: impl Into<f64>) -> Self {
        let v = self.index(node);
        let set = parents.iter().map(|p| self.index(p)).collect();
        let score = Score::new(score.into()).expect("score must not be NaN or +inf");
        self.entries[v].push((set, score));
        self
    }

    fn index(&self, name: &str) -> NodeId {
        self.names
            .iter()
            .position(|x| x == name)
            .unwrap_or_else(|| panic!("unknown node {name:?}"))
    }

    pub fn build(self) -> Result<Instance, ModelError> {
        let families = self
            .entries
            .into_iter()
            .enumerate()
            .map(|(v, e)| ParentSetFamily::new(v, e))
            .collect();
        Instance::new(self.names, families)
    }

    /// Builds and normalizes, discarding the warnings.
    pub fn build_normalized(self) -> Result<Instance, ModelError> {
        Ok(normalize(&self.build()?).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(inst: &Instance, node: &str) -> Vec<(Vec<String>, f64)> {
        inst.family(inst.index_of(node).unwrap())
            .entries()
            .iter()
            .map(|(s, x)| (s.iter().map(|u| inst.name(u).to_string()).collect(), x.value()))
            .collect()
    }

    #[test]
    fn normalize_shifts_by_empty_score() {
        let inst = InstanceBuilder::new(["a", "b"])
            .entry("a", &[], -3.0)
            .entry("a", &["b"], 2.0)
            .entry("b", &[], 0.0)
            .build()
            .unwrap();
        let (norm, warnings) = normalize(&inst);
        assert_eq!(
            entries(&norm, "a"),
            vec![(vec![], 0.0), (vec!["b".to_string()], 5.0)]
        );
        assert_eq!(warnings, vec![NormalizeWarning::Shifted { node: 0, offset: -3.0 }]);
    }

    #[test]
    fn normalize_is_identity_on_normalized() {
        let inst = InstanceBuilder::new(["a", "b"])
            .entry("a", &[], 0.0)
            .entry("a", &["b"], 2.0)
            .entry("b", &[], 0.0)
            .build()
            .unwrap();
        let (norm, warnings) = normalize(&inst);
        assert_eq!(norm, inst);
        assert!(warnings.is_empty());
    }

    #[test]
    fn normalize_inserts_missing_empty_set() {
        let inst = InstanceBuilder::new(["a", "b"])
            .entry("a", &["b"], 2.0)
            .entry("b", &[], 0.0)
            .build()
            .unwrap();
        let (norm, warnings) = normalize(&inst);
        assert_eq!(
            entries(&norm, "a"),
            vec![(vec![], 0.0), (vec!["b".to_string()], 2.0)]
        );
        assert_eq!(warnings, vec![NormalizeWarning::MissingEmptySet { node: 0 }]);
        assert!(norm.is_normalized());
    }

    #[test]
    fn duplicates_collapse_to_max() {
        let inst = InstanceBuilder::new(["a", "b"])
            .entry("a", &["b"], 2.0)
            .entry("a", &["b"], 7.0)
            .entry("a", &["b"], 1.0)
            .build()
            .unwrap();
        assert_eq!(entries(&inst, "a"), vec![(vec!["b".to_string()], 7.0)]);
    }

    #[test]
    fn neg_infinity_entries_are_absent() {
        let inst = InstanceBuilder::new(["a", "b"])
            .entry("a", &["b"], f64::NEG_INFINITY)
            .build()
            .unwrap();
        assert!(inst.family(0).is_empty());
    }

    #[test]
    fn rejects_self_parent_and_bad_names() {
        let fam = ParentSetFamily::new(0, [(NodeSet::singleton(0), Score::ZERO)]);
        assert_eq!(
            Instance::with_default_names(vec![fam]),
            Err(ModelError::SelfParent { node: 0 })
        );
        let e = Instance::new(
            vec!["a".into(), "a".into()],
            vec![ParentSetFamily::empty_only(0), ParentSetFamily::empty_only(1)],
        );
        assert_eq!(e, Err(ModelError::DuplicateName("a".into())));
        let e = Instance::new(vec!["a b".into()], vec![ParentSetFamily::empty_only(0)]);
        assert!(matches!(e, Err(ModelError::InvalidName(_))));
    }

    #[test]
    fn additive_consistency() {
        let base = || {
            InstanceBuilder::new(["a", "b", "c"])
                .entry("c", &["a"], 2.0)
                .entry("c", &["b"], 3.0)
        };
        assert!(is_additive_consistent(&base().entry("c", &["a", "b"], 5.0).build().unwrap()));
        assert!(!is_additive_consistent(&base().entry("c", &["a", "b"], 6.0).build().unwrap()));
        let singletons_only = base().entry("c", &[], 0.0).build().unwrap();
        assert!(is_additive_consistent(&singletons_only));
        let missing = InstanceBuilder::new(["a", "b", "c"])
            .entry("c", &["a"], 2.0)
            .entry("c", &["a", "b"], 2.0)
            .build()
            .unwrap();
        assert!(!is_additive_consistent(&missing));
        assert!(missing.with_additive().is_err());
    }

    #[test]
    fn indegree_bound_filters_and_k_eff() {
        let inst = InstanceBuilder::new(["a", "b", "c"])
            .entry("c", &["a", "b"], 5.0)
            .entry("c", &["a"], 1.0)
            .build_normalized()
            .unwrap();
        assert_eq!(inst.k_eff(), 2);
        assert_eq!(inst.effective_max_indegree(), 2);
        let bounded = inst.with_max_indegree(1).unwrap();
        assert_eq!(bounded.k_eff(), 1);
        assert_eq!(bounded.max_indegree(), Some(1));
        assert_eq!(bounded.family(2).len(), 2);
    }
}
