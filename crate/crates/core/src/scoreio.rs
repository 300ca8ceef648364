//! Text formats: local-score files, undirected graphs, set families, and the
//! JSON solve record.
//!
//! Score files use the per-variable layout common to exact Bayesian network
//! solvers:
//!
//! ```text
//! <n>
//! <name> <m>
//! <score> <p> <parent_1> ... <parent_p>     (m lines)
//! ...                                       (repeated for each variable)
//! ```
//!
//! Tokens may be separated by any whitespace and blank lines are ignored.
//! Variable order in the file is node order.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::ParseError;
use crate::model::{Instance, NodeSet, ParentSetFamily, Score, SolveResult};

/// Non-blank lines with their 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_tokens(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((i + 1, tokens));
            }
        }
        Err(ParseError::new(
            self.last + 1,
            format!("unexpected end of input, expected {what}"),
        ))
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        for (i, line) in self.inner.by_ref() {
            if !line.trim().is_empty() {
                return Err(ParseError::new(i + 1, "unexpected trailing content"));
            }
        }
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("expected {what}, found {tok:?}")))
}

fn expect_len(tokens: &[&str], len: usize, line: usize, what: &str) -> Result<(), ParseError> {
    if tokens.len() != len {
        return Err(ParseError::new(
            line,
            format!("expected {what} ({len} tokens), found {} tokens", tokens.len()),
        ));
    }
    Ok(())
}

/// Parses a local-score file. Duplicate parent sets keep their best score.
pub fn parse_scores(text: &str) -> Result<Instance, ParseError> {
    struct Pending<'a> {
        line: usize,
        score: Score,
        parents: Vec<&'a str>,
    }

    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next_tokens("variable count")?;
    expect_len(&tokens, 1, line, "variable count")?;
    let n = parse_usize(tokens[0], line, "variable count")?;

    let mut names: Vec<String> = Vec::with_capacity(n);
    let mut seen = HashSet::with_capacity(n);
    let mut pending: Vec<Vec<Pending>> = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, tokens) = lines.next_tokens("variable header")?;
        expect_len(&tokens, 2, line, "variable header `name count`")?;
        let name = tokens[0];
        if !seen.insert(name) {
            return Err(ParseError::new(line, format!("duplicate variable name {name:?}")));
        }
        let m = parse_usize(tokens[1], line, "parent set count")?;
        let mut records = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, tokens) = lines.next_tokens("parent set record")?;
            if tokens.len() < 2 {
                return Err(ParseError::new(line, "expected `score count parents...`"));
            }
            let score = tokens[0]
                .parse::<f64>()
                .ok()
                .and_then(Score::new)
                .ok_or_else(|| ParseError::new(line, format!("invalid score {:?}", tokens[0])))?;
            let p = parse_usize(tokens[1], line, "parent count")?;
            if tokens.len() - 2 != p {
                return Err(ParseError::new(
                    line,
                    format!("parent count {p} does not match {} listed parents", tokens.len() - 2),
                ));
            }
            records.push(Pending {
                line,
                score,
                parents: tokens[2..].to_vec(),
            });
        }
        names.push(name.to_string());
        pending.push(records);
    }
    lines.expect_end()?;

    let index = |name: &str| names.iter().position(|x| x == name);
    let mut families = Vec::with_capacity(n);
    for (v, records) in pending.iter().enumerate() {
        let mut entries = Vec::with_capacity(records.len());
        for rec in records {
            let mut set = NodeSet::new();
            for &p in &rec.parents {
                let u = index(p).ok_or_else(|| {
                    ParseError::new(rec.line, format!("unknown parent name {p:?}"))
                })?;
                if u == v {
                    return Err(ParseError::new(
                        rec.line,
                        format!("variable {p:?} lists itself as a parent"),
                    ));
                }
                if !set.insert(u) {
                    return Err(ParseError::new(rec.line, format!("repeated parent {p:?}")));
                }
            }
            entries.push((set, rec.score));
        }
        families.push(ParentSetFamily::new(v, entries));
    }
    Instance::new(names, families).map_err(|e| ParseError::new(1, e.to_string()))
}

/// Writes a score file that [`parse_scores`] reads back to an equal instance.
///
/// Bounds and the additive flag are not part of the format.
pub fn write_scores(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{}", instance.n()).unwrap();
    for fam in instance.families() {
        writeln!(out, "{} {}", instance.name(fam.node()), fam.len()).unwrap();
        for (parents, score) in fam.entries() {
            write!(out, "{} {}", score, parents.len()).unwrap();
            for u in parents {
                write!(out, " {}", instance.name(u)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

/// Simple undirected graph with edges stored as `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInput {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphInput {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(format!("edge {u} {v} out of range for {n} nodes"));
            }
            if u == v {
                return Err(format!("self-loop at node {u}"));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(format!("duplicate edge {u} {v}"));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Indices into `edges` of the edges touching `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
    }
}

/// Graph format: `n m` followed by `m` lines `u v` (0-based).
pub fn parse_graph(text: &str) -> Result<GraphInput, ParseError> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next_tokens("graph header `n m`")?;
    expect_len(&tokens, 2, line, "graph header `n m`")?;
    let n = parse_usize(tokens[0], line, "node count")?;
    let m = parse_usize(tokens[1], line, "edge count")?;
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, tokens) = lines.next_tokens("edge")?;
        expect_len(&tokens, 2, line, "edge `u v`")?;
        let u = parse_usize(tokens[0], line, "node index")?;
        let v = parse_usize(tokens[1], line, "node index")?;
        if u >= n || v >= n {
            return Err(ParseError::new(line, format!("node index out of range for {n} nodes")));
        }
        if u == v {
            return Err(ParseError::new(line, format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::new(line, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    lines.expect_end()?;
    Ok(GraphInput::new(n, edges).expect("validated above"))
}

pub fn write_graph(graph: &GraphInput) -> String {
    let mut out = format!("{} {}\n", graph.n, graph.edges.len());
    for (u, v) in &graph.edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Universe `0..universe`, a family of nonempty subsets, and a budget `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamilyInput {
    pub universe: usize,
    pub sets: Vec<NodeSet>,
    pub t: usize,
}

impl SetFamilyInput {
    pub fn new(universe: usize, sets: Vec<NodeSet>, t: usize) -> Result<Self, String> {
        if t > universe {
            return Err(format!("budget {t} exceeds universe size {universe}"));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(format!("set {i} is empty"));
            }
            if s.max_member().is_some_and(|m| m >= universe) {
                return Err(format!("set {i} has an element outside the universe"));
            }
        }
        Ok(Self { universe, sets, t })
    }

    /// Largest set size.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(NodeSet::len).max().unwrap_or(0)
    }
}

/// Set-family format: `n' m t` followed by `m` lines `size e_1 ... e_size`.
pub fn parse_set_family(text: &str) -> Result<SetFamilyInput, ParseError> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next_tokens("family header `n m t`")?;
    expect_len(&tokens, 3, line, "family header `n m t`")?;
    let universe = parse_usize(tokens[0], line, "universe size")?;
    let m = parse_usize(tokens[1], line, "set count")?;
    let t = parse_usize(tokens[2], line, "budget")?;
    if t > universe {
        return Err(ParseError::new(line, format!("budget {t} exceeds universe size {universe}")));
    }
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, tokens) = lines.next_tokens("set")?;
        let size = parse_usize(tokens[0], line, "set size")?;
        if size == 0 {
            return Err(ParseError::new(line, "empty set"));
        }
        if tokens.len() - 1 != size {
            return Err(ParseError::new(
                line,
                format!("set size {size} does not match {} listed elements", tokens.len() - 1),
            ));
        }
        let mut set = NodeSet::new();
        for tok in &tokens[1..] {
            let e = parse_usize(tok, line, "element")?;
            if e >= universe {
                return Err(ParseError::new(line, format!("element {e} out of range")));
            }
            if !set.insert(e) {
                return Err(ParseError::new(line, format!("repeated element {e}")));
            }
        }
        sets.push(set);
    }
    lines.expect_end()?;
    Ok(SetFamilyInput { universe, sets, t })
}

pub fn write_set_family(family: &SetFamilyInput) -> String {
    let mut out = format!("{} {} {}\n", family.universe, family.sets.len(), family.t);
    for s in &family.sets {
        write!(out, "{}", s.len()).unwrap();
        for e in s {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    score: serde_json::Value,
    arcs: Vec<[&'a str; 2]>,
    algorithm: &'a str,
    n: usize,
    states_visited: u64,
    runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_bound: Option<f64>,
}

/// Score as a JSON number, or the string `"-inf"`.
pub fn score_json(score: Score) -> serde_json::Value {
    if score.is_finite() {
        serde_json::Value::from(score.value())
    } else {
        serde_json::Value::from("-inf")
    }
}

/// JSON record of a solve, arcs as `[parent, child]` name pairs sorted by
/// (child, parent).
pub fn write_result(result: &SolveResult, names: &[String]) -> String {
    let arcs = result
        .polytree
        .arcs()
        .into_iter()
        .map(|(p, c)| [names[p].as_str(), names[c].as_str()])
        .collect();
    let record = ResultRecord {
        score: score_json(result.score),
        arcs,
        algorithm: result.algorithm.tag(),
        n: result.polytree.n(),
        states_visited: result.stats.states_visited,
        runtime_ms: result.stats.runtime_ms,
        ratio_bound: result.ratio_bound,
    };
    let mut out = serde_json::to_string_pretty(&record).expect("record serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Algorithm, Polytree, SolveStats};

    #[test]
    fn single_variable() {
        let inst = parse_scores("1\nA 1\n0.0 0\n").unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.family(0).entries(), &[(NodeSet::new(), Score::ZERO)]);
    }

    #[test]
    fn parent_references() {
        let inst = parse_scores("2\nA 1\n0.0 0\nB 2\n0.0 0\n4.5 1 A\n").unwrap();
        assert_eq!(inst.family(1).get(&NodeSet::singleton(0)), Some(Score::finite(4.5)));
    }

    #[test]
    fn forward_references_resolve() {
        let inst = parse_scores("2\nA 1\n-1 1 B\nB 1\n0 0\n").unwrap();
        assert_eq!(inst.family(0).get(&NodeSet::singleton(1)), Some(Score::from(-1)));
    }

    #[test]
    fn unknown_parent_reports_line() {
        let err = parse_scores("2\nA 1\n0.0 0\nB 1\n1.0 1 C\n").unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains("unknown parent name"), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        let count = parse_scores("1\nA 1\n1.0 2 B\n").unwrap_err();
        assert_eq!(count.line, 3);
        assert!(parse_scores("1\nA 2\n0 0\n").is_err());
        assert!(parse_scores("1\nA 1\nx 0\n").unwrap_err().message.contains("invalid score"));
        assert!(parse_scores("1\nA 1\nnan 0\n").is_err());
        assert_eq!(parse_scores("1\nA 1\n0 0\nextra\n").unwrap_err().line, 4);
        assert_eq!(parse_scores("2\nA 1\n0 0\nA 1\n0 0\n").unwrap_err().line, 4);
        assert!(parse_scores("1\nA 1\n1 1 A\n").is_err());
    }

    #[test]
    fn whitespace_tolerant() {
        let a = parse_scores("2\n\nA 1\n 0.0\t0 \nB   2\n0 0\n4.5 1   A\n\n").unwrap();
        let b = parse_scores("2\nA 1\n0.0 0\nB 2\n0.0 0\n4.5 1 A\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn write_round_trips_and_keeps_precision() {
        let text = "2\nA 1\n0.0 0\nB 2\n0.0 0\n4.5 1 A\n";
        let inst = parse_scores(text).unwrap();
        assert_eq!(parse_scores(&write_scores(&inst)).unwrap(), inst);
        assert_eq!(write_scores(&inst), "2\nA 1\n0 0\nB 2\n0 0\n4.5 1 A\n");

        let big = format!("1\nA 1\n{} 0\n", 2f64.powi(53));
        let inst = parse_scores(&big).unwrap();
        assert_eq!(write_scores(&inst), "1\nA 1\n9007199254740992 0\n");
    }

    #[test]
    fn graph_format() {
        let g = parse_graph("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(g.max_degree(), 2);
        assert!(parse_graph("2 1\n0 0\n").unwrap_err().message.contains("self-loop"));
        assert!(parse_graph("3 2\n0 1\n1 0\n").unwrap_err().message.contains("duplicate"));
        assert!(parse_graph("2 1\n0 2\n").is_err());
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn set_family_format() {
        let f = parse_set_family("4 2 2\n2 0 1\n2 2 3\n").unwrap();
        assert_eq!(f.universe, 4);
        assert_eq!(f.sets, vec![NodeSet::from([0, 1]), NodeSet::from([2, 3])]);
        assert_eq!(f.t, 2);
        assert!(parse_set_family("2 1 1\n1 5\n").is_err());
        assert!(parse_set_family("2 1 3\n1 0\n").is_err());
        assert!(parse_set_family("2 1 1\n0\n").is_err());
        assert_eq!(parse_set_family(&write_set_family(&f)).unwrap(), f);
    }

    fn result(score: Score, polytree: Polytree) -> SolveResult {
        SolveResult {
            score,
            polytree,
            algorithm: Algorithm::FullDp,
            stats: SolveStats::default(),
            ratio_bound: None,
        }
    }

    #[test]
    fn result_records() {
        let names = vec!["A".to_string(), "B".to_string()];
        let empty: serde_json::Value =
            serde_json::from_str(&write_result(&result(Score::ZERO, Polytree::empty(2)), &names))
                .unwrap();
        assert_eq!(empty["arcs"], serde_json::json!([]));
        assert_eq!(empty["score"], serde_json::json!(0.0));

        let one = write_result(
            &result(Score::finite(4.5), Polytree::from_arcs(2, [(0, 1)])),
            &names,
        );
        let one: serde_json::Value = serde_json::from_str(&one).unwrap();
        assert_eq!(one["arcs"], serde_json::json!([["A", "B"]]));
        assert_eq!(one["score"], serde_json::json!(4.5));

        let inf = write_result(&result(Score::NEG_INFINITY, Polytree::empty(2)), &names);
        assert!(inf.contains("\"score\": \"-inf\""));
        let keys: Vec<_> = inf.lines().filter_map(|l| l.trim().split('"').nth(1)).collect();
        assert_eq!(
            keys,
            ["score", "arcs", "algorithm", "n", "states_visited", "runtime_ms"]
        );
    }
}
