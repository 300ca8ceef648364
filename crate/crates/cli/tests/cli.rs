use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polytree_core::gen::{suite, SuiteConfig};
use serde_json::Value;

fn polytree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polytree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON result")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_all_empty() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tiny.jkl", "2\nA 1\n0 0\nB 1\n0 0\n");
    let r = json(&polytree(&["solve", "--scores", &f, "--algo", "dp"]));
    assert_eq!(r["score"], 0.0);
    assert_eq!(r["arcs"], Value::Array(vec![]));
    assert_eq!(r["algorithm"], "dp");
}

#[test]
fn node_cap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("big.jkl");
    let f = f.to_str().unwrap();
    assert!(polytree(&["gen", "--n", "30", "--out", f]).status.success());
    let out = polytree(&["solve", "--scores", f, "--algo", "dp"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("force"));
}

#[test]
fn pruned_and_full_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("suite17.jkl");
    let f = f.to_str().unwrap();
    assert!(polytree(&["gen", "--n", "8", "--max-parent-size", "3", "--seed", "17", "--out", f]).status.success());
    let full = json(&polytree(&["solve", "--scores", f, "--algo", "dp"]));
    let pruned = json(&polytree(&["solve", "--scores", f, "--algo", "dp-pruned", "--slack", "2"]));
    assert_eq!(full["score"], pruned["score"]);
    let brute = json(&polytree(&["solve", "--scores", f, "--algo", "brute", "--max-indegree", "3"]));
    assert_eq!(full["score"], brute["score"]);
}

#[test]
fn parse_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.jkl", "2\nA 1\n0.0 0\nB 1\n1.0 1 C\n");
    let out = polytree(&["solve", "--scores", &f]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("unknown parent name"), "{err}");
}

#[test]
fn normalization_warns() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "shift.jkl", "2\nA 1\n-3 0\nB 1\n2 1 A\n");
    let out = polytree(&["solve", "--scores", &f, "--algo", "brute"]);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("shifted") && err.contains("no empty parent set"), "{err}");
    assert_eq!(json(&out)["score"], 2.0);
    let raw = json(&polytree(&["solve", "--scores", &f, "--algo", "brute", "--no-normalize"]));
    assert_eq!(raw["score"], -1.0);
}

#[test]
fn dp_refuses_component_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tiny.jkl", "2\nA 1\n0 0\nB 2\n0 0\n1 1 A\n");
    for flag in [&["--connected"][..], &["--max-component-arcs", "1"][..]] {
        let mut args = vec!["solve", "--scores", &f, "--algo", "dp"];
        args.extend_from_slice(flag);
        assert_eq!(polytree(&args).status.code(), Some(2));
    }
    let r = json(&polytree(&["solve", "--scores", &f, "--algo", "brute", "--connected"]));
    assert_eq!(r["score"], 1.0);
}

#[test]
fn approx_greedy_on_hub() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("hub.jkl");
    let f = f.to_str().unwrap();
    assert!(polytree(&["gen", "--hub", "5", "--out", f]).status.success());
    let r = json(&polytree(&["approx", "--scores", f, "--algo", "greedy"]));
    assert_eq!(r["score"], 10.0);
    assert_eq!(r["ratio_bound"], 6.0);
}

#[test]
fn approx_density_with_q_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.jkl");
    let f = f.to_str().unwrap();
    assert!(polytree(&["gen", "--n", "7", "--seed", "3", "--out", f]).status.success());
    let r = json(&polytree(&["approx", "--scores", f, "--algo", "density", "--max-component-arcs", "1"]));
    assert_eq!(r["ratio_bound"], 2.0);
    let arcs = r["arcs"].as_array().unwrap();
    let mut children: Vec<_> = arcs.iter().map(|a| a[1].as_str().unwrap()).collect();
    children.sort();
    children.dedup();
    assert_eq!(children.len(), arcs.len());
    let missing = polytree(&["approx", "--scores", f, "--algo", "density"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn approx_additive() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "pair.jkl", "3\na 1\n0 0\nb 1\n0 0\nc 2\n0 0\n5 2 a b\n");
    assert_eq!(polytree(&["approx", "--scores", &bad, "--algo", "additive"]).status.code(), Some(1));
    let good = dir.path().join("add.jkl");
    let good = good.to_str().unwrap();
    assert!(polytree(&["gen", "--additive", "--seed", "2", "--out", good]).status.success());
    let r = json(&polytree(&["approx", "--scores", good, "--algo", "additive", "--max-indegree", "1"]));
    assert_eq!(r["ratio_bound"], 2.0);
}

#[test]
fn reduce_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "triangle.graph", "3 3\n0 1\n1 2\n0 2\n");
    let out = dir.path().join("tri.jkl");
    let out = out.to_str().unwrap();
    assert!(polytree(&["reduce", "indset", "--in", &g, "--out", out]).status.success());
    let r = json(&polytree(&["solve", "--scores", out, "--algo", "dp"]));
    assert_eq!(r["score"], 1.0);
    let cert: Value = serde_json::from_str(&fs::read_to_string(format!("{out}.cert.json")).unwrap()).unwrap();
    assert_eq!(cert["kind"], "independent_set");
    assert_eq!(cert["roles"].as_array().unwrap().len(), 7);

    let fam = write(dir.path(), "fam.txt", "4 2 2\n2 0 1\n2 2 3\n");
    let sp = dir.path().join("sp.jkl");
    let sp = sp.to_str().unwrap();
    assert!(polytree(&["reduce", "setpart", "--in", &fam, "--epsilon-inv", "2", "--out", sp]).status.success());
    assert_eq!(json(&polytree(&["solve", "--scores", sp]))["score"], 4.0);

    let path = write(dir.path(), "path.graph", "3 2\n0 1\n1 2\n");
    let comp = dir.path().join("comp.jkl");
    let comp = comp.to_str().unwrap();
    let red = polytree(&["reduce", "indset-comp", "--in", &path, "--out", comp]);
    assert!(String::from_utf8_lossy(&red.stderr).contains("--max-component-arcs 3"));
    let r = json(&polytree(&["solve", "--scores", comp, "--algo", "brute", "--max-component-arcs", "3"]));
    assert_eq!(r["score"], 2.0);

    let bad = write(dir.path(), "loop.graph", "2 1\n0 0\n");
    assert_eq!(polytree(&["reduce", "indset", "--in", &bad]).status.code(), Some(1));
}

#[test]
fn gen_is_deterministic() {
    let a = polytree(&["gen", "--n", "6", "--seed", "7"]);
    let b = polytree(&["gen", "--n", "6", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = polytree(&["gen", "--n", "6", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn bench_rows_respect_their_bounds() {
    let out = polytree(&["bench", "--suite", "small", "--count", "12", "--seed", "4"]);
    assert!(out.status.success());
    let instances = suite(&SuiteConfig::exhaustive(12, 4));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["instance", "n", "algo", "score", "opt", "ratio", "states_visited", "runtime_ms"]
    );
    let mut rows = 0;
    for row in reader.records() {
        let row = row.unwrap();
        let i: usize = row[0].trim_start_matches("small-").parse().unwrap();
        let ratio: f64 = row[5].parse().unwrap();
        let bound = match &row[2] {
            "greedy" => (instances[i].k_eff() + 1) as f64,
            _ => 1.0,
        };
        assert!(ratio <= bound, "{row:?}");
        rows += 1;
    }
    assert_eq!(rows, 36);

    for (suite_name, bound_of) in [("additive", 2.0), ("comp", 6.0)] {
        let out = polytree(&["bench", "--suite", suite_name, "--count", "8", "--seed", "1"]);
        assert!(out.status.success());
        let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
        for row in reader.records() {
            let row = row.unwrap();
            if matches!(&row[2], "additive" | "density") {
                let ratio: f64 = row[5].parse().unwrap();
                assert!(ratio <= bound_of, "{row:?}");
            }
        }
    }
}
