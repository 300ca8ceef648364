use polytree_core::exactdp::{solve_full_dp, solve_pruned_dp, DEFAULT_SLACK};
use polytree_core::gen::{suite, SuiteConfig};
use polytree_core::greedy::{
    greedy_arcs_additive, greedy_density_comp, greedy_parent_sets, greedy_parent_sets_comp,
};
use polytree_core::oracle::{brute_force, ConstraintSet};
use polytree_core::{Score, SolveResult};

use crate::commands::emit;
use crate::{BenchArgs, CliError, SuiteName};

pub(crate) const COLUMNS: [&str; 8] = [
    "instance",
    "n",
    "algo",
    "score",
    "opt",
    "ratio",
    "states_visited",
    "runtime_ms",
];

/// `opt / score`, 1 when equal, `inf` when only the optimum is positive.
fn ratio(score: Score, opt: Score) -> f64 {
    if score == opt {
        1.0
    } else if score.value() > 0.0 {
        opt.value() / score.value()
    } else {
        f64::INFINITY
    }
}

fn number(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub(crate) fn run(args: &BenchArgs) -> Result<(), CliError> {
    let (name, cfg) = match args.suite {
        SuiteName::Small => ("small", SuiteConfig::exhaustive(args.count, args.seed)),
        SuiteName::Medium => ("medium", SuiteConfig::medium(args.count, args.seed)),
        SuiteName::Additive => ("additive", SuiteConfig::additive(args.count, args.seed, 3, 2)),
        SuiteName::Comp => ("comp", SuiteConfig::exhaustive(args.count, args.seed)),
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(COLUMNS).expect("in-memory write");
    for (i, instance) in suite(&cfg).iter().enumerate() {
        let runs: Vec<SolveResult> = match args.suite {
            SuiteName::Small | SuiteName::Medium => vec![
                solve_full_dp(instance)?,
                solve_pruned_dp(instance, DEFAULT_SLACK)?,
                greedy_parent_sets(instance)?,
            ],
            SuiteName::Additive => {
                let k = 1 + i % 2;
                vec![
                    brute_force(instance, &ConstraintSet::indegree(k))?,
                    greedy_arcs_additive(instance, k)?,
                ]
            }
            SuiteName::Comp => {
                let q = 2 + i % 2;
                vec![
                    brute_force(instance, &ConstraintSet::component_arcs(q))?,
                    greedy_density_comp(instance, q)?,
                    greedy_parent_sets_comp(instance, q)?,
                ]
            }
        };
        let opt = runs[0].score;
        for r in &runs {
            let runtime = if args.output.no_timing { 0.0 } else { r.stats.runtime_ms };
            writer
                .write_record([
                    format!("{name}-{i}"),
                    instance.n().to_string(),
                    r.algorithm.tag().to_string(),
                    number(r.score.value()),
                    number(opt.value()),
                    number(ratio(r.score, opt)),
                    r.stats.states_visited.to_string(),
                    format!("{runtime:.3}"),
                ])
                .expect("in-memory write");
        }
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    emit(args.output.out.as_deref(), &String::from_utf8(bytes).expect("utf-8 CSV"))
}
