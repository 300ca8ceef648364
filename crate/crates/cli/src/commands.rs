use std::fs;
use std::path::{Path, PathBuf};

use polytree_core::exactdp::{solve_full_dp_with, solve_pruned_dp_with, DpOptions};
use polytree_core::gen::{adversarial_hub, random_instance, GenConfig};
use polytree_core::greedy::{
    greedy_arcs_additive, greedy_density_comp, greedy_parent_sets, greedy_parent_sets_comp,
};
use polytree_core::model::{is_additive_consistent, normalize, NormalizeWarning};
use polytree_core::oracle::{brute_force, ConstraintSet};
use polytree_core::reductions::{
    reduce_independent_set, reduce_independent_set_comp, reduce_set_partition,
};
use polytree_core::scoreio::{parse_graph, parse_scores, parse_set_family, write_result, write_scores};
use polytree_core::{Instance, SolveResult};

use crate::{
    ApproxAlgo, ApproxArgs, CliError, ExactAlgo, GenArgs, InputArgs, OutputArgs, ReduceArgs,
    ReductionName, SolveArgs,
};

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(args: &InputArgs) -> Result<Instance, CliError> {
    let text = read(&args.scores)?;
    let mut instance = parse_scores(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.scores.display())))?;
    if !args.no_normalize {
        let (normalized, warnings) = normalize(&instance);
        for w in warnings {
            match w {
                NormalizeWarning::MissingEmptySet { node } => eprintln!(
                    "warning: {} has no empty parent set; added with score 0",
                    normalized.name(node)
                ),
                NormalizeWarning::Shifted { node, offset } => eprintln!(
                    "warning: scores of {} shifted by {}",
                    normalized.name(node),
                    -offset
                ),
            }
        }
        instance = normalized;
    }
    if let Some(k) = args.max_indegree {
        instance = instance
            .with_max_indegree(k)
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    if let Some(q) = args.max_component_arcs {
        instance = instance
            .with_max_component_arcs(q)
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(instance)
}

fn finish(mut result: SolveResult, instance: &Instance, output: &OutputArgs) -> Result<(), CliError> {
    if output.no_timing {
        result.stats.runtime_ms = 0.0;
    }
    emit(output.out.as_deref(), &write_result(&result, instance.names()))
}

pub(crate) fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let instance = load(&args.input)?;
    let options = DpOptions {
        force: args.force,
        max_states: None,
    };
    let dp_only = |what: &str| -> Result<(), CliError> {
        if args.connected || instance.max_component_arcs().is_some() {
            return Err(CliError::Refused(format!(
                "{what} supports neither --connected nor --max-component-arcs; use --algo brute"
            )));
        }
        Ok(())
    };
    let result = match args.algo {
        ExactAlgo::Dp => {
            dp_only("dp")?;
            solve_full_dp_with(&instance, &options)?
        }
        ExactAlgo::DpPruned => {
            dp_only("dp-pruned")?;
            solve_pruned_dp_with(&instance, args.slack, &options)?
        }
        ExactAlgo::Brute => {
            let constraints = ConstraintSet {
                require_connected: args.connected,
                ..ConstraintSet::from_instance(&instance)
            };
            brute_force(&instance, &constraints)?
        }
    };
    finish(result, &instance, &args.output)
}

pub(crate) fn approx(args: &ApproxArgs) -> Result<(), CliError> {
    let instance = load(&args.input)?;
    let need_q = || {
        instance.max_component_arcs().ok_or_else(|| {
            CliError::Input("this algorithm needs --max-component-arcs".into())
        })
    };
    let result = match args.algo {
        ApproxAlgo::Greedy => greedy_parent_sets(&instance)?,
        ApproxAlgo::Additive => {
            if !is_additive_consistent(&instance) {
                return Err(CliError::Input("scores are not additive".into()));
            }
            greedy_arcs_additive(&instance, instance.effective_max_indegree().max(1))?
        }
        ApproxAlgo::Density => greedy_density_comp(&instance, need_q()?)?,
        ApproxAlgo::GreedyComp => greedy_parent_sets_comp(&instance, need_q()?)?,
    };
    finish(result, &instance, &args.output)
}

pub(crate) fn reduce(args: &ReduceArgs) -> Result<(), CliError> {
    let text = read(&args.input)?;
    let parse_err = |e: polytree_core::ParseError| {
        CliError::Input(format!("{}: {e}", args.input.display()))
    };
    let (instance, certificate) = match args.kind {
        ReductionName::Setpart => {
            let family = parse_set_family(&text).map_err(parse_err)?;
            reduce_set_partition(&family, args.epsilon_inv).map_err(|e| match e {
                polytree_core::reductions::ReductionError::TooLarge(_) => {
                    CliError::Refused(e.to_string())
                }
                _ => CliError::Input(e.to_string()),
            })?
        }
        ReductionName::Indset => reduce_independent_set(&parse_graph(&text).map_err(parse_err)?),
        ReductionName::IndsetComp => {
            let graph = parse_graph(&text).map_err(parse_err)?;
            let (instance, q, certificate) =
                reduce_independent_set_comp(&graph).map_err(|e| CliError::Input(e.to_string()))?;
            eprintln!("component bound: --max-component-arcs {q}");
            (instance, certificate)
        }
    };
    emit(args.out.as_deref(), &write_scores(&instance))?;
    let cert_path = args.cert.clone().or_else(|| {
        args.out.as_ref().map(|out| {
            let mut name = out.clone().into_os_string();
            name.push(".cert.json");
            PathBuf::from(name)
        })
    });
    if let Some(path) = cert_path {
        let mut json = certificate.to_json();
        json.push('\n');
        emit(Some(&path), &json)?;
    }
    Ok(())
}

pub(crate) fn gen(args: &GenArgs) -> Result<(), CliError> {
    let instance = match args.hub {
        Some(k) => adversarial_hub(k, args.hub_score, args.ring_score),
        None => random_instance(&GenConfig {
            n: args.n,
            max_parent_size: args.max_parent_size,
            sets_per_node: args.sets_per_node,
            score_low: args.score_low,
            score_high: args.score_high,
            seed: args.seed,
            additive: args.additive,
        }),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    emit(args.out.as_deref(), &write_scores(&instance))
}
