//! Invariant checks run by `pddc check` and after every `pddc run`.

use pdd_core::bitblast::BbBdd;
use pdd_core::consistency::{check_consistent, pconsistency};
use pdd_core::pdd::{compile, dense_grid, lift, seeded_order};
use pdd_core::pipeline::{run_pipeline, PipelineOptions, PipelineResult, Stage};
use pdd_core::policy::{Evaluation, Policy};
use pdd_core::{encode_state, evaluate_dt, DdManager, NodeRef, PredicateBijection, Result};

const GRID_CAP: usize = 4096;

pub type Outcome = std::result::Result<String, String>;

fn diagram_actions(m: &DdManager, root: NodeRef, gamma: &PredicateBijection, e: &Evaluation) -> std::result::Result<String, String> {
    let bits = lift(gamma, e).map_err(|err| err.to_string())?;
    m.eval_vars(root, &bits).map(|l| l.to_string()).map_err(|err| err.to_string())
}

fn tree_actions(run: &PipelineResult, e: &Evaluation) -> std::result::Result<String, String> {
    evaluate_dt(&run.tree, e).map(|a| a.to_string()).map_err(|err| err.to_string())
}

/// Tree exactness (or soundness under safe early stopping), manager
/// invariants, and agreement of every stage with the tree on the rows.
pub fn verify_run(policy: &Policy, run: &PipelineResult) -> std::result::Result<String, String> {
    for (s, a) in policy.rows() {
        let got = evaluate_dt(&run.tree, s).map_err(|e| e.to_string())?;
        if got != a && !(got.len() == 1 && got.is_subset(a)) {
            return Err(format!("tree gives {got} at {s}, table allows {a}"));
        }
    }
    for art in &run.artifacts {
        art.manager
            .check_invariants()
            .map_err(|e| format!("{} diagram: {e}", art.stage))?;
        for (s, _) in policy.rows() {
            let want = tree_actions(run, s)?;
            let got = diagram_actions(&art.manager, art.root, &art.gamma, s)?;
            if got != want {
                return Err(format!("{} diagram gives {got} at {s}, tree gives {want}", art.stage));
            }
        }
    }
    Ok(format!("{} rows agree across {} stages", policy.len(), run.artifacts.len()))
}

pub fn verify_baseline(policy: &Policy, bb: &BbBdd) -> std::result::Result<String, String> {
    bb.manager.check_invariants()?;
    for (s, a) in policy.rows() {
        let bits = encode_state(&bb.encoding, s).map_err(|e| e.to_string())?;
        let got = bb.manager.eval_vars(bb.root, &bits).map_err(|e| e.to_string())?;
        if got.actions() != Some(a) {
            return Err(format!("baseline gives {got} at {s}, table says {a}"));
        }
    }
    Ok(format!("{} rows agree with the bit-blasted baseline", policy.len()))
}

fn compiled_orders(policy: &Policy, run: &PipelineResult, seed: u64) -> Outcome {
    let grid = dense_grid(policy.vars(), GRID_CAP, seed);
    let mut points = 0;
    for k in 0..3 {
        let order = seeded_order(run.gamma.len(), seed.wrapping_add(k));
        let (m, root) = compile(&run.tree, &run.gamma, &order).map_err(|e| e.to_string())?;
        for e in &grid {
            let (got, want) = (diagram_actions(&m, root, &run.gamma, e)?, tree_actions(run, e)?);
            if got != want {
                return Err(format!("order {order:?} at {e}: diagram {got}, tree {want}"));
            }
            points += 1;
        }
        let mut m = m;
        let fixed = pconsistency(&mut m, root, &run.gamma).map_err(|e| e.to_string())?;
        let report = check_consistent(&m, fixed, &run.gamma);
        if !report.is_consistent() {
            return Err(format!("order {order:?}: {} inconsistent paths after pruning", report.paths.len()));
        }
        for e in &grid {
            let (got, want) = (diagram_actions(&m, fixed, &run.gamma, e)?, tree_actions(run, e)?);
            if got != want {
                return Err(format!("order {order:?}, pruned, at {e}: diagram {got}, tree {want}"));
            }
        }
    }
    Ok(format!("3 random orders, {points} grid points, pruned diagrams consistent"))
}

fn stage_chain(policy: &Policy, run: &PipelineResult, seed: u64) -> Outcome {
    let grid = dense_grid(policy.vars(), GRID_CAP, seed);
    for art in &run.artifacts {
        let points: Vec<&Evaluation> = if art.stage == Stage::CareSet {
            policy.rows().map(|(s, _)| s).collect()
        } else {
            grid.iter().collect()
        };
        for e in points {
            let (got, want) = (diagram_actions(&art.manager, art.root, &art.gamma, e)?, tree_actions(run, e)?);
            if got != want {
                return Err(format!("{} stage at {e}: diagram {got}, tree {want}", art.stage));
            }
        }
    }
    let sizes: Vec<String> = run.report.stages.iter().map(|s| format!("{}={}", s.stage, s.decision_nodes)).collect();
    Ok(sizes.join(" "))
}

/// Every check with its outcome, in a fixed order.
pub fn run_suite(policy: &Policy, opts: &PipelineOptions, seed: u64) -> Result<Vec<(String, Outcome)>> {
    let run = run_pipeline(policy, opts)?;
    let bb = pdd_core::build_bbbdd(policy)?;
    Ok(vec![
        ("rows".to_string(), verify_run(policy, &run)),
        ("compiled orders".to_string(), compiled_orders(policy, &run, seed)),
        ("stage chain".to_string(), stage_chain(policy, &run, seed)),
        ("baseline".to_string(), verify_baseline(policy, &bb)),
    ])
}
