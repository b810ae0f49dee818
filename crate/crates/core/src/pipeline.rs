//! The synthesis pipeline: learn a tree, compile it over predicate
//! variables, then reorder, prune inconsistent branches and restrict to the
//! policy's care set, recording sizes and timings per stage.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::careset::{build_care_set, build_care_set_unchecked, restrict};
use crate::consistency::pconsistency;
use crate::dd::{DdManager, NodeRef, SizeReport};
use crate::dt::{dt_decision_count, learn_dt, DtNode, LearnOptions};
use crate::error::{Error, Result};
use crate::pdd::{compile, mine_predicates, PredicateBijection};
use crate::policy::Policy;
use crate::reorder::{reorder_to_convergence, ReorderOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Plain,
    Reordered,
    Consistent,
    #[serde(rename = "careset")]
    CareSet,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Plain => "plain",
            Stage::Reordered => "reordered",
            Stage::Consistent => "consistent",
            Stage::CareSet => "careset",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Stage> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Stage::Plain),
            "reordered" | "reorder" => Ok(Stage::Reordered),
            "consistent" | "consistency" => Ok(Stage::Consistent),
            "careset" | "care-set" => Ok(Stage::CareSet),
            other => Err(Error::Format(format!("unknown stage `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub learn: LearnOptions,
    /// Stages run after compilation, in order.
    pub stages: Vec<Stage>,
    pub reorder: ReorderOptions,
    /// Overrides the breadth-first initial order of predicate variables.
    pub forced_order: Option<Vec<u32>>,
    /// Re-prune after a reordering that follows an earlier consistency stage.
    pub reconsistent_after_reorder: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            learn: LearnOptions::default(),
            stages: vec![Stage::Reordered, Stage::Consistent, Stage::CareSet],
            reorder: ReorderOptions::default(),
            forced_order: None,
            reconsistent_after_reorder: true,
        }
    }
}

/// The diagram as it stood after one stage.
#[derive(Clone, Debug)]
pub struct PddArtifact {
    pub manager: DdManager,
    pub root: NodeRef,
    pub gamma: PredicateBijection,
    pub stage: Stage,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub decision_nodes: usize,
    pub action_nodes: usize,
    pub shared_nodes: usize,
    pub time_ms: f64,
}

impl StageRecord {
    fn new(stage: Stage, s: SizeReport, time_ms: f64) -> Self {
        StageRecord {
            stage,
            decision_nodes: s.decision_nodes,
            action_nodes: s.action_nodes,
            shared_nodes: s.shared_nodes,
            time_ms,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageReport {
    pub stages: Vec<StageRecord>,
}

impl StageReport {
    pub fn get(&self, stage: Stage) -> Option<&StageRecord> {
        self.stages.iter().rev().find(|r| r.stage == stage)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,decision_nodes,action_nodes,shared_nodes,time_ms\n");
        for r in &self.stages {
            out.push_str(&format!(
                "{},{},{},{},{:.3}\n",
                r.stage, r.decision_nodes, r.action_nodes, r.shared_nodes, r.time_ms
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub tree: DtNode,
    pub dt_decisions: usize,
    pub dt_time_ms: f64,
    pub gamma: PredicateBijection,
    pub artifacts: Vec<PddArtifact>,
    pub report: StageReport,
}

impl PipelineResult {
    pub fn last(&self) -> &PddArtifact {
        self.artifacts.last().expect("compilation always yields an artifact")
    }

    pub fn artifact(&self, stage: Stage) -> Option<&PddArtifact> {
        self.artifacts.iter().rev().find(|a| a.stage == stage)
    }
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn validate_order(order: &[u32], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Format(format!("order lists {} predicate variables, expected {n}", order.len())));
    }
    for &v in order {
        match seen.get_mut(v as usize) {
            Some(s) if !*s => *s = true,
            _ => return Err(Error::Format(format!("order entry p{v} is repeated or out of range"))),
        }
    }
    Ok(())
}

/// Runs the pipeline on `policy`.
pub fn run_pipeline(policy: &Policy, opts: &PipelineOptions) -> Result<PipelineResult> {
    let t = Instant::now();
    let tree = learn_dt(policy, opts.learn)?;
    let dt_time_ms = ms_since(t);
    run_pipeline_from_tree(policy, tree, dt_time_ms, opts)
}

/// Runs the diagram stages on an already learned tree.
pub fn run_pipeline_from_tree(
    policy: &Policy,
    tree: DtNode,
    dt_time_ms: f64,
    opts: &PipelineOptions,
) -> Result<PipelineResult> {
    let (gamma, bfs_order) = mine_predicates(&tree);
    let order = opts.forced_order.clone().unwrap_or(bfs_order);
    validate_order(&order, gamma.len())?;

    let mut stages: Vec<Stage> = Vec::new();
    for &s in &opts.stages {
        if s == Stage::Plain {
            continue;
        }
        if stages.contains(&s) {
            return Err(Error::Format(format!("stage `{s}` listed twice")));
        }
        stages.push(s);
    }

    let t = Instant::now();
    let (mut m, mut root) = compile(&tree, &gamma, &order)?;
    let mut report = StageReport::default();
    report.stages.push(StageRecord::new(Stage::Plain, m.stats(root), ms_since(t)));
    let mut artifacts = vec![PddArtifact {
        manager: m.clone(),
        root,
        gamma: gamma.clone(),
        stage: Stage::Plain,
    }];

    let mut pruned = false;
    for stage in stages {
        let t = Instant::now();
        match stage {
            Stage::Plain => unreachable!(),
            Stage::Reordered => {
                root = reorder_to_convergence(&mut m, root, opts.reorder)?;
                if pruned && opts.reconsistent_after_reorder {
                    root = pconsistency(&mut m, root, &gamma)?;
                }
            }
            Stage::Consistent => {
                root = pconsistency(&mut m, root, &gamma)?;
                pruned = true;
            }
            Stage::CareSet => {
                let care = if opts.learn.safe_early_stopping {
                    build_care_set_unchecked(policy, &gamma, &mut m)?
                } else {
                    build_care_set(policy, &gamma, &mut m)?
                };
                root = restrict(&mut m, root, care)?;
            }
        }
        m.collect_garbage(&[root]);
        report.stages.push(StageRecord::new(stage, m.stats(root), ms_since(t)));
        artifacts.push(PddArtifact {
            manager: m.clone(),
            root,
            gamma: gamma.clone(),
            stage,
        });
    }

    Ok(PipelineResult {
        dt_decisions: dt_decision_count(&tree),
        tree,
        dt_time_ms,
        gamma,
        artifacts,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dt::evaluate_dt;
    use crate::pdd::lift;
    use crate::policy::{load_policy, Format};

    fn two_threshold_policy() -> Policy {
        load_policy("x,y,actions\n0,0,\"{a,b}\"\n1,0,b\n2,0,b\n3,1,a\n".as_bytes(), Format::Csv).unwrap()
    }

    #[test]
    fn forced_order_plain_to_consistent() {
        let opts = PipelineOptions {
            stages: vec![Stage::Plain, Stage::Consistent],
            forced_order: Some(vec![1, 0]),
            ..Default::default()
        };
        let r = run_pipeline(&two_threshold_policy(), &opts).unwrap();
        let sizes: Vec<usize> = r.report.stages.iter().map(|s| s.decision_nodes).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn default_pipeline_matches_rows() {
        let p = two_threshold_policy();
        let r = run_pipeline(&p, &PipelineOptions::default()).unwrap();
        assert_eq!(r.report.stages.len(), 4);
        let last = r.last();
        for (s, a) in p.rows() {
            let bits = lift(&last.gamma, s).unwrap();
            assert_eq!(last.manager.eval_vars(last.root, &bits).unwrap().actions(), Some(a));
            assert_eq!(evaluate_dt(&r.tree, s).unwrap(), a);
        }
    }

    #[test]
    fn uniform_policy_has_no_decisions() {
        let p = load_policy("x,actions\n0,a\n1,a\n".as_bytes(), Format::Csv).unwrap();
        let r = run_pipeline(&p, &PipelineOptions::default()).unwrap();
        assert!(r.report.stages.iter().all(|s| s.decision_nodes == 0));
    }

    #[test]
    fn rejects_bad_orders_and_stage_lists() {
        let p = two_threshold_policy();
        let bad = PipelineOptions {
            forced_order: Some(vec![0, 0]),
            ..Default::default()
        };
        assert!(run_pipeline(&p, &bad).is_err());
        let dup = PipelineOptions {
            stages: vec![Stage::Consistent, Stage::Consistent],
            ..Default::default()
        };
        assert!(run_pipeline(&p, &dup).is_err());
        assert_eq!("care-set".parse::<Stage>().unwrap(), Stage::CareSet);
    }

    #[test]
    fn stage_report_formats() {
        let r = run_pipeline(&two_threshold_policy(), &PipelineOptions::default()).unwrap();
        let csv = r.report.to_csv();
        assert!(csv.starts_with("stage,decision_nodes,action_nodes,shared_nodes,time_ms\nplain,"));
        let json: serde_json::Value = serde_json::from_str(&r.report.to_json()).unwrap();
        assert_eq!(json["stages"][3]["stage"], "careset");
    }
}
