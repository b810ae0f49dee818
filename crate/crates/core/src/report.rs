//! Size comparisons, summary statistics and DOT rendering.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::bitblast::BbBdd;
use crate::dd::{DdManager, NodeRef, NodeView, TerminalLabel};
use crate::dt::DtNode;
use crate::error::{Error, Result};
use crate::pdd::PredicateBijection;
use crate::pipeline::{PipelineResult, Stage, StageRecord};
use crate::policy::{Policy, VarDecl};

/// Fraction of the baseline-to-tree size gap closed by the diagram, or
/// `None` when the tree is not smaller than the baseline.
pub fn r_gap(bbbdd: usize, dt: usize, pdd: usize) -> Option<f64> {
    if dt >= bbbdd {
        return None;
    }
    Some((bbbdd as f64 - pdd as f64) / (bbbdd as f64 - dt as f64))
}

pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("geometric mean of an empty list".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(Error::Domain(format!("geometric mean needs positive values, got {v}")));
    }
    let mean = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    Ok(mean.exp())
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// One controller's line in the comparison table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub controller: String,
    pub states: usize,
    pub bbbdd: Option<usize>,
    pub dt: usize,
    pub plain: Option<usize>,
    pub reordered: Option<usize>,
    pub consistent: Option<usize>,
    pub careset: Option<usize>,
    /// Shared nodes of the final diagram.
    pub shared: usize,
    /// Decision nodes of the final diagram.
    pub pdd: usize,
    pub ratio_dt_bbbdd: Option<f64>,
    pub ratio_pdd_bbbdd: Option<f64>,
    pub ratio_pdd_dt: Option<f64>,
    pub rgap: Option<f64>,
    pub dt_time_ms: f64,
    pub bbbdd_time_ms: Option<f64>,
    pub stages: Vec<StageDetail>,
}

/// Per-stage sizes; `collapsed` counts distinct action-set terminals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageDetail {
    pub stage: Stage,
    pub total_nodes: usize,
    pub decision_nodes: usize,
    pub shared_nodes: usize,
    pub collapsed: usize,
    pub time_ms: f64,
}

impl From<&StageRecord> for StageDetail {
    fn from(r: &StageRecord) -> Self {
        StageDetail {
            stage: r.stage,
            total_nodes: r.decision_nodes + r.action_nodes,
            decision_nodes: r.decision_nodes,
            shared_nodes: r.shared_nodes,
            collapsed: r.action_nodes,
            time_ms: r.time_ms,
        }
    }
}

impl ComparisonRow {
    pub fn new(controller: &str, policy: &Policy, run: &PipelineResult, baseline: Option<(&BbBdd, f64)>) -> Self {
        let stage = |s: Stage| run.report.get(s).map(|r| r.decision_nodes);
        let last = run.report.stages.last().expect("plain stage is always recorded");
        let pdd = last.decision_nodes;
        let dt = run.dt_decisions;
        let bb = baseline.map(|(b, _)| b.report.decision_nodes);
        ComparisonRow {
            controller: controller.to_string(),
            states: policy.len(),
            bbbdd: bb,
            dt,
            plain: stage(Stage::Plain),
            reordered: stage(Stage::Reordered),
            consistent: stage(Stage::Consistent),
            careset: stage(Stage::CareSet),
            shared: last.shared_nodes,
            pdd,
            ratio_dt_bbbdd: bb.and_then(|b| ratio(dt, b)),
            ratio_pdd_bbbdd: bb.and_then(|b| ratio(pdd, b)),
            ratio_pdd_dt: ratio(pdd, dt),
            rgap: bb.and_then(|b| r_gap(b, dt, pdd)),
            dt_time_ms: run.dt_time_ms,
            bbbdd_time_ms: baseline.map(|(_, t)| t),
            stages: run.report.stages.iter().map(StageDetail::from).collect(),
        }
    }

    fn time_cell(&self) -> String {
        let mut parts = vec![format!("dt:{:.3}", self.dt_time_ms)];
        parts.extend(self.stages.iter().map(|s| format!("{}:{:.3}", s.stage, s.time_ms)));
        if let Some(t) = self.bbbdd_time_ms {
            parts.push(format!("bbbdd:{t:.3}"));
        }
        parts.join(";")
    }
}

pub const CSV_HEADER: &str = "controller,states,bbbdd,dt,plain,reordered,consistent,careset,shared,ratio_dt_bbbdd,ratio_pdd_bbbdd,ratio_pdd_dt,rgap,time_ms_per_stage";

/// Label of the geometric-mean line appended to CSV reports.
pub const SUMMARY_LABEL: &str = "geometric_mean";

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub ratio_dt_bbbdd: Option<f64>,
    pub ratio_pdd_bbbdd: Option<f64>,
    pub ratio_pdd_dt: Option<f64>,
    pub rgap: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ComparisonReport {
    /// Geometric means of each ratio column over the rows where it is
    /// defined and positive.
    pub fn summary(&self) -> Summary {
        let gm = |f: fn(&ComparisonRow) -> Option<f64>| {
            let vals: Vec<f64> = self.rows.iter().filter_map(f).filter(|v| *v > 0.0).collect();
            geometric_mean(&vals).ok()
        };
        Summary {
            ratio_dt_bbbdd: gm(|r| r.ratio_dt_bbbdd),
            ratio_pdd_bbbdd: gm(|r| r.ratio_pdd_bbbdd),
            ratio_pdd_dt: gm(|r| r.ratio_pdd_dt),
            rgap: gm(|r| r.rgap),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cells = [
                csv_field(&r.controller),
                r.states.to_string(),
                opt(r.bbbdd),
                r.dt.to_string(),
                opt(r.plain),
                opt(r.reordered),
                opt(r.consistent),
                opt(r.careset),
                r.shared.to_string(),
                opt(r.ratio_dt_bbbdd),
                opt(r.ratio_pdd_bbbdd),
                opt(r.ratio_pdd_dt),
                opt(r.rgap),
                r.time_cell(),
            ];
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        if !self.rows.is_empty() {
            let s = self.summary();
            let _ = writeln!(
                out,
                "{SUMMARY_LABEL},,,,,,,,,{},{},{},{},",
                opt(s.ratio_dt_bbbdd),
                opt(s.ratio_pdd_bbbdd),
                opt(s.ratio_pdd_dt),
                opt(s.rgap)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({ "rows": self.rows, "summary": self.summary() });
        serde_json::to_string_pretty(&v).expect("serializable")
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders a tree: ellipses for decisions, boxes for leaves, solid edges
/// for the true branch and dashed ones for the false branch. Nodes are
/// numbered breadth-first.
pub fn dt_to_dot(tree: &DtNode, vars: &[VarDecl]) -> String {
    let mut out = String::from("digraph dt {\n");
    let mut queue = VecDeque::from([(tree, 0usize)]);
    let mut next = 1;
    let mut edges = String::new();
    while let Some((node, id)) = queue.pop_front() {
        match node {
            DtNode::Leaf(a) => {
                let _ = writeln!(out, "  n{id} [shape=box,label={}];", quote(&a.to_string()));
            }
            DtNode::Inner { pred, left, right } => {
                let _ = writeln!(out, "  n{id} [shape=ellipse,label={}];", quote(&pred.render(vars)));
                let _ = writeln!(edges, "  n{id} -> n{next};");
                let _ = writeln!(edges, "  n{id} -> n{} [style=dashed];", next + 1);
                queue.push_back((left, next));
                queue.push_back((right, next + 1));
                next += 2;
            }
        }
    }
    out.push_str(&edges);
    out.push_str("}\n");
    out
}

/// Renders the diagram reachable from `root` in the same style as
/// [`dt_to_dot`], with shared nodes drawn once.
pub fn dd_to_dot(m: &DdManager, root: NodeRef, gamma: &PredicateBijection, vars: &[VarDecl]) -> String {
    let mut out = String::from("digraph pdd {\n");
    let mut ids: HashMap<NodeRef, usize> = HashMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    let mut edges = String::new();
    while let Some(n) = queue.pop_front() {
        let id = ids[&n];
        match m.view(n) {
            NodeView::Terminal(label) => {
                let text = match label {
                    TerminalLabel::Actions(a) => a.to_string(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  n{id} [shape=box,label={}];", quote(&text));
            }
            NodeView::Inner { var, lo, hi, .. } => {
                let label = gamma.get(var).map_or_else(|| format!("p{var}"), |p| p.render(vars));
                let _ = writeln!(out, "  n{id} [shape=ellipse,label={}];", quote(&label));
                for (child, style) in [(hi, ""), (lo, " [style=dashed]")] {
                    let len = ids.len();
                    let cid = *ids.entry(child).or_insert_with(|| {
                        queue.push_back(child);
                        len
                    });
                    let _ = writeln!(edges, "  n{id} -> n{cid}{style};");
                }
            }
        }
    }
    out.push_str(&edges);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_gap_examples() {
        let g = r_gap(48765, 934, 970).unwrap();
        assert!((g - (48765.0 - 970.0) / (48765.0 - 934.0)).abs() < 1e-15);
        assert!((g - 0.99925).abs() < 1e-5);
        assert_eq!(r_gap(10, 4, 4), Some(1.0));
        assert_eq!(r_gap(4, 4, 1), None);
        assert_eq!(r_gap(3, 7, 1), None);
    }

    #[test]
    fn geometric_mean_examples() {
        assert!((geometric_mean(&[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((geometric_mean(&[0.5, 2.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(geometric_mean(&[1.0, 0.0]).is_err());
        assert!(geometric_mean(&[-1.0]).is_err());
        assert!(geometric_mean(&[]).is_err());
    }

    #[test]
    fn terminal_dot() {
        let mut m = DdManager::new(0);
        let a = m.actions(crate::policy::ActionSet::singleton("a")).unwrap();
        let dot = dd_to_dot(&m, a, &PredicateBijection::default(), &[]);
        assert_eq!(dot, "digraph pdd {\n  n0 [shape=box,label=\"{a}\"];\n}\n");
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
        assert_eq!(csv_field("x,y"), "\"x,y\"");
    }
}
