//! Predicate consistency of diagrams over predicate variables.
//!
//! A path is consistent when some concrete evaluation satisfies exactly the
//! literals it decides. [`pconsistency`] prunes every branch whose literal
//! contradicts the path taken so far and rebuilds the diagram bottom-up;
//! [`check_consistent`] independently enumerates the inconsistent path
//! prefixes.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::json;

use crate::dd::{DdManager, NodeRef, NodeView};
use crate::error::Result;
use crate::pdd::PredicateBijection;
use crate::policy::VarDecl;
use crate::theory::{sat_with, Context, VarRecord};

/// State variables mentioned by predicates at or below each node.
struct StateSupport<'a> {
    gamma: &'a PredicateBijection,
    memo: HashMap<NodeRef, BTreeSet<usize>>,
}

impl<'a> StateSupport<'a> {
    fn new(gamma: &'a PredicateBijection) -> Self {
        StateSupport {
            gamma,
            memo: HashMap::new(),
        }
    }

    fn of(&mut self, m: &DdManager, n: NodeRef) -> BTreeSet<usize> {
        if let Some(s) = self.memo.get(&n) {
            return s.clone();
        }
        let s = match m.view(n) {
            NodeView::Terminal(_) => BTreeSet::new(),
            NodeView::Inner { var, lo, hi, .. } => {
                let mut s = self.of(m, lo);
                s.extend(self.of(m, hi));
                s.insert(self.gamma.predicate(var).var);
                s
            }
        };
        self.memo.insert(n, s.clone());
        s
    }
}

struct Rewriter<'a> {
    gamma: &'a PredicateBijection,
    support: StateSupport<'a>,
    memo: HashMap<(NodeRef, Context), NodeRef>,
}

impl Rewriter<'_> {
    // Invariant: `ctx` is satisfiable.
    fn rec(&mut self, m: &mut DdManager, n: NodeRef, ctx: &Context) -> Result<NodeRef> {
        let (var, lo, hi) = match m.view(n) {
            NodeView::Terminal(_) => return Ok(n),
            NodeView::Inner { var, lo, hi, .. } => (var, lo, hi),
        };
        let ctx = ctx.project(&self.support.of(m, n));
        if let Some(&r) = self.memo.get(&(n, ctx.clone())) {
            return Ok(r);
        }
        let pred = *self.gamma.predicate(var);
        let (pos_sat, pos) = sat_with(&ctx, &pred, true);
        let (neg_sat, neg) = sat_with(&ctx, &pred, false);
        let r = match (pos_sat, neg_sat) {
            (true, true) => {
                let b1 = self.rec(m, hi, &pos)?;
                let b0 = self.rec(m, lo, &neg)?;
                m.mk_var_node(var, b0, b1)?
            }
            (true, false) => self.rec(m, hi, &pos)?,
            (false, true) => self.rec(m, lo, &neg)?,
            (false, false) => unreachable!("a predicate and its negation cannot both contradict a satisfiable context"),
        };
        self.memo.insert((n, ctx), r);
        Ok(r)
    }
}

/// Rewrites `root` into a predicate-consistent diagram with the same value
/// on every lifted evaluation.
pub fn pconsistency(m: &mut DdManager, root: NodeRef, gamma: &PredicateBijection) -> Result<NodeRef> {
    let mut rw = Rewriter {
        gamma,
        support: StateSupport::new(gamma),
        memo: HashMap::new(),
    };
    rw.rec(m, root, &Context::new())
}

/// A path prefix whose literals have no common model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistentPath {
    /// `(predicate variable, branch taken)` from the root.
    pub steps: Vec<(u32, bool)>,
    pub context: Context,
}

impl InconsistentPath {
    pub fn to_json(&self, gamma: &PredicateBijection, vars: &[VarDecl]) -> serde_json::Value {
        let steps: Vec<_> = self
            .steps
            .iter()
            .map(|&(pv, b)| {
                let p = gamma.predicate(pv);
                json!({
                    "pvar": format!("p{pv}"),
                    "predicate": p.render(vars),
                    "value": b,
                    "literal": if b { p.render(vars) } else { p.render_negated(vars) },
                })
            })
            .collect();
        json!({ "path": steps, "context": describe_context(&self.context, vars) })
    }
}

/// Human-readable bound summary of a context, one entry per constraint.
pub fn describe_context(c: &Context, vars: &[VarDecl]) -> Vec<String> {
    let mut out = Vec::new();
    for v in c.vars() {
        let name = vars.get(v).map_or_else(|| format!("v{v}"), |d| d.name.clone());
        match c.record(v) {
            Some(VarRecord::Int(r)) => {
                if let Some(l) = r.lower {
                    out.push(format!("{name} ≥ {l}"));
                }
                if let Some(u) = r.upper {
                    out.push(format!("{name} ≤ {u}"));
                }
                out.extend(r.pinned.iter().map(|p| format!("{name} = {p}")));
                out.extend(r.excluded.iter().map(|p| format!("{name} ≠ {p}")));
            }
            Some(VarRecord::Real(r)) => {
                if let Some((l, s)) = r.lower {
                    out.push(format!("{name} {} {l}", if s { ">" } else { "≥" }));
                }
                if let Some((u, s)) = r.upper {
                    out.push(format!("{name} {} {u}", if s { "<" } else { "≤" }));
                }
                out.extend(r.pinned.iter().map(|p| format!("{name} = {p}")));
                out.extend(r.excluded.iter().map(|p| format!("{name} ≠ {p}")));
            }
            None => {}
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub paths: Vec<InconsistentPath>,
    /// Enumeration stopped at the path cap; `paths` is then a lower bound.
    pub truncated: bool,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.paths.is_empty() && !self.truncated
    }
}

/// Maximum number of path visits before enumeration stops.
pub const PATH_CAP: usize = 100_000;

struct Checker<'a> {
    gamma: &'a PredicateBijection,
    support: StateSupport<'a>,
    clean: HashSet<(NodeRef, Context)>,
    report: ConsistencyReport,
    visits: usize,
    cap: usize,
}

impl Checker<'_> {
    /// Returns true when no inconsistent prefix was found below `n`.
    fn rec(&mut self, m: &DdManager, n: NodeRef, ctx: &Context, steps: &mut Vec<(u32, bool)>) -> bool {
        let (var, lo, hi) = match m.view(n) {
            NodeView::Terminal(_) => {
                self.visits += 1;
                return true;
            }
            NodeView::Inner { var, lo, hi, .. } => (var, lo, hi),
        };
        let key = (n, ctx.project(&self.support.of(m, n)));
        if self.clean.contains(&key) {
            return true;
        }
        let pred = *self.gamma.predicate(var);
        let mut clean = true;
        for (branch, child) in [(true, hi), (false, lo)] {
            if self.visits >= self.cap {
                self.report.truncated = true;
                return false;
            }
            let (ok, next) = sat_with(ctx, &pred, branch);
            steps.push((var, branch));
            if ok {
                clean &= self.rec(m, child, &next, steps);
            } else {
                self.visits += 1;
                clean = false;
                self.report.paths.push(InconsistentPath {
                    steps: steps.clone(),
                    context: next,
                });
            }
            steps.pop();
        }
        if clean {
            self.clean.insert(key);
        }
        clean
    }
}

/// Enumerates the inconsistent path prefixes of `root`.
pub fn check_consistent(m: &DdManager, root: NodeRef, gamma: &PredicateBijection) -> ConsistencyReport {
    check_consistent_capped(m, root, gamma, PATH_CAP)
}

pub fn check_consistent_capped(m: &DdManager, root: NodeRef, gamma: &PredicateBijection, cap: usize) -> ConsistencyReport {
    let mut checker = Checker {
        gamma,
        support: StateSupport::new(gamma),
        clean: HashSet::new(),
        report: ConsistencyReport::default(),
        visits: 0,
        cap,
    };
    checker.rec(m, root, &Context::new(), &mut Vec::new());
    checker.report
}

/// The context accumulated along a sequence of decisions.
pub fn path_context(gamma: &PredicateBijection, steps: &[(u32, bool)]) -> Context {
    let mut c = Context::new();
    for &(pv, b) in steps {
        c.extend_in_place(gamma.predicate(pv), b);
    }
    c
}
