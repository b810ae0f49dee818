//! Predicate variables and compilation of decision trees into diagrams.
//!
//! Each distinct tree predicate gets one Boolean predicate variable. A
//! concrete evaluation is lifted to a bit vector over those variables by
//! evaluating the predicates, and a tree compiles bottom-up into a diagram
//! over the predicate variables with one `ite` per inner node.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dd::{DdManager, NodeRef};
use crate::dt::DtNode;
use crate::error::{Error, Result};
use crate::policy::{Evaluation, Predicate, Value, VarDecl, VarKind};

/// One-to-one map between predicate variables `0..n` and predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PredicateBijection {
    preds: Vec<Predicate>,
    index: HashMap<Predicate, u32>,
}

impl PredicateBijection {
    /// Assigns variables in first-occurrence order, skipping repeats.
    pub fn from_predicates<I: IntoIterator<Item = Predicate>>(preds: I) -> Self {
        let mut g = PredicateBijection::default();
        for p in preds {
            if !g.index.contains_key(&p) {
                g.index.insert(p, g.preds.len() as u32);
                g.preds.push(p);
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn predicate(&self, pvar: u32) -> &Predicate {
        &self.preds[pvar as usize]
    }

    pub fn get(&self, pvar: u32) -> Option<&Predicate> {
        self.preds.get(pvar as usize)
    }

    pub fn pvar_of(&self, p: &Predicate) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Predicate)> {
        self.preds.iter().enumerate().map(|(i, p)| (i as u32, p))
    }

    /// Parses `p3`-style names into predicate variables.
    pub fn parse_pvar(&self, name: &str) -> Option<u32> {
        let v: u32 = name.trim().strip_prefix('p')?.parse().ok()?;
        ((v as usize) < self.len()).then_some(v)
    }
}

/// Collects the tree's distinct predicates, numbering them in breadth-first
/// first-occurrence order. Returns the bijection and that initial order.
pub fn mine_predicates(tree: &DtNode) -> (PredicateBijection, Vec<u32>) {
    let gamma = PredicateBijection::from_predicates(tree.predicates_bfs());
    let order = (0..gamma.len() as u32).collect();
    (gamma, order)
}

/// The lifting of `e`: bit `i` is the truth of predicate `i` under `e`.
pub fn lift(gamma: &PredicateBijection, e: &Evaluation) -> Result<Vec<bool>> {
    gamma
        .preds
        .iter()
        .map(|p| crate::policy::eval_predicate(p, e))
        .collect()
}

/// Compiles `tree` into a diagram in `m`, whose variables are the
/// predicate variables of `gamma` in the manager's current order.
pub fn pdd2bdd(tree: &DtNode, gamma: &PredicateBijection, m: &mut DdManager) -> Result<NodeRef> {
    if m.num_vars() != gamma.len() {
        return Err(Error::Domain(format!(
            "manager has {} variables but the bijection has {} predicates",
            m.num_vars(),
            gamma.len()
        )));
    }
    compile_rec(tree, gamma, m)
}

fn compile_rec(tree: &DtNode, gamma: &PredicateBijection, m: &mut DdManager) -> Result<NodeRef> {
    match tree {
        DtNode::Leaf(a) => m.actions(a.clone()),
        DtNode::Inner { pred, left, right } => {
            let pvar = gamma
                .pvar_of(pred)
                .ok_or_else(|| Error::MissingPredicate(format!("{pred:?}")))?;
            let b0 = compile_rec(right, gamma, m)?;
            let b1 = compile_rec(left, gamma, m)?;
            let x = m.var_bdd(pvar)?;
            m.ite(x, b1, b0)
        }
    }
}

/// Builds a fresh manager with `order` and compiles the tree into it.
pub fn compile(tree: &DtNode, gamma: &PredicateBijection, order: &[u32]) -> Result<(DdManager, NodeRef)> {
    let mut m = DdManager::with_order(order)?;
    let root = pdd2bdd(tree, gamma, &mut m)?;
    Ok((m, root))
}

/// Test points per variable: observed values plus one below and one above.
fn axis(decl: &VarDecl) -> Vec<Value> {
    let (Some(&min), Some(&max)) = (decl.domain.first(), decl.domain.last()) else {
        return vec![match decl.kind {
            VarKind::Int => Value::Int(0),
            VarKind::Real => Value::real(0.0),
        }];
    };
    let (below, above) = match (min, max) {
        (Value::Int(a), Value::Int(b)) => (Value::Int(a.saturating_sub(1)), Value::Int(b.saturating_add(1))),
        (a, b) => (Value::real(a.as_f64() - 1.0), Value::real(b.as_f64() + 1.0)),
    };
    let mut out = Vec::with_capacity(decl.domain.len() + 2);
    out.push(below);
    out.extend(decl.domain.iter().copied());
    out.push(above);
    out
}

/// Evaluations covering every combination of observed values (plus one
/// value beyond each end), sampled uniformly when the product exceeds `cap`.
pub fn dense_grid(vars: &[VarDecl], cap: usize, seed: u64) -> Vec<Evaluation> {
    let axes: Vec<Vec<Value>> = vars.iter().map(axis).collect();
    let total = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.len()))
        .unwrap_or(usize::MAX);
    if total <= cap {
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; axes.len()];
        loop {
            out.push(Evaluation(idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect()));
            let mut k = 0;
            loop {
                if k == axes.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cap)
        .map(|_| Evaluation(axes.iter().map(|a| a[rng.gen_range(0..a.len())]).collect()))
        .collect()
}

/// A uniformly random order of `n` predicate variables.
pub fn seeded_order(n: usize, seed: u64) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Predicate variables in breadth-first order of the tree (first occurrences).
pub fn bfs_pvars(tree: &DtNode, gamma: &PredicateBijection) -> Vec<u32> {
    let mut seen = vec![false; gamma.len()];
    let mut out = Vec::new();
    let mut queue = VecDeque::from([tree]);
    while let Some(n) = queue.pop_front() {
        if let DtNode::Inner { pred, left, right } = n {
            if let Some(v) = gamma.pvar_of(pred) {
                if !std::mem::replace(&mut seen[v as usize], true) {
                    out.push(v);
                }
            }
            queue.push_back(left);
            queue.push_back(right);
        }
    }
    out
}
