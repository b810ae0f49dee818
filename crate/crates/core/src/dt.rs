//! Greedy axis-aligned decision-tree learning over a policy table.
//!
//! Trees are grown until every leaf is pure (one action-set label), which
//! makes them represent the table exactly. With safe early stopping a node
//! becomes a leaf as soon as its samples share an action, and the leaf keeps
//! one of the shared actions.

use std::collections::{BTreeMap, VecDeque};

use log::warn;

use crate::error::{Error, Result};
use crate::policy::{ActionSet, Evaluation, Policy, Predicate, Rel, Value, VarKind};

/// A full binary decision tree. The true branch is `left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DtNode {
    Leaf(ActionSet),
    Inner {
        pred: Predicate,
        left: Box<DtNode>,
        right: Box<DtNode>,
    },
}

impl DtNode {
    pub fn inner(pred: Predicate, left: DtNode, right: DtNode) -> DtNode {
        DtNode::Inner {
            pred,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn leaf<I, S>(actions: I) -> DtNode
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        DtNode::Leaf(ActionSet::new(actions))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DtNode::Leaf(_))
    }

    /// Predicates of inner nodes in breadth-first order (with repeats).
    pub fn predicates_bfs(&self) -> Vec<Predicate> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self]);
        while let Some(node) = queue.pop_front() {
            if let DtNode::Inner { pred, left, right } = node {
                out.push(*pred);
                queue.push_back(left);
                queue.push_back(right);
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            DtNode::Leaf(_) => 0,
            DtNode::Inner { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Impurity measure used to score splits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Impurity {
    #[default]
    Entropy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LearnOptions {
    pub impurity: Impurity,
    /// Stop at nodes whose samples share an action; the leaf keeps the
    /// lexicographically smallest shared action.
    pub safe_early_stopping: bool,
}

/// Number of inner (decision) nodes.
pub fn dt_decision_count(tree: &DtNode) -> usize {
    match tree {
        DtNode::Leaf(_) => 0,
        DtNode::Inner { left, right, .. } => 1 + dt_decision_count(left) + dt_decision_count(right),
    }
}

/// Follows the unique path consistent with `e` and returns its leaf label.
pub fn evaluate_dt<'a>(tree: &'a DtNode, e: &Evaluation) -> Result<&'a ActionSet> {
    let mut node = tree;
    loop {
        match node {
            DtNode::Leaf(a) => return Ok(a),
            DtNode::Inner { pred, left, right } => {
                node = if crate::policy::eval_predicate(pred, e)? { left } else { right };
            }
        }
    }
}

struct Learner<'p> {
    states: Vec<&'p Evaluation>,
    labels: Vec<&'p ActionSet>,
    class: Vec<usize>,
    n_classes: usize,
    kinds: Vec<VarKind>,
    opts: LearnOptions,
}

#[derive(Clone, Copy)]
struct Candidate {
    pred: Predicate,
    gain: f64,
}

impl Candidate {
    // Ties are broken by variable index, then constant, then relation with
    // inequalities ahead of equality.
    fn key(&self) -> (usize, Value, u8) {
        let rel = match self.pred.rel {
            Rel::Gt => 0,
            Rel::Ge => 1,
            Rel::Eq => 2,
        };
        (self.pred.var, self.pred.constant, rel)
    }

    fn better_than(&self, other: &Candidate) -> bool {
        const TIE: f64 = 1e-12;
        if self.gain > other.gain + TIE {
            true
        } else if other.gain > self.gain + TIE {
            false
        } else {
            self.key() < other.key()
        }
    }
}

fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

impl<'p> Learner<'p> {
    fn new(policy: &'p Policy, opts: LearnOptions) -> Self {
        let mut ids: BTreeMap<&ActionSet, usize> = BTreeMap::new();
        for (_, a) in policy.rows() {
            let n = ids.len();
            ids.entry(a).or_insert(n);
        }
        // Renumber in canonical label order.
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let (states, labels): (Vec<_>, Vec<_>) = policy.rows().unzip();
        let class = labels.iter().map(|a| ids[a]).collect();
        Learner {
            states,
            labels,
            class,
            n_classes: ids.len(),
            kinds: policy.vars().iter().map(|v| v.kind).collect(),
            opts,
        }
    }

    fn grow(&self, samples: Vec<usize>) -> DtNode {
        if self.opts.safe_early_stopping {
            let mut shared = self.labels[samples[0]].clone();
            for &s in &samples[1..] {
                shared = shared.intersection(self.labels[s]);
                if shared.is_empty() {
                    break;
                }
            }
            if let Some(a) = shared.first() {
                return DtNode::Leaf(ActionSet::singleton(a));
            }
        }
        let first = self.class[samples[0]];
        if samples.iter().all(|&s| self.class[s] == first) {
            return DtNode::Leaf(self.labels[samples[0]].clone());
        }
        match self.best_split(&samples) {
            Some(pred) => {
                let (yes, no): (Vec<usize>, Vec<usize>) =
                    samples.into_iter().partition(|&s| pred.holds_for(self.states[s].0[pred.var]));
                DtNode::inner(pred, self.grow(yes), self.grow(no))
            }
            None => {
                warn!("no split separates {} samples; emitting union leaf", samples.len());
                let union = samples
                    .iter()
                    .fold(ActionSet::default(), |acc, &s| acc.union(self.labels[s]));
                DtNode::Leaf(union)
            }
        }
    }

    fn best_split(&self, samples: &[usize]) -> Option<Predicate> {
        let total = samples.len();
        let mut parent = vec![0usize; self.n_classes];
        for &s in samples {
            parent[self.class[s]] += 1;
        }
        let labels_here = parent.iter().filter(|&&c| c > 0).count();
        let h_parent = entropy(&parent, total);
        let mut best: Option<Candidate> = None;
        let mut consider = |c: Candidate| {
            if best.as_ref().is_none_or(|b| c.better_than(b)) {
                best = Some(c);
            }
        };

        for var in 0..self.kinds.len() {
            let mut sorted: Vec<usize> = samples.to_vec();
            sorted.sort_by(|&a, &b| self.states[a].0[var].cmp(&self.states[b].0[var]));
            // Group samples by distinct value, keeping per-group class counts.
            let mut groups: Vec<(Value, Vec<usize>, usize)> = Vec::new();
            for &s in &sorted {
                let v = self.states[s].0[var];
                match groups.last_mut() {
                    Some((gv, counts, n)) if *gv == v => {
                        counts[self.class[s]] += 1;
                        *n += 1;
                    }
                    _ => {
                        let mut counts = vec![0usize; self.n_classes];
                        counts[self.class[s]] += 1;
                        groups.push((v, counts, 1));
                    }
                }
            }
            if groups.len() < 2 {
                continue;
            }
            let split_gain = |below: &[usize], n_below: usize| {
                let above: Vec<usize> = parent.iter().zip(below).map(|(p, b)| p - b).collect();
                let n_above = total - n_below;
                let h = (n_below as f64 * entropy(below, n_below) + n_above as f64 * entropy(&above, n_above))
                    / total as f64;
                h_parent - h
            };

            let mut prefix = vec![0usize; self.n_classes];
            let mut n_prefix = 0;
            for w in 0..groups.len() - 1 {
                for (p, g) in prefix.iter_mut().zip(&groups[w].1) {
                    *p += g;
                }
                n_prefix += groups[w].2;
                let gain = split_gain(&prefix, n_prefix);
                let pred = match self.kinds[var] {
                    VarKind::Int => Predicate::new(var, Rel::Gt, groups[w].0),
                    VarKind::Real => {
                        let (lo, hi) = (groups[w].0.as_f64(), groups[w + 1].0.as_f64());
                        let mid = lo + (hi - lo) / 2.0;
                        let m = if mid > lo && mid <= hi { mid } else { hi };
                        Predicate::new(var, Rel::Ge, Value::real(m))
                    }
                };
                consider(Candidate { pred, gain });
            }

            if self.kinds[var] == VarKind::Int && groups.len() <= 2 * labels_here {
                for (v, counts, n) in &groups {
                    let gain = split_gain(counts, *n);
                    consider(Candidate {
                        pred: Predicate::new(var, Rel::Eq, *v),
                        gain,
                    });
                }
            }
        }
        best.map(|c| c.pred)
    }
}

/// Learns a tree from the policy table.
pub fn learn_dt(policy: &Policy, opts: LearnOptions) -> Result<DtNode> {
    if policy.is_empty() {
        return Err(Error::EmptyPolicy);
    }
    let learner = Learner::new(policy, opts);
    Ok(learner.grow((0..policy.len()).collect()))
}
