//! Hash-consed reduced ordered multi-terminal decision diagrams.
//!
//! Nodes store the identity of their decision variable; the manager keeps
//! the order as a pair of permutation tables so adjacent levels can be
//! exchanged in place without invalidating handles. Each variable owns a
//! unique subtable keyed by `(lo, hi)`, and `lo == hi` is never stored.
//!
//! Terminals are either action sets (policy diagrams, plus an `Undefined`
//! marker for off-domain inputs) or Booleans (care sets). The two sorts never
//! meet inside one diagram.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::policy::ActionSet;

static NEXT_MANAGER: AtomicU32 = AtomicU32::new(1);

/// Level reported for terminals: below every variable.
pub const TERMINAL_LEVEL: usize = usize::MAX;

/// Handle to a node of a particular manager (and its clones).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    mgr: u32,
    idx: u32,
}

impl NodeRef {
    pub fn index(self) -> usize {
        self.idx as usize
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.idx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerminalLabel {
    Actions(ActionSet),
    /// Off-domain marker used by bit-blasted baselines.
    Undefined,
    Bool(bool),
}

impl TerminalLabel {
    fn sort(&self) -> Sort {
        match self {
            TerminalLabel::Bool(_) => Sort::Bool,
            _ => Sort::Policy,
        }
    }

    pub fn actions(&self) -> Option<&ActionSet> {
        match self {
            TerminalLabel::Actions(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for TerminalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalLabel::Actions(a) => write!(f, "{a}"),
            TerminalLabel::Undefined => write!(f, "⊥"),
            TerminalLabel::Bool(b) => write!(f, "{}", u8::from(*b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Sort {
    Policy,
    Bool,
}

#[derive(Clone, Debug)]
enum Slot {
    Inner { var: u32, lo: u32, hi: u32, sort: Sort },
    Terminal(TerminalLabel),
    Free,
}

/// Read-only view of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeView<'a> {
    Terminal(&'a TerminalLabel),
    Inner {
        var: u32,
        level: usize,
        lo: NodeRef,
        hi: NodeRef,
    },
}

/// Node counts over the part of a diagram reachable from one root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub decision_nodes: usize,
    pub action_nodes: usize,
    /// Decision nodes with at least two incoming edges from reachable nodes.
    pub shared_nodes: usize,
}

#[derive(Clone, Debug)]
pub struct DdManager {
    id: u32,
    slots: Vec<Slot>,
    free: Vec<u32>,
    subtables: Vec<HashMap<(u32, u32), u32>>,
    terminals: HashMap<TerminalLabel, u32>,
    var_at_level: Vec<u32>,
    level_of_var: Vec<u32>,
    ite_cache: HashMap<(u32, u32, u32), u32>,
}

impl DdManager {
    /// A manager over variables `0..num_vars` in identity order.
    pub fn new(num_vars: usize) -> Self {
        let order: Vec<u32> = (0..num_vars as u32).collect();
        Self::with_order(&order).expect("identity order is a permutation")
    }

    /// A manager whose level `i` holds variable `order[i]`.
    pub fn with_order(order: &[u32]) -> Result<Self> {
        let n = order.len();
        let mut level_of_var = vec![u32::MAX; n];
        for (level, &var) in order.iter().enumerate() {
            let slot = level_of_var
                .get_mut(var as usize)
                .ok_or_else(|| Error::Domain(format!("variable {var} out of range in order")))?;
            if *slot != u32::MAX {
                return Err(Error::Domain(format!("variable {var} repeated in order")));
            }
            *slot = level as u32;
        }
        Ok(DdManager {
            id: NEXT_MANAGER.fetch_add(1, AtomicOrdering::Relaxed),
            slots: Vec::new(),
            free: Vec::new(),
            subtables: vec![HashMap::new(); n],
            terminals: HashMap::new(),
            var_at_level: order.to_vec(),
            level_of_var,
            ite_cache: HashMap::new(),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.var_at_level.len()
    }

    /// Variables listed from the top level down.
    pub fn order(&self) -> &[u32] {
        &self.var_at_level
    }

    pub fn level_of(&self, var: u32) -> usize {
        self.level_of_var[var as usize] as usize
    }

    pub fn var_at(&self, level: usize) -> u32 {
        self.var_at_level[level]
    }

    /// Number of decision nodes held in the unique tables (live or not).
    pub fn table_size(&self) -> usize {
        self.subtables.iter().map(HashMap::len).sum()
    }

    fn handle(&self, idx: u32) -> NodeRef {
        NodeRef { mgr: self.id, idx }
    }

    fn check(&self, r: NodeRef) -> Result<u32> {
        if r.mgr != self.id || !matches!(self.slots.get(r.index()), Some(Slot::Inner { .. } | Slot::Terminal(_))) {
            return Err(Error::ManagerMismatch);
        }
        Ok(r.idx)
    }

    pub fn owns(&self, r: NodeRef) -> bool {
        self.check(r).is_ok()
    }

    fn alloc(&mut self, slot: Slot) -> u32 {
        if let Some(i) = self.free.pop() {
            self.slots[i as usize] = slot;
            i
        } else {
            self.slots.push(slot);
            (self.slots.len() - 1) as u32
        }
    }

    fn sort_of(&self, idx: u32) -> Sort {
        match &self.slots[idx as usize] {
            Slot::Inner { sort, .. } => *sort,
            Slot::Terminal(l) => l.sort(),
            Slot::Free => unreachable!("freed node in live diagram"),
        }
    }

    fn var_of(&self, idx: u32) -> Option<u32> {
        match self.slots[idx as usize] {
            Slot::Inner { var, .. } => Some(var),
            _ => None,
        }
    }

    fn level_idx(&self, idx: u32) -> usize {
        self.var_of(idx).map_or(TERMINAL_LEVEL, |v| self.level_of(v))
    }

    pub fn mk_terminal(&mut self, label: TerminalLabel) -> Result<NodeRef> {
        if let TerminalLabel::Actions(a) = &label {
            if a.is_empty() {
                return Err(Error::EmptyActionSet(" as terminal label".into()));
            }
        }
        if let Some(&i) = self.terminals.get(&label) {
            return Ok(self.handle(i));
        }
        let i = self.alloc(Slot::Terminal(label.clone()));
        self.terminals.insert(label, i);
        Ok(self.handle(i))
    }

    pub fn actions(&mut self, a: ActionSet) -> Result<NodeRef> {
        self.mk_terminal(TerminalLabel::Actions(a))
    }

    pub fn constant(&mut self, b: bool) -> NodeRef {
        self.mk_terminal(TerminalLabel::Bool(b)).expect("bool terminals are valid")
    }

    pub fn undefined(&mut self) -> NodeRef {
        self.mk_terminal(TerminalLabel::Undefined).expect("undefined terminal is valid")
    }

    /// Unchecked node construction: caller guarantees order and sort.
    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        if let Some(&i) = self.subtables[var as usize].get(&(lo, hi)) {
            return i;
        }
        let sort = self.sort_of(lo);
        let i = self.alloc(Slot::Inner { var, lo, hi, sort });
        self.subtables[var as usize].insert((lo, hi), i);
        i
    }

    /// Node at `level` with the given cofactors; elided when `lo == hi`.
    pub fn mk_node(&mut self, level: usize, lo: NodeRef, hi: NodeRef) -> Result<NodeRef> {
        if level >= self.num_vars() {
            return Err(Error::Domain(format!("level {level} does not exist")));
        }
        let var = self.var_at(level);
        self.mk_var_node(var, lo, hi)
    }

    /// Node deciding on variable `var`.
    pub fn mk_var_node(&mut self, var: u32, lo: NodeRef, hi: NodeRef) -> Result<NodeRef> {
        let (l, h) = (self.check(lo)?, self.check(hi)?);
        if var as usize >= self.num_vars() {
            return Err(Error::Domain(format!("variable {var} does not exist")));
        }
        if self.sort_of(l) != self.sort_of(h) {
            return Err(Error::KindMismatch);
        }
        let level = self.level_of(var);
        for child in [l, h] {
            let cl = self.level_idx(child);
            if level >= cl {
                return Err(Error::OrderViolation { level, child: cl });
            }
        }
        let i = self.mk(var, l, h);
        Ok(self.handle(i))
    }

    /// The Boolean projection function of `var`.
    pub fn var_bdd(&mut self, var: u32) -> Result<NodeRef> {
        let (f, t) = (self.constant(false), self.constant(true));
        self.mk_var_node(var, f, t)
    }

    pub fn view(&self, r: NodeRef) -> NodeView<'_> {
        match &self.slots[r.index()] {
            Slot::Inner { var, lo, hi, .. } => NodeView::Inner {
                var: *var,
                level: self.level_of(*var),
                lo: self.handle(*lo),
                hi: self.handle(*hi),
            },
            Slot::Terminal(l) => NodeView::Terminal(l),
            Slot::Free => panic!("node {r} was garbage collected"),
        }
    }

    pub fn is_terminal(&self, r: NodeRef) -> bool {
        matches!(self.slots[r.index()], Slot::Terminal(_))
    }

    pub fn terminal_label(&self, r: NodeRef) -> Option<&TerminalLabel> {
        match &self.slots[r.index()] {
            Slot::Terminal(l) => Some(l),
            _ => None,
        }
    }

    pub fn node_level(&self, r: NodeRef) -> usize {
        self.level_idx(r.idx)
    }

    pub fn node_var(&self, r: NodeRef) -> Option<u32> {
        self.var_of(r.idx)
    }

    pub fn is_bool(&self, r: NodeRef) -> bool {
        self.sort_of(r.idx) == Sort::Bool
    }

    /// Cofactors of `r` with respect to `var`, as `(lo, hi)`.
    pub fn cofactors(&self, r: NodeRef, var: u32) -> (NodeRef, NodeRef) {
        let (l, h) = self.cof(r.idx, var);
        (self.handle(l), self.handle(h))
    }

    fn cof(&self, idx: u32, var: u32) -> (u32, u32) {
        match self.slots[idx as usize] {
            Slot::Inner { var: v, lo, hi, .. } if v == var => (lo, hi),
            _ => (idx, idx),
        }
    }

    /// Pointwise if-then-else; `f` must be Boolean, `g` and `h` of one sort.
    pub fn ite(&mut self, f: NodeRef, g: NodeRef, h: NodeRef) -> Result<NodeRef> {
        let (fi, gi, hi) = (self.check(f)?, self.check(g)?, self.check(h)?);
        if self.sort_of(fi) != Sort::Bool || self.sort_of(gi) != self.sort_of(hi) {
            return Err(Error::KindMismatch);
        }
        let r = self.ite_rec(fi, gi, hi);
        Ok(self.handle(r))
    }

    fn bool_value(&self, idx: u32) -> Option<bool> {
        match &self.slots[idx as usize] {
            Slot::Terminal(TerminalLabel::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> u32 {
        match self.bool_value(f) {
            Some(true) => return g,
            Some(false) => return h,
            None => {}
        }
        if g == h {
            return g;
        }
        if self.bool_value(g) == Some(true) && self.bool_value(h) == Some(false) {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let top = self.level_idx(f).min(self.level_idx(g)).min(self.level_idx(h));
        let var = self.var_at(top);
        let (f0, f1) = self.cof(f, var);
        let (g0, g1) = self.cof(g, var);
        let (h0, h1) = self.cof(h, var);
        let t = self.ite_rec(f1, g1, h1);
        let e = self.ite_rec(f0, g0, h0);
        let r = self.mk(var, e, t);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    pub fn and(&mut self, a: NodeRef, b: NodeRef) -> Result<NodeRef> {
        let zero = self.constant(false);
        self.ite(a, b, zero)
    }

    pub fn or(&mut self, a: NodeRef, b: NodeRef) -> Result<NodeRef> {
        let one = self.constant(true);
        self.ite(a, one, b)
    }

    pub fn not(&mut self, a: NodeRef) -> Result<NodeRef> {
        let (zero, one) = (self.constant(false), self.constant(true));
        self.ite(a, zero, one)
    }

    /// Evaluates with bits supplied per variable identity.
    pub fn eval_with<F>(&self, root: NodeRef, mut bit: F) -> Result<&TerminalLabel>
    where
        F: FnMut(u32) -> Option<bool>,
    {
        let mut idx = self.check(root)?;
        loop {
            match &self.slots[idx as usize] {
                Slot::Terminal(l) => return Ok(l),
                Slot::Inner { var, lo, hi, .. } => {
                    let b = bit(*var).ok_or_else(|| Error::UnboundVariable(format!("p{var}")))?;
                    idx = if b { *hi } else { *lo };
                }
                Slot::Free => return Err(Error::ManagerMismatch),
            }
        }
    }

    /// Evaluates with `bits[v]` giving the value of variable `v`.
    pub fn eval_vars(&self, root: NodeRef, bits: &[bool]) -> Result<&TerminalLabel> {
        self.eval_with(root, |v| bits.get(v as usize).copied())
    }

    /// Evaluates with bits keyed by level.
    pub fn eval_levels(&self, root: NodeRef, bits: &[bool]) -> Result<&TerminalLabel> {
        self.eval_with(root, |v| bits.get(self.level_of(v)).copied())
    }

    /// Nodes reachable from `root`, parents before children.
    pub fn reachable(&self, root: NodeRef) -> Vec<NodeRef> {
        self.reachable_many(&[root])
    }

    pub fn reachable_many(&self, roots: &[NodeRef]) -> Vec<NodeRef> {
        let mut seen = vec![false; self.slots.len()];
        let mut out = Vec::new();
        let mut stack: Vec<u32> = roots.iter().rev().map(|r| r.idx).collect();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i as usize], true) {
                continue;
            }
            out.push(self.handle(i));
            if let Slot::Inner { lo, hi, .. } = self.slots[i as usize] {
                stack.push(lo);
                stack.push(hi);
            }
        }
        out
    }

    /// Count of decision nodes reachable from `root`.
    pub fn decision_count(&self, root: NodeRef) -> usize {
        self.reachable(root).into_iter().filter(|&r| !self.is_terminal(r)).count()
    }

    pub fn stats(&self, root: NodeRef) -> SizeReport {
        let nodes = self.reachable(root);
        let mut indeg: HashMap<u32, usize> = HashMap::new();
        let mut report = SizeReport::default();
        for &r in &nodes {
            match self.slots[r.index()] {
                Slot::Inner { lo, hi, .. } => {
                    report.decision_nodes += 1;
                    *indeg.entry(lo).or_default() += 1;
                    *indeg.entry(hi).or_default() += 1;
                }
                _ => report.action_nodes += 1,
            }
        }
        report.shared_nodes = nodes
            .iter()
            .filter(|r| !self.is_terminal(**r) && indeg.get(&r.idx).copied().unwrap_or(0) >= 2)
            .count();
        report
    }

    /// Variables decided on anywhere below `root`.
    pub fn support(&self, root: NodeRef) -> BTreeSet<u32> {
        self.reachable(root).into_iter().filter_map(|r| self.node_var(r)).collect()
    }

    /// Reachable decision-node count per level.
    pub fn level_population(&self, root: NodeRef) -> Vec<usize> {
        let mut pop = vec![0; self.num_vars()];
        for r in self.reachable(root) {
            if let Some(v) = self.node_var(r) {
                pop[self.level_of(v)] += 1;
            }
        }
        pop
    }

    /// Exchanges the variables at `level` and `level + 1` in place.
    ///
    /// Every handle keeps denoting the same function of the variables;
    /// only the level at which a variable is queried changes.
    pub fn swap_adjacent(&mut self, level: usize) -> Result<()> {
        if level + 1 >= self.num_vars() {
            return Err(Error::Domain(format!("cannot swap level {level} with its successor")));
        }
        let x = self.var_at_level[level];
        let y = self.var_at_level[level + 1];
        let dependent: Vec<(u32, u32, u32)> = self.subtables[x as usize]
            .iter()
            .filter(|((lo, hi), _)| self.var_of(*lo) == Some(y) || self.var_of(*hi) == Some(y))
            .map(|(&(lo, hi), &i)| (i, lo, hi))
            .collect();

        self.var_at_level.swap(level, level + 1);
        self.level_of_var[x as usize] = (level + 1) as u32;
        self.level_of_var[y as usize] = level as u32;

        for (f, f0, f1) in dependent {
            let (f00, f01) = self.cof(f0, y);
            let (f10, f11) = self.cof(f1, y);
            self.subtables[x as usize].remove(&(f0, f1));
            let g0 = self.mk(x, f00, f10);
            let g1 = self.mk(x, f01, f11);
            debug_assert_ne!(g0, g1);
            debug_assert!(!self.subtables[y as usize].contains_key(&(g0, g1)));
            let sort = self.sort_of(g0);
            self.slots[f as usize] = Slot::Inner { var: y, lo: g0, hi: g1, sort };
            self.subtables[y as usize].insert((g0, g1), f);
        }
        self.ite_cache.clear();
        Ok(())
    }

    /// Frees every decision node not reachable from `roots`.
    ///
    /// Handles to freed nodes become invalid; terminals are kept.
    pub fn collect_garbage(&mut self, roots: &[NodeRef]) {
        let mut live = vec![false; self.slots.len()];
        for r in self.reachable_many(roots) {
            live[r.index()] = true;
        }
        for (i, slot) in self.slots.iter_mut().enumerate() {
            if let Slot::Inner { var, lo, hi, .. } = *slot {
                if !live[i] {
                    self.subtables[var as usize].remove(&(lo, hi));
                    *slot = Slot::Free;
                    self.free.push(i as u32);
                }
            }
        }
        self.ite_cache.clear();
    }

    /// Verifies reducedness, ordering and table consistency of all stored nodes.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (var, table) in self.subtables.iter().enumerate() {
            for (&(lo, hi), &i) in table {
                match self.slots[i as usize] {
                    Slot::Inner { var: v, lo: l, hi: h, .. } if v as usize == var && l == lo && h == hi => {}
                    _ => return Err(format!("table entry for node {i} does not match its slot")),
                }
                if lo == hi {
                    return Err(format!("node {i} has equal children"));
                }
                let level = self.level_of(var as u32);
                if self.level_idx(lo) <= level || self.level_idx(hi) <= level {
                    return Err(format!("node {i} at level {level} violates the order"));
                }
            }
        }
        let stored: usize = self.slots.iter().filter(|s| matches!(s, Slot::Inner { .. })).count();
        if stored != self.table_size() {
            return Err("unique tables out of sync with node store".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acts(m: &mut DdManager, a: &[&str]) -> NodeRef {
        m.actions(ActionSet::new(a.iter().copied())).unwrap()
    }

    #[test]
    fn terminals_are_hash_consed() {
        let mut m = DdManager::new(2);
        let a1 = acts(&mut m, &["a"]);
        let a2 = acts(&mut m, &["a"]);
        assert_eq!(a1, a2);
        assert_eq!(acts(&mut m, &["a", "b"]), acts(&mut m, &["b", "a"]));
        assert!(matches!(m.actions(ActionSet::default()), Err(Error::EmptyActionSet(_))));
    }

    #[test]
    fn mk_node_reduces_and_orders() {
        let mut m = DdManager::new(3);
        let (a, b) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]));
        assert_eq!(m.mk_node(1, a, a).unwrap(), a);
        let n1 = m.mk_node(1, a, b).unwrap();
        assert_eq!(m.mk_node(1, a, b).unwrap(), n1);
        assert!(matches!(m.mk_node(2, n1, a), Err(Error::OrderViolation { .. })));
        let t = m.constant(true);
        assert!(matches!(m.mk_node(0, t, a), Err(Error::KindMismatch)));
        m.check_invariants().unwrap();
    }

    #[test]
    fn ite_basics() {
        let mut m = DdManager::new(2);
        let (a, b) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]));
        let p1 = m.var_bdd(1).unwrap();
        assert_eq!(m.ite(p1, a, a).unwrap(), a);
        let n = m.ite(p1, a, b).unwrap();
        assert_eq!(
            m.view(n),
            NodeView::Inner {
                var: 1,
                level: 1,
                lo: b,
                hi: a
            }
        );
        let other = DdManager::new(2).constant(true);
        assert!(matches!(m.ite(other, a, b), Err(Error::ManagerMismatch)));
    }

    #[test]
    fn stats_count_shared_diamond() {
        let mut m = DdManager::new(3);
        let (a, b, c) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]), acts(&mut m, &["c"]));
        let p2 = m.mk_node(2, a, b).unwrap();
        let left = m.mk_node(1, p2, c).unwrap();
        let right = m.mk_node(1, c, p2).unwrap();
        let root = m.mk_node(0, left, right).unwrap();
        let s = m.stats(root);
        assert_eq!(s.decision_nodes, 4);
        assert_eq!(s.action_nodes, 3);
        // p2 has two parents, the c terminal is not a decision node.
        assert_eq!(s.shared_nodes, 1);
        let t = m.stats(a);
        assert_eq!((t.decision_nodes, t.action_nodes, t.shared_nodes), (0, 1, 0));
    }

    #[test]
    fn eval_by_level_and_var() {
        let mut m = DdManager::with_order(&[1, 0]).unwrap();
        let (a, b) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]));
        let n = m.mk_var_node(0, b, a).unwrap();
        assert_eq!(m.eval_vars(n, &[true, false]).unwrap().actions(), Some(&ActionSet::singleton("a")));
        assert_eq!(m.eval_levels(n, &[false, true]).unwrap().actions(), Some(&ActionSet::singleton("a")));
        assert!(m.eval_vars(n, &[]).is_err());
        assert_eq!(m.eval_vars(a, &[]).unwrap().actions(), Some(&ActionSet::singleton("a")));
    }

    #[test]
    fn swap_twice_restores_structure() {
        let mut m = DdManager::new(3);
        let (a, b, c) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]), acts(&mut m, &["c"]));
        let n2 = m.mk_node(2, a, b).unwrap();
        let n1 = m.mk_node(1, n2, c).unwrap();
        let root = m.mk_node(0, n1, n2).unwrap();
        let before: Vec<_> = m.reachable(root).into_iter().map(|r| format!("{:?}", m.view(r))).collect();
        m.swap_adjacent(1).unwrap();
        m.check_invariants().unwrap();
        m.swap_adjacent(1).unwrap();
        m.collect_garbage(&[root]);
        m.check_invariants().unwrap();
        let after: Vec<_> = m.reachable(root).into_iter().map(|r| format!("{:?}", m.view(r))).collect();
        assert_eq!(before, after);
        assert!(m.swap_adjacent(2).is_err());
    }

    #[test]
    fn garbage_collection_keeps_roots() {
        let mut m = DdManager::new(2);
        let (a, b) = (acts(&mut m, &["a"]), acts(&mut m, &["b"]));
        let keep = m.mk_node(1, a, b).unwrap();
        let _drop = m.mk_node(0, a, b).unwrap();
        m.collect_garbage(&[keep]);
        assert_eq!(m.table_size(), 1);
        assert_eq!(m.mk_node(1, a, b).unwrap(), keep);
        m.check_invariants().unwrap();
    }
}
