//! Reference implementations used as oracles by the integration tests.
//! Nothing here calls the library's own evaluation, reduction or solver
//! code paths; diagrams are only inspected through `DdManager::view`.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use pdd_core::dd::{DdManager, NodeRef, NodeView, TerminalLabel};
use pdd_core::dt::DtNode;
use pdd_core::pdd::PredicateBijection;
use pdd_core::policy::{ActionSet, Evaluation, Predicate, Rel, Value};
use rand::Rng;

/// Truth of `p` on `e`, computed from scratch.
pub fn holds(p: &Predicate, e: &Evaluation) -> bool {
    let x = e.0[p.var].as_f64();
    let c = p.constant.as_f64();
    match p.rel {
        Rel::Eq => x == c,
        Rel::Ge => x >= c,
        Rel::Gt => x > c,
    }
}

pub fn dt_eval<'a>(t: &'a DtNode, e: &Evaluation) -> &'a ActionSet {
    match t {
        DtNode::Leaf(a) => a,
        DtNode::Inner { pred, left, right } => {
            if holds(pred, e) {
                dt_eval(left, e)
            } else {
                dt_eval(right, e)
            }
        }
    }
}

/// Walks a diagram with a per-variable assignment.
pub fn walk<'m>(m: &'m DdManager, mut n: NodeRef, bits: &[bool]) -> &'m TerminalLabel {
    loop {
        match m.view(n) {
            NodeView::Terminal(l) => return l,
            NodeView::Inner { var, lo, hi, .. } => n = if bits[var as usize] { hi } else { lo },
        }
    }
}

pub fn lift_oracle(gamma: &PredicateBijection, e: &Evaluation) -> Vec<bool> {
    gamma.iter().map(|(_, p)| holds(p, e)).collect()
}

/// Full truth table indexed by the bit vector `sum bits[i] << i`.
pub fn truth_table(m: &DdManager, n: NodeRef, nvars: usize) -> Vec<TerminalLabel> {
    (0..1usize << nvars)
        .map(|code| {
            let bits: Vec<bool> = (0..nvars).map(|i| code >> i & 1 == 1).collect();
            walk(m, n, &bits).clone()
        })
        .collect()
}

/// Builds the function `table` in `m` by Shannon expansion along the
/// manager's current order.
pub fn build_from_table(m: &mut DdManager, table: &[usize], terminals: &[NodeRef]) -> NodeRef {
    fn rec(m: &mut DdManager, level: usize, code: usize, table: &[usize], terminals: &[NodeRef]) -> NodeRef {
        if level == m.num_vars() {
            return terminals[table[code]];
        }
        let var = m.var_at(level);
        let lo = rec(m, level + 1, code, table, terminals);
        let hi = rec(m, level + 1, code | 1 << var, table, terminals);
        m.mk_var_node(var, lo, hi).unwrap()
    }
    rec(m, 0, 0, table, terminals)
}

/// Terminals `{t0}`, `{t1}`, ... in `m`.
pub fn action_terminals(m: &mut DdManager, k: usize) -> Vec<NodeRef> {
    (0..k).map(|i| m.actions(ActionSet::singleton(format!("t{i}"))).unwrap()).collect()
}

/// A random table with structure: labels come from a random decision tree
/// over the bits, so tables range from constant to irregular.
pub fn random_table<R: Rng>(rng: &mut R, nvars: usize, labels: usize, depth: usize) -> Vec<usize> {
    enum T {
        Leaf(usize),
        Split(usize, Box<T>, Box<T>),
    }
    fn gen<R: Rng>(rng: &mut R, nvars: usize, labels: usize, depth: usize) -> T {
        if depth == 0 || nvars == 0 || rng.gen_bool(0.2) {
            T::Leaf(rng.gen_range(0..labels))
        } else {
            T::Split(
                rng.gen_range(0..nvars),
                Box::new(gen(rng, nvars, labels, depth - 1)),
                Box::new(gen(rng, nvars, labels, depth - 1)),
            )
        }
    }
    fn eval(t: &T, code: usize) -> usize {
        match t {
            T::Leaf(l) => *l,
            T::Split(v, lo, hi) => eval(if code >> v & 1 == 1 { hi } else { lo }, code),
        }
    }
    let t = gen(rng, nvars, labels, depth);
    (0..1usize << nvars).map(|c| eval(&t, c)).collect()
}

/// Decision-node count of the reduced ordered diagram of `table` under
/// `order` (top first), from distinct subfunctions alone: a level holds one
/// node per distinct cofactor that depends on the level's variable.
pub fn ordered_size(table: &[usize], order: &[u32]) -> usize {
    let n = order.len();
    let mut total = 0;
    // Subfunctions after fixing the first `level` variables, each a table over
    // the remaining ones indexed in `order` sequence.
    let remap: Vec<usize> = (0..1usize << n)
        .map(|code| {
            // code's bit k is the value of order[k]
            order
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &v)| acc | (code >> k & 1) << v)
        })
        .collect();
    let reordered: Vec<usize> = remap.iter().map(|&c| table[c]).collect();
    for level in 0..n {
        let width = 1usize << (n - level);
        let mut distinct: BTreeSet<&[usize]> = BTreeSet::new();
        // Bits 0..level fixed: the subtable for a prefix assignment `a` is the
        // entries whose low `level` bits equal `a`.
        let subtables: Vec<Vec<usize>> = (0..1usize << level)
            .map(|a| (0..width).map(|rest| reordered[a | rest << level]).collect())
            .collect();
        for s in &subtables {
            let half = width / 2;
            let lo: Vec<usize> = (0..half).map(|r| s[2 * r]).collect();
            let hi: Vec<usize> = (0..half).map(|r| s[2 * r + 1]).collect();
            if lo != hi {
                distinct.insert(s.as_slice());
            }
        }
        total += distinct.len();
    }
    total
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n as u32).collect(), &mut out);
    out
}

/// Whether some evaluation satisfies every literal. Candidate values are
/// the constants, their integer neighbours and midpoints, which suffices
/// for conjunctions of axis-aligned literals.
pub fn literals_satisfiable(lits: &[(Predicate, bool)], integer: &dyn Fn(usize) -> bool) -> bool {
    let mut by_var: HashMap<usize, Vec<(Predicate, bool)>> = HashMap::new();
    for &(p, b) in lits {
        by_var.entry(p.var).or_default().push((p, b));
    }
    by_var.into_iter().all(|(var, lits)| {
        let mut cs: Vec<f64> = lits.iter().map(|(p, _)| p.constant.as_f64()).collect();
        cs.sort_by(f64::total_cmp);
        let mut cand: Vec<f64> = Vec::new();
        for (i, &c) in cs.iter().enumerate() {
            cand.extend([c - 1.0, c, c + 1.0]);
            if let Some(&d) = cs.get(i + 1) {
                cand.push((c + d) / 2.0);
            }
        }
        let int = integer(var);
        cand.into_iter().filter(|x| !int || x.fract() == 0.0).any(|x| {
            let value = if int { Value::Int(x as i64) } else { Value::real(x) };
            lits.iter().all(|(p, b)| {
                let mut e = vec![Value::Int(0); var + 1];
                e[var] = value;
                holds(p, &Evaluation(e)) == *b
            })
        })
    })
}

/// Every root-to-terminal path prefix of the diagram whose literals are
/// unsatisfiable, found by explicit enumeration.
pub fn inconsistent_paths(
    m: &DdManager,
    root: NodeRef,
    gamma: &PredicateBijection,
    integer: &dyn Fn(usize) -> bool,
    limit: usize,
) -> Vec<Vec<(u32, bool)>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        m: &DdManager,
        n: NodeRef,
        gamma: &PredicateBijection,
        integer: &dyn Fn(usize) -> bool,
        path: &mut Vec<(Predicate, bool)>,
        steps: &mut Vec<(u32, bool)>,
        out: &mut Vec<Vec<(u32, bool)>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if let NodeView::Inner { var, lo, hi, .. } = m.view(n) {
            for (b, child) in [(true, hi), (false, lo)] {
                path.push((*gamma.predicate(var), b));
                steps.push((var, b));
                if literals_satisfiable(path, integer) {
                    rec(m, child, gamma, integer, path, steps, out, limit);
                } else {
                    out.push(steps.clone());
                }
                path.pop();
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(m, root, gamma, integer, &mut Vec::new(), &mut Vec::new(), &mut out, limit);
    out
}

/// Random permutation of `0..n`.
pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(rng);
    v
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
