//! Variable-order optimization by in-place adjacent swaps.
//!
//! Sizes are decision-node counts of the diagram reachable from the given
//! root. Both procedures collect garbage with that root as the only live
//! handle, so other handles into the manager must not be used afterwards.

use crate::dd::{DdManager, NodeRef};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReorderMode {
    /// Repeat sifting passes until one yields no improvement.
    SiftConverge,
    /// Try every order.
    Exhaustive,
    /// Exhaustive up to `exhaustive_max_vars` variables, sifting beyond.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReorderOptions {
    pub mode: ReorderMode,
    pub exhaustive_max_vars: usize,
}

impl Default for ReorderOptions {
    fn default() -> Self {
        ReorderOptions {
            mode: ReorderMode::Auto,
            exhaustive_max_vars: 8,
        }
    }
}

const GC_INTERVAL: usize = 64;

/// One sifting pass: every variable, most populous level first, is moved
/// through all levels and parked where the diagram was smallest (ties go to
/// the position nearest where it started).
pub fn sift(m: &mut DdManager, root: NodeRef) -> Result<NodeRef> {
    let n = m.num_vars();
    if n < 2 {
        return Ok(root);
    }
    m.collect_garbage(&[root]);
    let pop = m.level_population(root);
    let mut vars: Vec<(usize, u32)> = (0..n).map(|l| (pop[l], m.var_at(l))).collect();
    vars.sort_by(|a, b| b.0.cmp(&a.0).then(m.level_of(a.1).cmp(&m.level_of(b.1))));

    for (_, var) in vars {
        let start = m.level_of(var);
        let mut best = (m.decision_count(root), start);
        let mut consider = |m: &DdManager, level: usize| {
            let size = m.decision_count(root);
            let nearer = level.abs_diff(start) < best.1.abs_diff(start);
            if size < best.0 || (size == best.0 && nearer) {
                best = (size, level);
            }
        };
        // Visit the nearer end first.
        let down_first = n - 1 - start <= start;
        let mut cur = start;
        let mut swaps = 0;
        let mut step = |m: &mut DdManager, cur: &mut usize, down: bool| -> Result<()> {
            if down {
                m.swap_adjacent(*cur)?;
                *cur += 1;
            } else {
                m.swap_adjacent(*cur - 1)?;
                *cur -= 1;
            }
            swaps += 1;
            if swaps % GC_INTERVAL == 0 {
                m.collect_garbage(&[root]);
            }
            Ok(())
        };
        for pass_down in [down_first, !down_first] {
            if pass_down {
                while cur + 1 < n {
                    step(m, &mut cur, true)?;
                    consider(m, cur);
                }
            } else {
                while cur > 0 {
                    step(m, &mut cur, false)?;
                    consider(m, cur);
                }
            }
        }
        let target = best.1;
        while cur < target {
            step(m, &mut cur, true)?;
        }
        while cur > target {
            step(m, &mut cur, false)?;
        }
        m.collect_garbage(&[root]);
    }
    Ok(root)
}

/// Moves variables with adjacent swaps until the order equals `target`.
pub fn apply_order(m: &mut DdManager, root: NodeRef, target: &[u32]) -> Result<()> {
    if target.len() != m.num_vars() {
        return Err(Error::Domain("target order has the wrong length".into()));
    }
    let mut swaps = 0;
    for (i, &var) in target.iter().enumerate() {
        let mut j = m.level_of(var);
        if j < i {
            return Err(Error::Domain(format!("variable {var} repeated in target order")));
        }
        while j > i {
            m.swap_adjacent(j - 1)?;
            j -= 1;
            swaps += 1;
            if swaps % GC_INTERVAL == 0 {
                m.collect_garbage(&[root]);
            }
        }
    }
    m.collect_garbage(&[root]);
    Ok(())
}

/// Adjacent transpositions (by lower position) visiting all `n!`
/// permutations in Steinhaus–Johnson–Trotter order.
pub fn sjt_swaps(n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut dir: Vec<isize> = vec![-1; n];
    let mut out = Vec::new();
    loop {
        let mut mobile: Option<usize> = None;
        for i in 0..n {
            let j = i as isize + dir[perm[i]];
            if j >= 0 && (j as usize) < n && perm[j as usize] < perm[i] && mobile.is_none_or(|k| perm[i] > perm[k]) {
                mobile = Some(i);
            }
        }
        let Some(i) = mobile else { break };
        let j = (i as isize + dir[perm[i]]) as usize;
        out.push(i.min(j));
        perm.swap(i, j);
        let moved = perm[j];
        for &e in perm.iter() {
            if e > moved {
                dir[e] = -dir[e];
            }
        }
    }
    out
}

fn exhaustive(m: &mut DdManager, root: NodeRef) -> Result<NodeRef> {
    let n = m.num_vars();
    if n < 2 {
        return Ok(root);
    }
    m.collect_garbage(&[root]);
    let mut best = (m.decision_count(root), m.order().to_vec());
    for (k, level) in sjt_swaps(n).into_iter().enumerate() {
        m.swap_adjacent(level)?;
        if (k + 1) % GC_INTERVAL == 0 {
            m.collect_garbage(&[root]);
        }
        let size = m.decision_count(root);
        if size < best.0 || (size == best.0 && m.order() < best.1.as_slice()) {
            best = (size, m.order().to_vec());
        }
    }
    apply_order(m, root, &best.1)?;
    Ok(root)
}

/// Optimizes the order of `m` for `root`. The size never increases.
pub fn reorder_to_convergence(m: &mut DdManager, root: NodeRef, opts: ReorderOptions) -> Result<NodeRef> {
    let n = m.num_vars();
    let mode = match opts.mode {
        ReorderMode::Auto if n <= opts.exhaustive_max_vars => ReorderMode::Exhaustive,
        ReorderMode::Auto => ReorderMode::SiftConverge,
        other => other,
    };
    match mode {
        ReorderMode::Exhaustive => {
            if n > opts.exhaustive_max_vars {
                return Err(Error::ExhaustiveTooLarge {
                    vars: n,
                    cap: opts.exhaustive_max_vars,
                });
            }
            exhaustive(m, root)
        }
        _ => {
            let mut size = m.decision_count(root);
            loop {
                sift(m, root)?;
                let next = m.decision_count(root);
                if next >= size {
                    break;
                }
                size = next;
            }
            Ok(root)
        }
    }
}
