//! Bit-blasted baseline: each state variable is encoded as a block of bits
//! holding the rank of its value among the observed values, and the policy
//! becomes a multi-terminal diagram over those bits.

use crate::dd::{DdManager, NodeRef, SizeReport};
use crate::error::{Error, Result};
use crate::policy::{ActionSet, Evaluation, Policy, Value};
use crate::reorder::{reorder_to_convergence, ReorderMode, ReorderOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub var: usize,
    pub values: Vec<Value>,
    pub width: usize,
    /// Index of the block's most significant bit.
    pub offset: usize,
}

/// Per-variable value-rank encoding, blocks in variable order, MSB first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitEncoding {
    pub blocks: Vec<Block>,
    pub total_bits: usize,
}

fn width_for(n: usize) -> usize {
    let mut w = 1;
    while (1usize << w) < n {
        w += 1;
    }
    w
}

impl BitEncoding {
    pub fn new(policy: &Policy) -> Self {
        let mut offset = 0;
        let blocks = policy
            .vars()
            .iter()
            .enumerate()
            .map(|(var, d)| {
                let width = width_for(d.domain.len());
                let b = Block {
                    var,
                    values: d.domain.clone(),
                    width,
                    offset,
                };
                offset += width;
                b
            })
            .collect();
        BitEncoding {
            blocks,
            total_bits: offset,
        }
    }
}

pub fn encode_state(enc: &BitEncoding, e: &Evaluation) -> Result<Vec<bool>> {
    let mut bits = Vec::with_capacity(enc.total_bits);
    for b in &enc.blocks {
        let v = e
            .get(b.var)
            .ok_or_else(|| Error::UnboundVariable(format!("v{}", b.var)))?;
        let code = b.values.binary_search(&v).map_err(|_| Error::UnknownValue {
            var: format!("v{}", b.var),
            value: v.to_string(),
        })?;
        bits.extend((0..b.width).rev().map(|i| (code >> i) & 1 == 1));
    }
    Ok(bits)
}

/// The baseline diagram together with its sizes before and after sifting.
#[derive(Clone, Debug)]
pub struct BbBdd {
    pub manager: DdManager,
    pub root: NodeRef,
    pub encoding: BitEncoding,
    pub initial: SizeReport,
    pub report: SizeReport,
}

fn build_rec(m: &mut DdManager, level: usize, rows: &[(Vec<bool>, &ActionSet)]) -> Result<NodeRef> {
    if rows.is_empty() {
        return Ok(m.undefined());
    }
    if level == m.num_vars() {
        return m.actions(rows[0].1.clone());
    }
    let split = rows.partition_point(|(bits, _)| !bits[level]);
    let lo = build_rec(m, level + 1, &rows[..split])?;
    let hi = build_rec(m, level + 1, &rows[split..])?;
    m.mk_node(level, lo, hi)
}

/// Builds the block-ordered baseline from the policy rows, then sifts it to
/// convergence. Unlisted bit vectors map to the `Undefined` terminal.
pub fn build_bbbdd(policy: &Policy) -> Result<BbBdd> {
    if policy.is_empty() {
        return Err(Error::EmptyPolicy);
    }
    let encoding = BitEncoding::new(policy);
    let mut rows = policy
        .rows()
        .map(|(s, a)| Ok((encode_state(&encoding, s)?, a)))
        .collect::<Result<Vec<_>>>()?;
    rows.sort();
    let mut m = DdManager::new(encoding.total_bits);
    let root = build_rec(&mut m, 0, &rows)?;
    let initial = m.stats(root);
    let opts = ReorderOptions {
        mode: ReorderMode::SiftConverge,
        ..Default::default()
    };
    reorder_to_convergence(&mut m, root, opts)?;
    let report = m.stats(root);
    Ok(BbBdd {
        manager: m,
        root,
        encoding,
        initial,
        report,
    })
}
