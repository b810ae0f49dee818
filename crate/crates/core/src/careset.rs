//! Care sets over predicate variables and the restrict operator.

use std::collections::{BTreeMap, HashMap};

use crate::dd::{DdManager, NodeRef};
use crate::error::{Error, Result};
use crate::pdd::{lift, PredicateBijection};
use crate::policy::{Evaluation, Policy};

/// Characteristic function of the set of bit vectors in `points`.
pub fn care_set_from_bits<'a, I>(m: &mut DdManager, points: I) -> Result<NodeRef>
where
    I: IntoIterator<Item = &'a Vec<bool>>,
{
    let zero = m.constant(false);
    let one = m.constant(true);
    let mut care = zero;
    for bits in points {
        let mut cube = one;
        for level in (0..m.num_vars()).rev() {
            let var = m.var_at(level);
            cube = if bits[var as usize] {
                m.mk_var_node(var, zero, cube)?
            } else {
                m.mk_var_node(var, cube, zero)?
            };
        }
        care = m.or(care, cube)?;
    }
    Ok(care)
}

/// Care set of the policy's states lifted through `gamma`.
///
/// Fails with `ConflictingLift` when two states with different action sets
/// lift to the same bit vector.
pub fn build_care_set(policy: &Policy, gamma: &PredicateBijection, m: &mut DdManager) -> Result<NodeRef> {
    let mut lifted: BTreeMap<Vec<bool>, &Evaluation> = BTreeMap::new();
    for (state, actions) in policy.rows() {
        let bits = lift(gamma, state)?;
        if let Some(prev) = lifted.get(&bits) {
            if policy.get(prev) != Some(actions) {
                return Err(Error::ConflictingLift(prev.to_string(), state.to_string()));
            }
        } else {
            lifted.insert(bits, state);
        }
    }
    care_set_from_bits(m, lifted.keys())
}

/// Like [`build_care_set`] without the conflict check. Used when the
/// diagram only has to preserve its own values on the policy states (as
/// with safe early stopping, where rows sharing a lifted vector may carry
/// different but overlapping action sets).
pub fn build_care_set_unchecked(policy: &Policy, gamma: &PredicateBijection, m: &mut DdManager) -> Result<NodeRef> {
    let mut lifted = std::collections::BTreeSet::new();
    for (state, _) in policy.rows() {
        lifted.insert(lift(gamma, state)?);
    }
    care_set_from_bits(m, lifted.iter())
}

struct Restrictor {
    zero: NodeRef,
    one: NodeRef,
    memo: HashMap<(NodeRef, NodeRef), NodeRef>,
}

impl Restrictor {
    fn rec(&mut self, m: &mut DdManager, f: NodeRef, care: NodeRef) -> Result<NodeRef> {
        if care == self.one || m.is_terminal(f) {
            return Ok(f);
        }
        if let Some(&r) = self.memo.get(&(f, care)) {
            return Ok(r);
        }
        let r = if m.node_level(care) < m.node_level(f) {
            // f does not decide on care's top variable: quantify it away.
            let var = m.node_var(care).expect("non-constant care set has a top variable");
            let (c0, c1) = m.cofactors(care, var);
            let merged = m.or(c0, c1)?;
            self.rec(m, f, merged)?
        } else {
            let var = m.node_var(f).expect("non-terminal");
            let (f0, f1) = m.cofactors(f, var);
            let (c0, c1) = m.cofactors(care, var);
            if c0 == self.zero {
                self.rec(m, f1, c1)?
            } else if c1 == self.zero {
                self.rec(m, f0, c0)?
            } else {
                let r0 = self.rec(m, f0, c0)?;
                let r1 = self.rec(m, f1, c1)?;
                m.mk_var_node(var, r0, r1)?
            }
        };
        self.memo.insert((f, care), r);
        Ok(r)
    }
}

/// Coudert–Madre restrict: a diagram agreeing with `f` wherever `care`
/// holds, built only from decisions `f` already makes.
pub fn restrict(m: &mut DdManager, f: NodeRef, care: NodeRef) -> Result<NodeRef> {
    if !m.owns(f) || !m.owns(care) {
        return Err(Error::ManagerMismatch);
    }
    if !m.is_bool(care) || m.is_bool(f) {
        return Err(Error::KindMismatch);
    }
    let zero = m.constant(false);
    if care == zero {
        return Err(Error::EmptyCareSet);
    }
    let one = m.constant(true);
    let mut r = Restrictor {
        zero,
        one,
        memo: HashMap::new(),
    };
    r.rec(m, f, care)
}
