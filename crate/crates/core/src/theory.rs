//! Satisfiability of conjunctions of axis-aligned literals.
//!
//! Every literal mentions a single variable, so a conjunction is satisfiable
//! iff each variable's literals are. Per variable we keep the tightest lower
//! and upper bounds, the values pinned by positive `=` literals and the
//! values excluded by negated ones. Integer variables use closed integer
//! bounds (`x > c` becomes `x ≥ c + 1`); real variables keep strictness.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::policy::{Predicate, Rel, Value, VarKind};

/// Bound on a real variable: `(value, strict)`.
type RealBound = (Value, bool);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntRecord {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
    pub pinned: BTreeSet<Value>,
    pub excluded: BTreeSet<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealRecord {
    pub lower: Option<RealBound>,
    pub upper: Option<RealBound>,
    pub pinned: BTreeSet<Value>,
    pub excluded: BTreeSet<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRecord {
    Int(IntRecord),
    Real(RealRecord),
}

/// A conjunction of predicate literals, folded per variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    records: BTreeMap<usize, VarRecord>,
}

/// Outcome of a satisfiability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// A value for every constrained variable.
    Sat(BTreeMap<usize, Value>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

fn floor_i64(v: f64) -> i64 {
    v.floor().clamp(i64::MIN as f64, i64::MAX as f64) as i64
}

fn ceil_i64(v: f64) -> i64 {
    v.ceil().clamp(i64::MIN as f64, i64::MAX as f64) as i64
}

impl IntRecord {
    fn tighten_lower(&mut self, v: i64) {
        self.lower = Some(self.lower.map_or(v, |l| l.max(v)));
    }

    fn tighten_upper(&mut self, v: i64) {
        self.upper = Some(self.upper.map_or(v, |u| u.min(v)));
    }

    fn add(&mut self, rel: Rel, c: Value, polarity: bool) {
        // Smallest integer strictly greater / at least c.
        let (gt_bound, ge_bound) = match c {
            Value::Int(i) => (i.saturating_add(1), i),
            Value::Real(r) => (floor_i64(r).saturating_add(1), ceil_i64(r)),
        };
        match (rel, polarity) {
            (Rel::Gt, true) => self.tighten_lower(gt_bound),
            (Rel::Gt, false) => self.tighten_upper(gt_bound.saturating_sub(1)),
            (Rel::Ge, true) => self.tighten_lower(ge_bound),
            (Rel::Ge, false) => self.tighten_upper(ge_bound.saturating_sub(1)),
            (Rel::Eq, true) => {
                self.pinned.insert(c);
            }
            (Rel::Eq, false) => {
                if c.is_integral() {
                    self.excluded.insert(Value::Int(c.as_f64() as i64));
                }
            }
        }
    }

    fn admits(&self, v: i64) -> bool {
        self.lower.is_none_or(|l| v >= l)
            && self.upper.is_none_or(|u| v <= u)
            && !self.excluded.contains(&Value::Int(v))
    }

    fn witness(&self) -> Option<i64> {
        if self.pinned.len() > 1 {
            return None;
        }
        if let Some(p) = self.pinned.first() {
            if !p.is_integral() {
                return None;
            }
            let v = p.as_f64() as i64;
            return self.admits(v).then_some(v);
        }
        if let (Some(l), Some(u)) = (self.lower, self.upper) {
            if l > u {
                return None;
            }
            let width = (u as i128) - (l as i128) + 1;
            let blocked = self
                .excluded
                .iter()
                .filter(|e| e.as_f64() as i64 >= l && e.as_f64() as i64 <= u)
                .count() as i128;
            if width <= blocked {
                return None;
            }
        }
        // Exclusions are finite, so each scan stops after at most |excluded| steps.
        let scan = |start: i64, step: i64| {
            let mut v = start;
            loop {
                if self.admits(v) {
                    return Some(v);
                }
                v = v.checked_add(step)?;
            }
        };
        match (self.lower, self.upper) {
            (Some(l), _) => scan(l, 1),
            (None, Some(u)) => scan(u, -1),
            (None, None) => scan(0, 1),
        }
    }
}

fn lower_ok(bound: &Option<RealBound>, v: f64) -> bool {
    bound.is_none_or(|(b, strict)| if strict { v > b.as_f64() } else { v >= b.as_f64() })
}

fn upper_ok(bound: &Option<RealBound>, v: f64) -> bool {
    bound.is_none_or(|(b, strict)| if strict { v < b.as_f64() } else { v <= b.as_f64() })
}

impl RealRecord {
    fn tighten_lower(&mut self, v: Value, strict: bool) {
        let replace = match self.lower {
            None => true,
            Some((b, s)) => match v.num_cmp(b) {
                Ordering::Greater => true,
                Ordering::Equal => strict && !s,
                Ordering::Less => false,
            },
        };
        if replace {
            self.lower = Some((v, strict));
        }
    }

    fn tighten_upper(&mut self, v: Value, strict: bool) {
        let replace = match self.upper {
            None => true,
            Some((b, s)) => match v.num_cmp(b) {
                Ordering::Less => true,
                Ordering::Equal => strict && !s,
                Ordering::Greater => false,
            },
        };
        if replace {
            self.upper = Some((v, strict));
        }
    }

    fn add(&mut self, rel: Rel, c: Value, polarity: bool) {
        let c = Value::real(c.as_f64());
        match (rel, polarity) {
            (Rel::Gt, true) => self.tighten_lower(c, true),
            (Rel::Gt, false) => self.tighten_upper(c, false),
            (Rel::Ge, true) => self.tighten_lower(c, false),
            (Rel::Ge, false) => self.tighten_upper(c, true),
            (Rel::Eq, true) => {
                self.pinned.insert(c);
            }
            (Rel::Eq, false) => {
                self.excluded.insert(c);
            }
        }
    }

    fn admits(&self, v: f64) -> bool {
        lower_ok(&self.lower, v) && upper_ok(&self.upper, v) && !self.excluded.contains(&Value::real(v))
    }

    fn witness(&self) -> Option<f64> {
        if self.pinned.len() > 1 {
            return None;
        }
        if let Some(p) = self.pinned.first() {
            let v = p.as_f64();
            return self.admits(v).then_some(v);
        }
        match (self.lower, self.upper) {
            (Some((l, ls)), Some((u, us))) => {
                let (l, u) = (l.as_f64(), u.as_f64());
                if l > u {
                    return None;
                }
                if l == u {
                    return (!ls && !us && self.admits(l)).then_some(l);
                }
                // Positive width: bisect toward the lower end until the
                // candidate escapes the finitely many exclusions.
                let mut hi = u;
                for _ in 0..2048 {
                    let mid = l + (hi - l) / 2.0;
                    if mid <= l || mid >= u {
                        break;
                    }
                    if self.admits(mid) {
                        return Some(mid);
                    }
                    hi = mid;
                }
                let mut v = l + (u - l) / 2.0;
                for _ in 0..(self.excluded.len() + 2) {
                    v = v.next_up();
                    if self.admits(v) {
                        return Some(v);
                    }
                }
                None
            }
            (Some((l, strict)), None) => {
                let start = if strict { l.as_f64() + 1.0 } else { l.as_f64() };
                self.scan(start, 1.0)
            }
            (None, Some((u, strict))) => {
                let start = if strict { u.as_f64() - 1.0 } else { u.as_f64() };
                self.scan(start, -1.0)
            }
            (None, None) => self.scan(0.0, 1.0),
        }
    }

    fn scan(&self, start: f64, step: f64) -> Option<f64> {
        let mut v = start;
        for _ in 0..(self.excluded.len() + 2) {
            if self.admits(v) {
                return Some(v);
            }
            v += step;
        }
        None
    }
}

impl Context {
    /// The empty conjunction `true`.
    pub fn new() -> Self {
        Context::default()
    }

    /// Adds `p` (when `polarity`) or `¬p`. The variable kind follows the
    /// predicate constant.
    pub fn extend(&self, p: &Predicate, polarity: bool) -> Context {
        let mut next = self.clone();
        next.extend_in_place(p, polarity);
        next
    }

    pub fn extend_in_place(&mut self, p: &Predicate, polarity: bool) {
        let rec = self.records.entry(p.var).or_insert_with(|| match p.constant.kind() {
            VarKind::Int => VarRecord::Int(IntRecord::default()),
            VarKind::Real => VarRecord::Real(RealRecord::default()),
        });
        match rec {
            VarRecord::Int(r) => r.add(p.rel, p.constant, polarity),
            VarRecord::Real(r) => r.add(p.rel, p.constant, polarity),
        }
    }

    pub fn record(&self, var: usize) -> Option<&VarRecord> {
        self.records.get(&var)
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.records.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Keeps only the records of variables in `vars`.
    pub fn project(&self, vars: &BTreeSet<usize>) -> Context {
        Context {
            records: self
                .records
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, r)| (*v, r.clone()))
                .collect(),
        }
    }

    pub fn sat(&self) -> SatResult {
        let mut witness = BTreeMap::new();
        for (&var, rec) in &self.records {
            let value = match rec {
                VarRecord::Int(r) => r.witness().map(Value::Int),
                VarRecord::Real(r) => r.witness().map(Value::real),
            };
            match value {
                Some(v) => {
                    witness.insert(var, v);
                }
                None => return SatResult::Unsat,
            }
        }
        SatResult::Sat(witness)
    }

    pub fn is_sat(&self) -> bool {
        self.sat().is_sat()
    }

    /// Satisfiability of the records of a single variable.
    pub fn var_sat(&self, var: usize) -> bool {
        match self.records.get(&var) {
            None => true,
            Some(VarRecord::Int(r)) => r.witness().is_some(),
            Some(VarRecord::Real(r)) => r.witness().is_some(),
        }
    }
}

/// `sat(c ∧ lit)` for a context already known to be satisfiable.
///
/// Only the literal's variable can become contradictory, so the check is
/// local to that variable.
pub fn sat_with(c: &Context, p: &Predicate, polarity: bool) -> (bool, Context) {
    let next = c.extend(p, polarity);
    (next.var_sat(p.var), next)
}
