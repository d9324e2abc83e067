//! Aggregate functions over sets of term tuples.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::ast::{AggFn, Rel, Value};
use crate::rational::Rational;

/// Result of an aggregate function; the infinities arise only from `#max`
/// and `#min` over an empty set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AggValue {
    NegInf,
    Finite(Value),
    PosInf,
}

impl AggValue {
    /// Compares with a ground term; `-inf` is below and `+inf` above every term.
    pub fn cmp_value(&self, v: &Value) -> Ordering {
        match self {
            AggValue::NegInf => Ordering::Less,
            AggValue::PosInf => Ordering::Greater,
            AggValue::Finite(x) => x.cmp(v),
        }
    }

    pub fn satisfies(&self, rel: Rel, guard: &Value) -> bool {
        rel.holds(self.cmp_value(guard))
    }
}

/// Applies `func` to a set of tuples. `#sum` adds the first terms that are
/// rationals; `#max`/`#min` ignore empty tuples.
pub fn apply<'a>(func: AggFn, tuples: impl IntoIterator<Item = &'a [Value]>) -> AggValue {
    let tuples = tuples.into_iter();
    match func {
        AggFn::Count => AggValue::Finite(Value::Number(Rational::from_integer(tuples.count() as u64))),
        AggFn::Sum => {
            let total = tuples
                .filter_map(|t| t.first().and_then(Value::as_number))
                .fold(Rational::zero(), |acc, w| &acc + w);
            AggValue::Finite(Value::Number(total))
        }
        AggFn::Max => tuples
            .filter_map(|t| t.first())
            .max()
            .map_or(AggValue::NegInf, |v| AggValue::Finite(v.clone())),
        AggFn::Min => tuples
            .filter_map(|t| t.first())
            .min()
            .map_or(AggValue::PosInf, |v| AggValue::Finite(v.clone())),
    }
}

/// Every value `func` can take on `fixed ∪ S` for a subset `S` of `open`.
///
/// Infinite results are omitted since no term equals them.
pub fn reachable_values(func: AggFn, fixed: &BTreeSet<Vec<Value>>, open: &BTreeSet<Vec<Value>>) -> BTreeSet<Value> {
    let open: Vec<&Vec<Value>> = open.iter().filter(|t| !fixed.contains(*t)).collect();
    let mut out = BTreeSet::new();
    match func {
        AggFn::Count => {
            for n in fixed.len()..=fixed.len() + open.len() {
                out.insert(Value::Number(Rational::from_integer(n as u64)));
            }
        }
        AggFn::Sum => {
            let base = match apply(func, fixed.iter().map(Vec::as_slice)) {
                AggValue::Finite(Value::Number(r)) => r,
                _ => unreachable!("sums are finite rationals"),
            };
            let mut sums = BTreeSet::from([base]);
            for w in open.iter().filter_map(|t| t.first().and_then(Value::as_number)) {
                let shifted: Vec<Rational> = sums.iter().map(|s| s + w).collect();
                sums.extend(shifted);
            }
            out.extend(sums.into_iter().map(Value::Number));
        }
        AggFn::Max | AggFn::Min => {
            let base = apply(func, fixed.iter().map(Vec::as_slice));
            if let AggValue::Finite(v) = &base {
                out.insert(v.clone());
            }
            for first in open.iter().filter_map(|t| t.first()) {
                let better = match func {
                    AggFn::Max => base.cmp_value(first) == Ordering::Less,
                    _ => base.cmp_value(first) == Ordering::Greater,
                };
                if better {
                    out.insert(first.clone());
                }
            }
        }
    }
    out
}
