//! Brute-force answer sets and optimization over a ground program.
//!
//! This is the reference semantics, not a solver: candidates are all subsets
//! of the non-fact atoms, and minimality is checked against every proper
//! subset of the candidate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::aggregate;
use crate::ast::{write_rational, PrintMode, Value};
use crate::grounder::{write_ground_atom, AtomId, GroundLiteral, GroundProgram, GroundRule};
use crate::rational::Rational;

/// A set of atom ids, facts included.
pub type Interpretation = BTreeSet<AtomId>;

/// Cost per level; an absent level costs zero.
pub type CostVector = BTreeMap<Rational, Rational>;

/// Largest number of non-fact atoms [`answer_sets`] will enumerate.
pub const MAX_OPEN_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("{atoms} non-fact atoms exceed the brute-force limit of {limit}")]
    TooLargeForBruteForce { atoms: usize, limit: usize },
}

fn holds(l: &GroundLiteral, truth: &dyn Fn(AtomId) -> bool) -> bool {
    match l {
        GroundLiteral::Pos(a) => truth(*a),
        GroundLiteral::Neg(a) => !truth(*a),
        GroundLiteral::Aggregate { negated, agg } => {
            let tuples: BTreeSet<&[Value]> = agg
                .elements
                .iter()
                .filter(|e| e.condition.iter().all(|c| holds(c, truth)))
                .map(|e| e.tuple.as_slice())
                .collect();
            aggregate::apply(agg.func, tuples).satisfies(agg.rel, &agg.guard) != *negated
        }
    }
}

fn body_holds(body: &[GroundLiteral], truth: &dyn Fn(AtomId) -> bool) -> bool {
    body.iter().all(|l| holds(l, truth))
}

fn rule_holds(r: &GroundRule, truth: &dyn Fn(AtomId) -> bool) -> bool {
    !body_holds(&r.body, truth) || r.head.iter().any(|&h| truth(h))
}

/// Whether `l` is true with respect to `i`.
pub fn satisfied(l: &GroundLiteral, i: &Interpretation) -> bool {
    holds(l, &|a| i.contains(&a))
}

/// The rules whose whole body is true under `i`; facts are kept.
pub fn reduct(g: &GroundProgram, i: &Interpretation) -> GroundProgram {
    let truth = |a: AtomId| i.contains(&a);
    GroundProgram {
        rules: g
            .rules
            .iter()
            .filter(|r| body_holds(&r.body, &truth))
            .cloned()
            .collect(),
        ..g.clone()
    }
}

/// No atom together with its strong negation.
pub fn consistent(g: &GroundProgram, i: &Interpretation) -> bool {
    i.iter().all(|&a| {
        let atom = g.atoms.atom(a);
        if !atom.negative {
            return true;
        }
        let mut positive = atom.clone();
        positive.negative = false;
        g.atoms.get(&positive).is_none_or(|p| !i.contains(&p))
    })
}

/// Whether `i` contains every fact and satisfies every rule.
pub fn is_model(g: &GroundProgram, i: &Interpretation) -> bool {
    let truth = |a: AtomId| i.contains(&a);
    g.facts.is_subset(i) && g.rules.iter().all(|r| rule_holds(r, &truth))
}

/// Candidate atoms are numbered by bit position.
struct Bits {
    facts: BTreeSet<AtomId>,
    open: Vec<AtomId>,
    bit: BTreeMap<AtomId, u32>,
}

impl Bits {
    fn truth(&self, mask: u32) -> impl Fn(AtomId) -> bool + '_ {
        move |a| self.facts.contains(&a) || self.bit.get(&a).is_some_and(|b| mask >> b & 1 == 1)
    }

    fn interpretation(&self, mask: u32) -> Interpretation {
        let mut i = self.facts.clone();
        i.extend(
            self.open
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &a)| a),
        );
        i
    }
}

/// All answer sets, sorted by their atoms in term order.
pub fn answer_sets(g: &GroundProgram) -> Result<Vec<Interpretation>, EvalError> {
    let open: Vec<AtomId> = g
        .atoms
        .iter()
        .map(|(id, _)| id)
        .filter(|id| !g.facts.contains(id))
        .collect();
    if open.len() > MAX_OPEN_ATOMS {
        return Err(EvalError::TooLargeForBruteForce {
            atoms: open.len(),
            limit: MAX_OPEN_ATOMS,
        });
    }
    let bits = Bits {
        facts: g.facts.clone(),
        bit: open.iter().enumerate().map(|(b, &a)| (a, b as u32)).collect(),
        open,
    };
    let mut out = Vec::new();
    for mask in 0..(1u32 << bits.open.len()) {
        let truth = bits.truth(mask);
        if !g.rules.iter().all(|r| rule_holds(r, &truth)) {
            continue;
        }
        let reduct: Vec<&GroundRule> = g.rules.iter().filter(|r| body_holds(&r.body, &truth)).collect();
        // proper submasks of `mask`, largest first
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            let t = bits.truth(sub);
            if reduct.iter().all(|r| rule_holds(r, &t)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            let i = bits.interpretation(mask);
            if consistent(g, &i) {
                out.push(i);
            }
        }
    }
    out.sort_by_cached_key(|i| sorted_atoms(g, i));
    Ok(out)
}

fn sorted_atoms<'a>(g: &'a GroundProgram, i: &Interpretation) -> Vec<&'a crate::grounder::GroundAtom> {
    let mut atoms: Vec<_> = i.iter().map(|&a| g.atoms.atom(a)).collect();
    atoms.sort();
    atoms
}

/// Per-level sums over the set of `(weight, level, terms)` tuples whose
/// weak constraint body holds; non-rational weights add nothing.
pub fn costs(g: &GroundProgram, i: &Interpretation) -> CostVector {
    let truth = |a: AtomId| i.contains(&a);
    let violated: BTreeSet<(&Value, &Rational, &Vec<Value>)> = g
        .weaks
        .iter()
        .filter(|w| body_holds(&w.body, &truth))
        .map(|w| (&w.weight, &w.level, &w.terms))
        .collect();
    let mut out = CostVector::new();
    for (weight, level, _) in violated {
        let sum = out.entry(level.clone()).or_insert_with(Rational::zero);
        if let Value::Number(w) = weight {
            *sum = &*sum + w;
        }
    }
    out
}

/// Orders cost vectors by domination: the highest level that differs
/// decides, and the lower cost is better (`Less`).
pub fn compare_costs(a: &CostVector, b: &CostVector) -> Ordering {
    let levels: BTreeSet<&Rational> = a.keys().chain(b.keys()).collect();
    let zero = Rational::zero();
    for l in levels.into_iter().rev() {
        let ca = a.get(l).unwrap_or(&zero);
        let cb = b.get(l).unwrap_or(&zero);
        match ca.cmp(cb) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Answer sets not dominated by any other answer set, with their costs.
pub fn optimal_answer_sets(g: &GroundProgram) -> Result<Vec<(Interpretation, CostVector)>, EvalError> {
    let all: Vec<(Interpretation, CostVector)> = answer_sets(g)?
        .into_iter()
        .map(|i| {
            let c = costs(g, &i);
            (i, c)
        })
        .collect();
    let Some(best) = all.iter().map(|(_, c)| c).min_by(|a, b| compare_costs(a, b)).cloned() else {
        return Ok(all);
    };
    Ok(all
        .into_iter()
        .filter(|(_, c)| compare_costs(c, &best) == Ordering::Equal)
        .collect())
}

/// `{a, b(1/2)}` with atoms in term order.
pub fn write_answer_set(f: &mut dyn fmt::Write, g: &GroundProgram, i: &Interpretation, mode: PrintMode) -> fmt::Result {
    f.write_char('{')?;
    for (k, atom) in sorted_atoms(g, i).into_iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write_ground_atom(f, atom, mode)?;
    }
    f.write_char('}')
}

/// `COSTS l:c ...` over every level used by a weak constraint of `g`,
/// highest level first.
pub fn write_costs(f: &mut dyn fmt::Write, g: &GroundProgram, c: &CostVector, mode: PrintMode) -> fmt::Result {
    let levels: BTreeSet<&Rational> = g.weaks.iter().map(|w| &w.level).chain(c.keys()).collect();
    let zero = Rational::zero();
    f.write_str("COSTS")?;
    for l in levels.into_iter().rev() {
        f.write_char(' ')?;
        write_rational(f, l, mode)?;
        f.write_char(':')?;
        write_rational(f, c.get(l).unwrap_or(&zero), mode)?;
    }
    Ok(())
}
