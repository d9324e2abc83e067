//! Evaluation order for rule bodies.
//!
//! A body is scheduled greedily: a literal becomes ready once the variables it
//! needs are bound. Safety checking and grounding share this schedule, so a
//! program passes the safety check exactly when the grounder can bind every
//! variable.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{BinOp, Literal, Rel, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    /// Match a positive classical atom against derived instances.
    Match(usize),
    /// `=` builtin: evaluate one side, match the other (`pattern_left` says which).
    Assign { lit: usize, pattern_left: bool },
    /// Positive external call producing its outputs.
    Call(usize),
    /// Fully bound literal evaluated as a filter (or kept, for negative atoms).
    Test(usize),
    /// Aggregate literal; `assign` binds the guard from the aggregate's values.
    Aggregate { lit: usize, assign: bool },
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Plan {
    pub steps: Vec<Step>,
    pub bound: BTreeSet<String>,
    /// Literals that never became ready.
    pub stuck: Vec<usize>,
}

/// Variables occurring beneath an arithmetic operator.
pub(crate) fn arith_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Neg(_) | Term::Binary(..) => t.collect_vars(out),
        Term::Func(_, args) => args.iter().for_each(|a| arith_vars(a, out)),
        _ => {}
    }
}

fn all_bound(terms: &[&Term], bound: &BTreeSet<String>) -> bool {
    terms.iter().all(|t| t.vars().is_subset(bound))
}

fn pattern_ready(t: &Term, bound: &BTreeSet<String>) -> bool {
    if matches!(t, Term::Binary(BinOp::Range, ..)) {
        return false;
    }
    let mut needed = BTreeSet::new();
    arith_vars(t, &mut needed);
    needed.is_subset(bound)
}

/// Variables an aggregate shares with the rest of the rule.
pub(crate) fn aggregate_outer_vars(lit: &Literal, globals: &BTreeSet<String>) -> BTreeSet<String> {
    let mut vars = BTreeSet::new();
    if let Literal::Aggregate { atom, .. } = lit {
        for e in &atom.elements {
            e.collect_vars(&mut vars);
        }
    }
    vars.intersection(globals).cloned().collect()
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Priority {
    Filter,
    Bind,
    Match,
    Aggregate,
}

fn readiness(
    lit: &Literal,
    idx: usize,
    bound: &BTreeSet<String>,
    globals: &BTreeSet<String>,
) -> Option<(Priority, Step)> {
    match lit {
        Literal::Atom { negated: false, atom } => {
            let ready = atom
                .args
                .iter()
                .all(|t| pattern_ready(t, bound) || t.vars().is_subset(bound));
            ready.then_some((Priority::Match, Step::Match(idx)))
        }
        Literal::Atom { negated: true, atom } => {
            all_bound(&atom.args.iter().collect::<Vec<_>>(), bound).then_some((Priority::Filter, Step::Test(idx)))
        }
        Literal::Builtin(b) => {
            let left_bound = b.left.vars().is_subset(bound);
            let right_bound = b.right.vars().is_subset(bound);
            if left_bound && right_bound {
                Some((Priority::Filter, Step::Test(idx)))
            } else if b.rel == Rel::Eq && left_bound && pattern_ready(&b.right, bound) {
                Some((
                    Priority::Bind,
                    Step::Assign {
                        lit: idx,
                        pattern_left: false,
                    },
                ))
            } else if b.rel == Rel::Eq && right_bound && pattern_ready(&b.left, bound) {
                Some((
                    Priority::Bind,
                    Step::Assign {
                        lit: idx,
                        pattern_left: true,
                    },
                ))
            } else {
                None
            }
        }
        Literal::External { negated, call } => {
            let inputs_bound = all_bound(&call.inputs.iter().collect::<Vec<_>>(), bound);
            let outputs_bound = all_bound(&call.outputs.iter().collect::<Vec<_>>(), bound);
            if inputs_bound && outputs_bound {
                Some((Priority::Filter, Step::Test(idx)))
            } else if inputs_bound && !negated && call.outputs.iter().all(|t| pattern_ready(t, bound)) {
                Some((Priority::Bind, Step::Call(idx)))
            } else {
                None
            }
        }
        Literal::Aggregate { negated, atom } => {
            if !aggregate_outer_vars(lit, globals).is_subset(bound) {
                return None;
            }
            if atom.guard.vars().is_subset(bound) {
                Some((
                    Priority::Aggregate,
                    Step::Aggregate {
                        lit: idx,
                        assign: false,
                    },
                ))
            } else if !negated && atom.rel == Rel::Eq && pattern_ready(&atom.guard, bound) {
                Some((Priority::Aggregate, Step::Aggregate { lit: idx, assign: true }))
            } else {
                None
            }
        }
    }
}

fn binds(lit: &Literal, step: Step, bound: &mut BTreeSet<String>) {
    match (lit, step) {
        (Literal::Atom { atom, .. }, Step::Match(_)) => {
            atom.args.iter().for_each(|t| t.collect_matchable_vars(bound));
        }
        (Literal::Builtin(b), Step::Assign { pattern_left, .. }) => {
            let pattern = if pattern_left { &b.left } else { &b.right };
            pattern.collect_matchable_vars(bound);
        }
        (Literal::External { call, .. }, Step::Call(_)) => {
            call.outputs.iter().for_each(|t| t.collect_matchable_vars(bound));
        }
        (Literal::Aggregate { atom, .. }, Step::Aggregate { assign: true, .. }) => {
            atom.guard.collect_matchable_vars(bound);
        }
        _ => {}
    }
}

/// Schedules `body` starting from the variables in `bound`.
pub(crate) fn plan_body(body: &[Literal], bound: &BTreeSet<String>, globals: &BTreeSet<String>) -> Plan {
    let mut bound = bound.clone();
    let mut pending: Vec<usize> = (0..body.len()).collect();
    let mut steps = Vec::with_capacity(body.len());
    loop {
        let best = pending
            .iter()
            .enumerate()
            .filter_map(|(pos, &i)| readiness(&body[i], i, &bound, globals).map(|(p, s)| (p, pos, s)))
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((_, pos, step)) = best else { break };
        let idx = pending.remove(pos);
        binds(&body[idx], step, &mut bound);
        steps.push(step);
    }
    Plan {
        steps,
        bound,
        stuck: pending,
    }
}
