//! The lparse/smodels numeric format.
//!
//! Rational weights and bounds are multiplied by the lcm of their
//! denominators, which preserves every comparison. Aggregates become
//! auxiliary atoms defined by weight (`5`) or cardinality (`2`) rules in the
//! single lower-bound form `S >= K`; other comparisons combine one or two such
//! atoms. Negative weights are removed by complementing the literal and
//! raising the bound. Auxiliary atoms get ids after all program atoms and
//! are left out of the symbol table.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::aggregate;
use crate::ast::{AggFn, PrintMode, Rel, Value};
use crate::grounder::{write_ground_atom, AtomId, GroundAggregate, GroundLiteral, GroundProgram, GroundRule};
use crate::rational::{lcm_denominators, Rational};

/// Id of the atom that is false in every model.
pub const FALSE_ATOM: AtomId = 1;

/// A literal over atom ids: `positive` false means `not atom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub atom: AtomId,
    pub positive: bool,
}

impl Lit {
    pub fn pos(atom: AtomId) -> Lit {
        Lit { atom, positive: true }
    }

    pub fn neg(atom: AtomId) -> Lit {
        Lit { atom, positive: false }
    }

    pub fn complement(self) -> Lit {
        Lit {
            positive: !self.positive,
            ..self
        }
    }
}

/// One statement of the numeric format. `neg` and `pos` hold the negative and
/// positive body atoms; `weights` follow the same order, negatives first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericRule {
    /// `1 head #lits #neg neg pos`
    Basic {
        head: AtomId,
        neg: Vec<AtomId>,
        pos: Vec<AtomId>,
    },
    /// `2 head #lits #neg bound neg pos`
    Constraint {
        head: AtomId,
        bound: BigInt,
        neg: Vec<AtomId>,
        pos: Vec<AtomId>,
    },
    /// `5 head bound #lits #neg neg pos weights`
    Weight {
        head: AtomId,
        bound: BigInt,
        neg: Vec<AtomId>,
        pos: Vec<AtomId>,
        weights: Vec<BigInt>,
    },
    /// `6 0 #lits #neg neg pos weights`
    Minimize {
        neg: Vec<AtomId>,
        pos: Vec<AtomId>,
        weights: Vec<BigInt>,
    },
    /// `8 #heads heads #lits #neg neg pos`
    Disjunctive {
        heads: Vec<AtomId>,
        neg: Vec<AtomId>,
        pos: Vec<AtomId>,
    },
}

fn split(lits: &[Lit]) -> (Vec<AtomId>, Vec<AtomId>) {
    let neg = lits.iter().filter(|l| !l.positive).map(|l| l.atom).collect();
    let pos = lits.iter().filter(|l| l.positive).map(|l| l.atom).collect();
    (neg, pos)
}

/// Splits weighted literals, keeping each weight with its literal.
fn split_weighted(lits: &[(Lit, BigInt)]) -> (Vec<AtomId>, Vec<AtomId>, Vec<BigInt>) {
    let (n, p): (Vec<_>, Vec<_>) = lits.iter().partition(|(l, _)| !l.positive);
    let weights = n.iter().chain(&p).map(|(_, w)| w.clone()).collect();
    (
        n.iter().map(|(l, _)| l.atom).collect(),
        p.iter().map(|(l, _)| l.atom).collect(),
        weights,
    )
}

impl NumericRule {
    pub fn basic(head: AtomId, body: &[Lit]) -> NumericRule {
        let (neg, pos) = split(body);
        NumericRule::Basic { head, neg, pos }
    }

    pub fn fact(head: AtomId) -> NumericRule {
        NumericRule::Basic {
            head,
            neg: vec![],
            pos: vec![],
        }
    }

    pub fn kind(&self) -> u8 {
        match self {
            NumericRule::Basic { .. } => 1,
            NumericRule::Constraint { .. } => 2,
            NumericRule::Weight { .. } => 5,
            NumericRule::Minimize { .. } => 6,
            NumericRule::Disjunctive { .. } => 8,
        }
    }

    /// Head atoms; empty for minimize statements.
    pub fn heads(&self) -> Vec<AtomId> {
        match self {
            NumericRule::Basic { head, .. }
            | NumericRule::Constraint { head, .. }
            | NumericRule::Weight { head, .. } => {
                vec![*head]
            }
            NumericRule::Disjunctive { heads, .. } => heads.clone(),
            NumericRule::Minimize { .. } => vec![],
        }
    }

    /// Whether the body holds under `truth`; minimize statements have none.
    pub fn body_holds(&self, truth: &dyn Fn(AtomId) -> bool) -> bool {
        let lits = |neg: &[AtomId], pos: &[AtomId]| -> Vec<bool> {
            neg.iter()
                .map(|&a| !truth(a))
                .chain(pos.iter().map(|&a| truth(a)))
                .collect()
        };
        match self {
            NumericRule::Basic { neg, pos, .. } | NumericRule::Disjunctive { neg, pos, .. } => {
                lits(neg, pos).into_iter().all(|b| b)
            }
            NumericRule::Constraint { bound, neg, pos, .. } => {
                BigInt::from(lits(neg, pos).into_iter().filter(|b| *b).count()) >= *bound
            }
            NumericRule::Weight {
                bound,
                neg,
                pos,
                weights,
                ..
            } => {
                let total: BigInt = lits(neg, pos)
                    .into_iter()
                    .zip(weights)
                    .filter(|(b, _)| *b)
                    .map(|(_, w)| w.clone())
                    .sum();
                total >= *bound
            }
            NumericRule::Minimize { .. } => true,
        }
    }
}

impl fmt::Display for NumericRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn ids(f: &mut fmt::Formatter<'_>, xs: &[AtomId]) -> fmt::Result {
            xs.iter().try_for_each(|x| write!(f, " {x}"))
        }
        match self {
            NumericRule::Basic { head, neg, pos } => {
                write!(f, "1 {head} {} {}", neg.len() + pos.len(), neg.len())?;
                ids(f, neg)?;
                ids(f, pos)
            }
            NumericRule::Constraint { head, bound, neg, pos } => {
                write!(f, "2 {head} {} {} {bound}", neg.len() + pos.len(), neg.len())?;
                ids(f, neg)?;
                ids(f, pos)
            }
            NumericRule::Weight {
                head,
                bound,
                neg,
                pos,
                weights,
            } => {
                write!(f, "5 {head} {bound} {} {}", neg.len() + pos.len(), neg.len())?;
                ids(f, neg)?;
                ids(f, pos)?;
                weights.iter().try_for_each(|w| write!(f, " {w}"))
            }
            NumericRule::Minimize { neg, pos, weights } => {
                write!(f, "6 0 {} {}", neg.len() + pos.len(), neg.len())?;
                ids(f, neg)?;
                ids(f, pos)?;
                weights.iter().try_for_each(|w| write!(f, " {w}"))
            }
            NumericRule::Disjunctive { heads, neg, pos } => {
                write!(f, "8 {}", heads.len())?;
                ids(f, heads)?;
                write!(f, " {} {}", neg.len() + pos.len(), neg.len())?;
                ids(f, neg)?;
                ids(f, pos)
            }
        }
    }
}

/// Multiplies every weight and the bound by the lcm of all their
/// denominators, so `sum w_i x_i >= bound` iff the same holds scaled.
pub fn scale<L: Clone>(entries: &[(L, Rational)], bound: &Rational) -> (Vec<(L, BigInt)>, BigInt) {
    let l = lcm_denominators(entries.iter().map(|(_, w)| w).chain([bound]));
    let to_int = |r: &Rational| {
        let s = r.scale(&l);
        debug_assert!(s.is_integer());
        s.numer().clone()
    };
    let scaled = entries.iter().map(|(lit, w)| (lit.clone(), to_int(w))).collect();
    (scaled, to_int(bound))
}

/// Rewrites to non-negative weights: `w * l = w + |w| * not l` for `w < 0`.
/// Zero weights are dropped.
fn shift(entries: Vec<(Lit, BigInt)>, bound: BigInt) -> (Vec<(Lit, BigInt)>, BigInt) {
    let mut bound = bound;
    let mut out = Vec::with_capacity(entries.len());
    for (lit, w) in entries {
        if w.is_zero() {
            continue;
        }
        if w.is_negative() {
            bound += w.abs();
            out.push((lit.complement(), w.abs()));
        } else {
            out.push((lit, w));
        }
    }
    (out, bound)
}

/// Allocates auxiliary ids and collects their definitions.
pub struct AuxAllocator {
    next: AtomId,
    pub rules: Vec<NumericRule>,
}

impl AuxAllocator {
    pub fn new(first_free: AtomId) -> Self {
        AuxAllocator {
            next: first_free,
            rules: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> AtomId {
        let id = self.next;
        self.next += 1;
        id
    }

    /// The next id that would be allocated.
    pub fn next_id(&self) -> AtomId {
        self.next
    }

    /// A literal true iff all of `body` holds.
    fn conjunction(&mut self, body: &[Lit]) -> Lit {
        if let [single] = body {
            return *single;
        }
        let aux = self.fresh();
        self.rules.push(NumericRule::basic(aux, body));
        Lit::pos(aux)
    }

    /// A literal true iff some body holds. Bodies must be non-empty.
    fn disjunction(&mut self, bodies: &[Vec<Lit>]) -> Lit {
        if let [single] = bodies {
            return self.conjunction(single);
        }
        let aux = self.fresh();
        for b in bodies {
            self.rules.push(NumericRule::basic(aux, b));
        }
        Lit::pos(aux)
    }

    /// Defines `head` by `sum >= bound` over integer-weighted literals.
    fn define_ge(&mut self, head: AtomId, entries: Vec<(Lit, BigInt)>, bound: BigInt, cardinality: bool) {
        let (entries, bound) = shift(entries, bound);
        if bound <= BigInt::zero() {
            self.rules.push(NumericRule::fact(head));
            return;
        }
        let (neg, pos, weights) = split_weighted(&entries);
        if cardinality && weights.iter().all(One::is_one) {
            self.rules.push(NumericRule::Constraint { head, bound, neg, pos });
        } else {
            self.rules.push(NumericRule::Weight {
                head,
                bound,
                neg,
                pos,
                weights,
            });
        }
    }

    fn ge_atom(&mut self, entries: &[(Lit, BigInt)], bound: BigInt, cardinality: bool) -> AtomId {
        let g = self.fresh();
        self.define_ge(g, entries.to_vec(), bound, cardinality);
        g
    }
}

/// Literal and weight per distinct tuple: a tuple is present iff one of its
/// element conditions holds. Tuples with an empty condition are always present.
struct TupleLits {
    always: BTreeSet<Vec<Value>>,
    open: Vec<(Vec<Value>, Lit)>,
}

fn tuple_literals(agg: &GroundAggregate, aux: &mut AuxAllocator) -> TupleLits {
    let mut conds: BTreeMap<&Vec<Value>, Vec<Vec<Lit>>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut always = BTreeSet::new();
    for e in &agg.elements {
        if e.condition.is_empty() {
            always.insert(e.tuple.clone());
            continue;
        }
        let lits = e
            .condition
            .iter()
            .map(|c| match c {
                GroundLiteral::Pos(a) => Lit::pos(*a),
                GroundLiteral::Neg(a) => Lit::neg(*a),
                GroundLiteral::Aggregate { .. } => unreachable!("element conditions hold atoms only"),
            })
            .collect();
        let entry = conds.entry(&e.tuple).or_default();
        if entry.is_empty() {
            order.push(&e.tuple);
        }
        entry.push(lits);
    }
    let open = order
        .into_iter()
        .filter(|t| !always.contains(*t))
        .map(|t| (t.clone(), aux.disjunction(&conds[t])))
        .collect();
    TupleLits { always, open }
}

/// Introduces an auxiliary atom equivalent to the aggregate (ignoring any
/// `not` in front of it) and returns its id.
pub fn normalize_aggregate(agg: &GroundAggregate, aux: &mut AuxAllocator) -> AtomId {
    let result = aux.fresh();
    let tuples = tuple_literals(agg, aux);
    match agg.func {
        AggFn::Sum | AggFn::Count => {
            let weight = |t: &[Value]| match agg.func {
                AggFn::Count => Rational::one(),
                _ => t
                    .first()
                    .and_then(Value::as_number)
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            };
            let Value::Number(guard) = &agg.guard else {
                // non-numeric guards compare above every rational
                let holds = aggregate::AggValue::Finite(Value::Number(Rational::zero())).satisfies(agg.rel, &agg.guard);
                if holds {
                    aux.rules.push(NumericRule::fact(result));
                }
                return result;
            };
            let constant = tuples.always.iter().fold(Rational::zero(), |acc, t| &acc + &weight(t));
            let bound = guard - &constant;
            let entries: Vec<(Lit, Rational)> = tuples.open.iter().map(|(t, l)| (*l, weight(t))).collect();
            let (scaled, k) = scale(&entries, &bound);
            let cardinality = agg.func == AggFn::Count;
            let one = BigInt::one();
            match agg.rel {
                Rel::Ge => aux.define_ge(result, scaled, k, cardinality),
                Rel::Gt => aux.define_ge(result, scaled, k + one, cardinality),
                Rel::Le => {
                    let g = aux.ge_atom(&scaled, k + one, cardinality);
                    aux.rules.push(NumericRule::basic(result, &[Lit::neg(g)]));
                }
                Rel::Lt => {
                    let g = aux.ge_atom(&scaled, k, cardinality);
                    aux.rules.push(NumericRule::basic(result, &[Lit::neg(g)]));
                }
                Rel::Eq => {
                    let lo = aux.ge_atom(&scaled, k.clone(), cardinality);
                    let hi = aux.ge_atom(&scaled, k + one, cardinality);
                    aux.rules
                        .push(NumericRule::basic(result, &[Lit::pos(lo), Lit::neg(hi)]));
                }
                Rel::Ne => {
                    let lo = aux.ge_atom(&scaled, k.clone(), cardinality);
                    let hi = aux.ge_atom(&scaled, k + one, cardinality);
                    aux.rules.push(NumericRule::basic(result, &[Lit::neg(lo)]));
                    aux.rules.push(NumericRule::basic(result, &[Lit::pos(hi)]));
                }
            }
        }
        AggFn::Max | AggFn::Min => {
            // "some present tuple's first term stands in `rel` to the guard"
            let exists = |rel: Rel, aux: &mut AuxAllocator| -> AtomId {
                let e = aux.fresh();
                let passes = |t: &[Value]| t.first().is_some_and(|v| rel.holds(v.cmp(&agg.guard)));
                if tuples.always.iter().any(|t| passes(t)) {
                    aux.rules.push(NumericRule::fact(e));
                } else {
                    let lits: Vec<Lit> = tuples.open.iter().filter(|(t, _)| passes(t)).map(|(_, l)| *l).collect();
                    if !lits.is_empty() {
                        let (neg, pos) = split(&lits);
                        aux.rules.push(NumericRule::Constraint {
                            head: e,
                            bound: BigInt::one(),
                            neg,
                            pos,
                        });
                    }
                }
                e
            };
            // weak and strict one-sided conditions in the aggregate's own direction
            let (weak, strict) = if agg.func == AggFn::Max {
                (Rel::Ge, Rel::Gt)
            } else {
                (Rel::Le, Rel::Lt)
            };
            let (toward_weak, toward_strict, away_weak, away_strict) = if agg.func == AggFn::Max {
                (Rel::Ge, Rel::Gt, Rel::Le, Rel::Lt)
            } else {
                (Rel::Le, Rel::Lt, Rel::Ge, Rel::Gt)
            };
            let body: Vec<Vec<Lit>> = match agg.rel {
                r if r == toward_weak => vec![vec![Lit::pos(exists(weak, aux))]],
                r if r == toward_strict => vec![vec![Lit::pos(exists(strict, aux))]],
                r if r == away_weak => vec![vec![Lit::neg(exists(strict, aux))]],
                r if r == away_strict => vec![vec![Lit::neg(exists(weak, aux))]],
                Rel::Eq => {
                    let w = exists(weak, aux);
                    let s = exists(strict, aux);
                    vec![vec![Lit::pos(w), Lit::neg(s)]]
                }
                _ => {
                    let w = exists(weak, aux);
                    let s = exists(strict, aux);
                    vec![vec![Lit::neg(w)], vec![Lit::pos(s)]]
                }
            };
            for b in body {
                aux.rules.push(NumericRule::basic(result, &b));
            }
        }
    }
    result
}

fn body_literals(body: &[GroundLiteral], aux: &mut AuxAllocator) -> Vec<Lit> {
    body.iter()
        .map(|l| match l {
            GroundLiteral::Pos(a) => Lit::pos(*a),
            GroundLiteral::Neg(a) => Lit::neg(*a),
            GroundLiteral::Aggregate { negated, agg } => {
                let a = normalize_aggregate(agg, aux);
                if *negated {
                    Lit::neg(a)
                } else {
                    Lit::pos(a)
                }
            }
        })
        .collect()
}

/// Translates one rule: its own statement first, then the definitions of
/// the auxiliary atoms it introduced.
pub fn translate_rule(rule: &GroundRule, aux: &mut AuxAllocator) -> Vec<NumericRule> {
    let mut defs = AuxAllocator::new(aux.next_id());
    let body = body_literals(&rule.body, &mut defs);
    aux.next = defs.next;
    let (neg, pos) = split(&body);
    let main = match rule.head.as_slice() {
        [] => NumericRule::Basic {
            head: FALSE_ATOM,
            neg,
            pos,
        },
        [h] => NumericRule::Basic { head: *h, neg, pos },
        hs => NumericRule::Disjunctive {
            heads: hs.to_vec(),
            neg,
            pos,
        },
    };
    let mut out = vec![main];
    out.extend(defs.rules);
    out
}

/// All statements for `g`: facts, rules, weak constraint definitions, then
/// one minimize statement per level from the highest level down.
pub fn translate(g: &GroundProgram) -> Vec<NumericRule> {
    let mut aux = AuxAllocator::new(g.atoms.next_id());
    let mut out: Vec<NumericRule> = g.facts.iter().map(|&f| NumericRule::fact(f)).collect();
    for r in &g.rules {
        out.extend(translate_rule(r, &mut aux));
    }

    // weak(P,I) is a set of (weight, level, terms) tuples
    type Key<'a> = (&'a Rational, &'a Rational, &'a Vec<Value>);
    let mut groups: BTreeMap<Key, Vec<&Vec<GroundLiteral>>> = BTreeMap::new();
    let mut order = Vec::new();
    for w in &g.weaks {
        let Value::Number(weight) = &w.weight else { continue };
        if weight.is_zero() {
            continue;
        }
        let key = (weight, &w.level, &w.terms);
        let entry = groups.entry(key).or_default();
        if entry.is_empty() {
            order.push(key);
        }
        entry.push(&w.body);
    }
    let mut levels: BTreeMap<&Rational, Vec<(Lit, Rational)>> = BTreeMap::new();
    for key in order {
        let bodies = &groups[&key];
        let lit = match bodies.as_slice() {
            [b] if b.len() == 1 && !matches!(b[0], GroundLiteral::Aggregate { .. }) => body_literals(b, &mut aux)[0],
            _ => {
                let t = aux.fresh();
                for b in bodies {
                    let lits = body_literals(b, &mut aux);
                    aux.rules.push(NumericRule::basic(t, &lits));
                }
                Lit::pos(t)
            }
        };
        levels.entry(key.1).or_default().push((lit, key.0.clone()));
    }
    out.append(&mut aux.rules);
    for (_, entries) in levels.into_iter().rev() {
        let (scaled, _) = scale(&entries, &Rational::zero());
        let (scaled, _) = shift(scaled, BigInt::zero());
        let (neg, pos, weights) = split_weighted(&scaled);
        out.push(NumericRule::Minimize { neg, pos, weights });
    }
    out
}

/// Writes the complete numeric program: statements, `0`, symbol table,
/// `0`, `B+` facts, `0`, `B-` with the false atom, `0`, model count.
pub fn emit(g: &GroundProgram, sink: &mut dyn fmt::Write, mode: PrintMode) -> fmt::Result {
    for r in translate(g) {
        writeln!(sink, "{r}")?;
    }
    sink.write_str("0\n")?;
    for (id, atom) in g.atoms.iter() {
        write!(sink, "{id} ")?;
        write_ground_atom(sink, atom, mode)?;
        sink.write_char('\n')?;
    }
    sink.write_str("0\nB+\n")?;
    for f in &g.facts {
        writeln!(sink, "{f}")?;
    }
    writeln!(sink, "0\nB-\n{FALSE_ATOM}\n0\n1")
}
