//! Naive full-instantiation oracle.
//!
//! Every variable ranges over a domain of values that starts with the
//! program's constants and grows with every value an instance computes,
//! until nothing changes. No dependency analysis, semi-naive evaluation or
//! simplification is involved. Instances are pruned only when a builtin is
//! false or a positive body atom cannot be derived at all, and aggregate
//! elements likewise; neither changes the answer sets.
//!
//! Answer sets and optimality are then checked by brute force directly from
//! the definitions, without using the library evaluator.

use std::collections::{BTreeMap, BTreeSet};

use ratground_core::aggregate::AggValue;
use ratground_core::ast::BinOp;
use ratground_core::ast::{AggFn, Literal, Rel, Rule, SourceProgram, Term, Value, WeakConstraint};
use ratground_core::grounder::{eval_arith, eval_external, GroundAtom, GroundOptions};
use ratground_core::rational::Rational;

type Subst = BTreeMap<String, Value>;

/// An aggregate element: its tuple and condition literals.
type Element = (Vec<Value>, Vec<(bool, GroundAtom)>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum OLit {
    Atom(bool, GroundAtom),
    Agg {
        negated: bool,
        func: AggFn,
        elements: Vec<Element>,
        rel: Rel,
        guard: Value,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ORule {
    head: Vec<GroundAtom>,
    body: Vec<OLit>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct OWeak {
    body: Vec<OLit>,
    weight: Value,
    level: Rational,
    terms: Vec<Value>,
}

/// Answer sets as rendered atom sets, each with its per-level cost.
pub type Solutions = BTreeSet<(BTreeSet<String>, BTreeMap<Rational, Rational>)>;

fn subst(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().map(Term::from).unwrap_or_else(|| t.clone()),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| subst(a, s)).collect()),
        Term::Neg(x) => Term::Neg(Box::new(subst(x, s))),
        Term::Binary(op, l, r) => Term::Binary(*op, Box::new(subst(l, s)), Box::new(subst(r, s))),
        other => other.clone(),
    }
}

struct Ctx<'a> {
    opts: &'a GroundOptions,
    domain: &'a BTreeSet<Value>,
    possible: &'a BTreeSet<GroundAtom>,
    /// Atoms true in every answer set.
    certain: &'a BTreeSet<GroundAtom>,
    /// Every value computed while instantiating.
    seen: BTreeSet<Value>,
    /// Off while positive-atom variables are still unbound, so values from
    /// substitutions no atom supports stay out of the domain.
    record: bool,
}

impl Ctx<'_> {
    fn value(&mut self, t: &Term, s: &Subst) -> Option<Value> {
        let v = eval_arith(&subst(t, s), self.opts).expect("oracle evaluation")?;
        if self.record {
            self.seen.insert(v.clone());
        }
        Some(v)
    }

    /// Integer values of a range term, or the single value of another term.
    fn values(&mut self, t: &Term, s: &Subst) -> Option<Vec<Value>> {
        if let Term::Binary(BinOp::Range, l, r) = t {
            let (Value::Number(lo), Value::Number(hi)) = (self.value(l, s)?, self.value(r, s)?) else {
                return None;
            };
            let (lo, hi) = (lo.to_i64()?, hi.to_i64()?);
            let vs: Vec<Value> = (lo..=hi).map(|i| Value::Number(Rational::from_integer(i))).collect();
            if self.record {
                self.seen.extend(vs.iter().cloned());
            }
            return Some(vs);
        }
        Some(vec![self.value(t, s)?])
    }

    fn atom(&mut self, a: &ratground_core::ast::ClassicalAtom, s: &Subst) -> Option<GroundAtom> {
        let args = a.args.iter().map(|t| self.value(t, s)).collect::<Option<Vec<_>>>()?;
        Some(GroundAtom {
            negative: a.negative,
            predicate: a.predicate.clone(),
            args,
        })
    }

    /// `Some(truth)` for builtins and externals, `None` if undefined.
    fn test(&mut self, lit: &Literal, s: &Subst) -> Option<bool> {
        match lit {
            Literal::Builtin(b) => {
                let ls = self.values(&b.left, s)?;
                let rs = self.values(&b.right, s)?;
                if ls.len() > 1 || rs.len() > 1 {
                    // a range on one side of `=`: membership
                    let (single, range) = if ls.len() == 1 { (&ls[0], &rs) } else { (&rs[0], &ls) };
                    return Some(range.contains(single));
                }
                Some(b.rel.holds(ls[0].cmp(&rs[0])))
            }
            Literal::External { negated, call } => {
                let inputs = call
                    .inputs
                    .iter()
                    .map(|t| self.value(t, s))
                    .collect::<Option<Vec<_>>>()?;
                let out = eval_external(&call.name, &inputs, Default::default()).expect("oracle external")?;
                if self.record {
                    self.seen.insert(out.clone());
                }
                let want = self.value(&call.outputs[0], s)?;
                Some((out == want) != *negated)
            }
            _ => unreachable!(),
        }
    }

    /// Body instance under `s`; `None` drops the instance.
    fn body(&mut self, body: &[Literal], s: &Subst) -> Option<Vec<OLit>> {
        let mut out = Vec::new();
        for lit in body {
            match lit {
                Literal::Atom { negated, atom } => {
                    let g = self.atom(atom, s)?;
                    if !negated && !self.possible.contains(&g) {
                        return None;
                    }
                    out.push(OLit::Atom(!negated, g));
                }
                Literal::Builtin(_) | Literal::External { .. } => {
                    if !self.test(lit, s)? {
                        return None;
                    }
                }
                Literal::Aggregate { negated, atom } => {
                    let guard = self.value(&atom.guard, s)?;
                    let mut elements = BTreeSet::new();
                    for e in &atom.elements {
                        let mut vars = BTreeSet::new();
                        e.terms.iter().for_each(|t| t.collect_vars(&mut vars));
                        e.condition.iter().for_each(|c| c.collect_all_vars(&mut vars));
                        let local: Vec<String> = vars.into_iter().filter(|v| !s.contains_key(v)).collect();
                        for ls in substitutions(self, &e.condition, &local, s) {
                            let Some(tuple) = e.terms.iter().map(|t| self.value(t, &ls)).collect::<Option<Vec<_>>>()
                            else {
                                continue;
                            };
                            let mut cond = Vec::new();
                            let mut keep = true;
                            for c in &e.condition {
                                match c {
                                    // an underivable positive condition never holds
                                    Literal::Atom { negated, atom } => match self.atom(atom, &ls) {
                                        Some(g) if *negated || self.possible.contains(&g) => cond.push((!negated, g)),
                                        _ => keep = false,
                                    },
                                    _ => keep &= self.test(c, &ls) == Some(true),
                                }
                            }
                            if keep {
                                elements.insert((tuple, cond));
                            }
                        }
                    }
                    let values = attainable(atom.func, &elements, |cond| {
                        cond.iter().all(|(pos, a)| {
                            if *pos {
                                self.certain.contains(a)
                            } else {
                                !self.possible.contains(a)
                            }
                        })
                    });
                    if self.record {
                        self.seen.extend(values.iter().filter_map(|v| match v {
                            AggValue::Finite(v) => Some(v.clone()),
                            _ => None,
                        }));
                    }
                    // false under every interpretation
                    if !negated && !values.iter().any(|v| compares(atom.rel, v, &guard)) {
                        return None;
                    }
                    out.push(OLit::Agg {
                        negated: *negated,
                        func: atom.func,
                        elements: elements.into_iter().collect(),
                        rel: atom.rel,
                        guard,
                    });
                }
            }
        }
        Some(out)
    }
}

/// Every value the aggregate can take: tuples whose condition is `forced`
/// always count, the others on any subset.
fn attainable(
    func: AggFn,
    elements: &BTreeSet<Element>,
    forced: impl Fn(&[(bool, GroundAtom)]) -> bool,
) -> BTreeSet<AggValue> {
    let always: BTreeSet<&Vec<Value>> = elements.iter().filter(|(_, c)| forced(c)).map(|(t, _)| t).collect();
    let optional: BTreeSet<&Vec<Value>> = elements
        .iter()
        .map(|(t, _)| t)
        .filter(|t| !always.contains(t))
        .collect();
    assert!(optional.len() <= 16, "aggregate too large for the oracle");
    let mut subsets: Vec<BTreeSet<&Vec<Value>>> = vec![always];
    for t in &optional {
        let with: Vec<_> = subsets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.insert(*t);
                s
            })
            .collect();
        subsets.extend(with);
    }
    subsets.iter().map(|s| agg_value(func, s)).collect()
}

fn compares(rel: Rel, value: &AggValue, guard: &Value) -> bool {
    let ord = match value {
        AggValue::NegInf => std::cmp::Ordering::Less,
        AggValue::PosInf => std::cmp::Ordering::Greater,
        AggValue::Finite(v) => v.cmp(guard),
    };
    rel.holds(ord)
}

fn global_vars(body: &[Literal], extra: &[&Term]) -> Vec<String> {
    let mut vars = BTreeSet::new();
    body.iter().for_each(|l| l.collect_global_vars(&mut vars));
    extra.iter().for_each(|t| t.collect_vars(&mut vars));
    vars.into_iter().collect()
}

/// Extends `base` one variable at a time, variables of positive atoms
/// first, dropping partial substitutions as soon as a bound positive atom is
/// impossible or a fully bound builtin is false.
fn substitutions(ctx: &mut Ctx, body: &[Literal], vars: &[String], base: &Subst) -> Vec<Subst> {
    let mut anchored = BTreeSet::new();
    for l in body {
        if let Literal::Atom { negated: false, atom } = l {
            atom.args.iter().for_each(|t| t.collect_vars(&mut anchored));
        }
    }
    let mut order: Vec<&String> = vars.iter().filter(|v| anchored.contains(*v)).collect();
    order.extend(vars.iter().filter(|v| !anchored.contains(*v)));
    // atoms before builtins
    let mut checks: Vec<&Literal> = body
        .iter()
        .filter(|l| matches!(l, Literal::Atom { negated: false, .. }))
        .collect();
    checks.extend(
        body.iter()
            .filter(|l| matches!(l, Literal::Builtin(_) | Literal::External { .. })),
    );
    let bound = |lit: &Literal, s: &Subst| {
        let mut vs = BTreeSet::new();
        lit.collect_global_vars(&mut vs);
        vs.iter().all(|v| s.contains_key(v))
    };

    let mut partial = vec![base.clone()];
    for v in order {
        let mut next = Vec::new();
        for s in partial {
            for d in ctx.domain.iter() {
                let mut s2 = s.clone();
                s2.insert(v.clone(), d.clone());
                ctx.record = anchored.iter().all(|a| s2.contains_key(a));
                let ok = checks.iter().filter(|l| bound(l, &s2)).all(|l| match l {
                    Literal::Atom { atom, .. } => ctx.atom(atom, &s2).is_some_and(|g| ctx.possible.contains(&g)),
                    _ => ctx.test(l, &s2) == Some(true),
                });
                if ok {
                    next.push(s2);
                }
            }
        }
        partial = next;
    }
    ctx.record = true;
    partial
}

fn instantiate_rule(ctx: &mut Ctx, r: &Rule, out: &mut BTreeSet<ORule>) {
    let head_terms: Vec<&Term> = r.head.iter().flat_map(|a| a.args.iter()).collect();
    let vars = global_vars(&r.body, &head_terms);
    for s in substitutions(ctx, &r.body, &vars, &Subst::new()) {
        let Some(body) = ctx.body(&r.body, &s) else { continue };
        // head ranges expand into one rule per combination
        let mut heads: Vec<Vec<GroundAtom>> = vec![Vec::new()];
        let mut defined = true;
        for a in &r.head {
            let mut args: Vec<Vec<Value>> = vec![Vec::new()];
            for t in &a.args {
                let Some(vs) = ctx.values(t, &s) else {
                    defined = false;
                    break;
                };
                args = args
                    .into_iter()
                    .flat_map(|prefix| {
                        vs.iter().map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v.clone());
                            p
                        })
                    })
                    .collect();
            }
            let atoms: Vec<GroundAtom> = args
                .into_iter()
                .map(|args| GroundAtom {
                    negative: a.negative,
                    predicate: a.predicate.clone(),
                    args,
                })
                .collect();
            heads = if r.head.len() == 1 {
                atoms.into_iter().map(|g| vec![g]).collect()
            } else {
                heads
                    .into_iter()
                    .map(|mut h| {
                        h.extend(atoms.iter().cloned());
                        h
                    })
                    .collect()
            };
        }
        if !defined {
            continue;
        }
        for head in heads {
            out.insert(ORule {
                head,
                body: body.clone(),
            });
        }
    }
}

fn instantiate_weak(ctx: &mut Ctx, w: &WeakConstraint, out: &mut BTreeSet<OWeak>) {
    let mut extra: Vec<&Term> = vec![&w.weight, &w.level];
    extra.extend(w.terms.iter());
    let vars = global_vars(&w.body, &extra);
    for s in substitutions(ctx, &w.body, &vars, &Subst::new()) {
        let Some(body) = ctx.body(&w.body, &s) else { continue };
        let (Some(weight), Some(Value::Number(level))) = (ctx.value(&w.weight, &s), ctx.value(&w.level, &s)) else {
            continue;
        };
        let Some(terms) = w.terms.iter().map(|t| ctx.value(t, &s)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        out.insert(OWeak {
            body,
            weight,
            level,
            terms,
        });
    }
}

fn constants(t: &Term, out: &mut BTreeSet<Value>, opts: &GroundOptions) {
    if t.is_ground() && !t.contains_range() {
        if let Ok(Some(v)) = eval_arith(t, opts) {
            out.insert(v);
        }
    }
    match t {
        Term::Func(_, args) => args.iter().for_each(|a| constants(a, out, opts)),
        Term::Neg(x) => constants(x, out, opts),
        Term::Binary(_, l, r) => {
            constants(l, out, opts);
            constants(r, out, opts);
        }
        _ => {}
    }
}

fn literal_terms<'a>(l: &'a Literal, out: &mut Vec<&'a Term>) {
    match l {
        Literal::Atom { atom, .. } => out.extend(atom.args.iter()),
        Literal::Builtin(b) => out.extend([&b.left, &b.right]),
        Literal::External { call, .. } => out.extend(call.inputs.iter().chain(&call.outputs)),
        Literal::Aggregate { atom, .. } => {
            out.push(&atom.guard);
            for e in &atom.elements {
                out.extend(e.terms.iter());
                e.condition.iter().for_each(|c| literal_terms(c, out));
            }
        }
    }
}

/// The instantiated program: rules and weak constraints over ground atoms.
pub struct Instantiation {
    rules: Vec<ORule>,
    weaks: Vec<OWeak>,
}

pub fn instantiate(p: &SourceProgram, opts: &GroundOptions) -> Instantiation {
    let mut domain = BTreeSet::new();
    let mut terms = Vec::new();
    for r in &p.rules {
        terms.extend(r.head.iter().flat_map(|a| a.args.iter()));
        r.body.iter().for_each(|l| literal_terms(l, &mut terms));
    }
    for w in &p.weaks {
        terms.extend([&w.weight, &w.level]);
        terms.extend(w.terms.iter());
        w.body.iter().for_each(|l| literal_terms(l, &mut terms));
    }
    terms.iter().for_each(|t| constants(t, &mut domain, opts));

    let mut possible = BTreeSet::new();
    let mut certain = BTreeSet::new();
    for round in 0.. {
        assert!(round < 50, "oracle domain does not converge");
        let mut ctx = Ctx {
            opts,
            domain: &domain,
            possible: &possible,
            certain: &certain,
            seen: BTreeSet::new(),
            record: true,
        };
        let mut rules = BTreeSet::new();
        p.rules.iter().for_each(|r| instantiate_rule(&mut ctx, r, &mut rules));
        let mut weaks = BTreeSet::new();
        p.weaks.iter().for_each(|w| instantiate_weak(&mut ctx, w, &mut weaks));
        let seen = ctx.seen;
        let heads: BTreeSet<GroundAtom> = rules.iter().flat_map(|r| r.head.iter().cloned()).collect();
        let mut grown = domain.clone();
        grown.extend(seen);
        let sure = certain_atoms(&rules, &heads);
        if heads == possible && grown == domain && sure == certain {
            return Instantiation {
                rules: rules.into_iter().collect(),
                weaks: weaks.into_iter().collect(),
            };
        }
        possible = heads;
        certain = sure;
        domain = grown;
    }
    unreachable!()
}

fn agg_value(func: AggFn, tuples: &BTreeSet<&Vec<Value>>) -> AggValue {
    match func {
        AggFn::Count => AggValue::Finite(Value::Number(Rational::from_integer(tuples.len() as i64))),
        AggFn::Sum => AggValue::Finite(Value::Number(
            tuples
                .iter()
                .filter_map(|t| match t.first() {
                    Some(Value::Number(r)) => Some(r.clone()),
                    _ => None,
                })
                .fold(Rational::zero(), |a, b| a.add(&b)),
        )),
        AggFn::Max => tuples
            .iter()
            .filter_map(|t| t.first())
            .max()
            .cloned()
            .map_or(AggValue::NegInf, AggValue::Finite),
        AggFn::Min => tuples
            .iter()
            .filter_map(|t| t.first())
            .min()
            .cloned()
            .map_or(AggValue::PosInf, AggValue::Finite),
    }
}

fn lit_true(l: &OLit, i: &BTreeSet<&GroundAtom>) -> bool {
    match l {
        OLit::Atom(pos, a) => i.contains(a) == *pos,
        OLit::Agg {
            negated,
            func,
            elements,
            rel,
            guard,
        } => {
            let tuples: BTreeSet<&Vec<Value>> = elements
                .iter()
                .filter(|(_, c)| c.iter().all(|(pos, a)| i.contains(a) == *pos))
                .map(|(t, _)| t)
                .collect();
            compares(*rel, &agg_value(*func, &tuples), guard) != *negated
        }
    }
}

fn model(rules: &[&ORule], i: &BTreeSet<&GroundAtom>) -> bool {
    rules
        .iter()
        .all(|r| !r.body.iter().all(|l| lit_true(l, i)) || r.head.iter().any(|h| i.contains(h)))
}

/// Heads forced by single-head rules whose positive atoms are certain and
/// whose negated atoms cannot be derived.
fn certain_atoms(rules: &BTreeSet<ORule>, possible: &BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom> {
    let mut sure = BTreeSet::new();
    loop {
        let before = sure.len();
        for r in rules {
            if r.head.len() != 1 || sure.contains(&r.head[0]) {
                continue;
            }
            let forced = r.body.iter().all(|l| match l {
                OLit::Atom(true, a) => sure.contains(a),
                OLit::Atom(false, a) => !possible.contains(a),
                OLit::Agg { .. } => false,
            });
            if forced {
                sure.insert(r.head[0].clone());
            }
        }
        if sure.len() == before {
            return sure;
        }
    }
}

/// Largest instantiation `solve` searches exhaustively.
pub const MAX_ATOMS: usize = 22;

impl Instantiation {
    pub fn atom_count(&self) -> usize {
        self.rules
            .iter()
            .flat_map(|r| r.head.iter())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Answer sets with costs; with weak constraints only the optimal ones.
pub fn solve(inst: &Instantiation) -> Solutions {
    let atoms: Vec<&GroundAtom> = inst
        .rules
        .iter()
        .flat_map(|r| r.head.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(
        atoms.len() <= MAX_ATOMS,
        "too many atoms for the oracle: {}",
        atoms.len()
    );
    let all: Vec<&ORule> = inst.rules.iter().collect();
    let mut found = Vec::new();
    for mask in 0u64..(1 << atoms.len()) {
        let i: BTreeSet<&GroundAtom> = (0..atoms.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| atoms[b])
            .collect();
        if !model(&all, &i) {
            continue;
        }
        let consistent = i.iter().all(|a| {
            !a.negative || {
                let mut p = (*a).clone();
                p.negative = false;
                !i.contains(&p)
            }
        });
        if !consistent {
            continue;
        }
        let reduct: Vec<&ORule> = all
            .iter()
            .copied()
            .filter(|r| r.body.iter().all(|l| lit_true(l, &i)))
            .collect();
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            let j: BTreeSet<&GroundAtom> = (0..atoms.len())
                .filter(|b| sub >> b & 1 == 1)
                .map(|b| atoms[b])
                .collect();
            if model(&reduct, &j) {
                minimal = false;
                break;
            }
        }
        if minimal {
            let violated: BTreeSet<(&Value, &Rational, &Vec<Value>)> = inst
                .weaks
                .iter()
                .filter(|w| w.body.iter().all(|l| lit_true(l, &i)))
                .map(|w| (&w.weight, &w.level, &w.terms))
                .collect();
            let mut costs: BTreeMap<Rational, Rational> = BTreeMap::new();
            for (w, l, _) in violated {
                let c = costs.entry(l.clone()).or_insert_with(Rational::zero);
                if let Value::Number(w) = w {
                    *c = c.add(w);
                }
            }
            found.push((i.iter().map(|a| a.to_string()).collect::<BTreeSet<String>>(), costs));
        }
    }
    // A' dominates A if it is cheaper at some level and equal above it
    let cost = |c: &BTreeMap<Rational, Rational>, l: &Rational| c.get(l).cloned().unwrap_or_else(Rational::zero);
    let dominates = |a: &BTreeMap<Rational, Rational>, b: &BTreeMap<Rational, Rational>| {
        let levels: BTreeSet<&Rational> = a.keys().chain(b.keys()).collect();
        levels
            .iter()
            .any(|l| cost(a, l) < cost(b, l) && levels.iter().filter(|m| **m > *l).all(|m| cost(a, m) == cost(b, m)))
    };
    found
        .iter()
        .filter(|(_, c)| !found.iter().any(|(_, d)| dominates(d, c)))
        .cloned()
        .collect()
}
