//! Bottom-up instantiation of a safe program.
//!
//! Predicates are grounded one dependency component at a time, in dependency
//! order, with semi-naive iteration inside a component. Only derivable atoms
//! are instantiated. Atoms that are true in every answer set become facts;
//! literals whose truth is already settled are removed. Substitutions that
//! hit undefined arithmetic are skipped.

mod deps;
mod eval;
mod finalize;
mod render;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use eval::{eval_arith, eval_external};
pub use render::{write_ground_atom, write_ground_literal, write_ground_program};

use crate::aggregate;
use crate::ast::*;
use crate::plan::{plan_body, Step};
use crate::rational::Rational;
use eval::{eval, eval_range, match_term, Subst};

pub type AtomId = usize;

/// A ground classical atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub negative: bool,
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn signature(&self) -> Signature {
        Signature {
            negative: self.negative,
            name: self.predicate.clone(),
            arity: self.args.len(),
        }
    }
}

/// Atoms order like the terms `p` / `p(args)`, with `p` before `-p`.
impl Ord for GroundAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        let shape = match (self.args.is_empty(), other.args.is_empty()) {
            (true, true) => self.predicate.as_bytes().cmp(other.predicate.as_bytes()),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .args
                .len()
                .cmp(&other.args.len())
                .then_with(|| self.predicate.as_bytes().cmp(other.predicate.as_bytes()))
                .then_with(|| self.args.cmp(&other.args)),
        };
        shape.then(self.negative.cmp(&other.negative))
    }
}

impl PartialOrd for GroundAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bijection between ground atoms and dense integer ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTable {
    first: AtomId,
    atoms: Vec<GroundAtom>,
    index: BTreeMap<GroundAtom, AtomId>,
}

impl Default for AtomTable {
    fn default() -> Self {
        Self::new()
    }
}

impl AtomTable {
    /// Ids start at 2; id 1 is reserved for the numeric format's false atom.
    pub fn new() -> Self {
        Self::with_first_id(2)
    }

    pub fn with_first_id(first: AtomId) -> Self {
        AtomTable {
            first,
            atoms: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn intern(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.first + self.atoms.len();
        self.atoms.push(atom.clone());
        self.index.insert(atom, id);
        id
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    /// # Panics
    /// If `id` is not in the table.
    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id - self.first]
    }

    pub fn contains_id(&self, id: AtomId) -> bool {
        id >= self.first && id < self.next_id()
    }

    pub fn first_id(&self) -> AtomId {
        self.first
    }

    /// The smallest id not yet assigned.
    pub fn next_id(&self) -> AtomId {
        self.first + self.atoms.len()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &GroundAtom)> + '_ {
        self.atoms.iter().enumerate().map(move |(i, a)| (self.first + i, a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundLiteral {
    Pos(AtomId),
    Neg(AtomId),
    Aggregate { negated: bool, agg: GroundAggregate },
}

/// An instantiated aggregate. Element conditions hold only `Pos`/`Neg`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAggregate {
    pub func: AggFn,
    pub elements: Vec<GroundElement>,
    pub rel: Rel,
    pub guard: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundElement {
    pub tuple: Vec<Value>,
    pub condition: Vec<GroundLiteral>,
}

/// A ground rule; an empty head is a constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundRule {
    pub head: Vec<AtomId>,
    pub body: Vec<GroundLiteral>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundWeak {
    pub body: Vec<GroundLiteral>,
    /// Only rational weights contribute to costs.
    pub weight: Value,
    pub level: Rational,
    pub terms: Vec<Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub weaks: Vec<GroundWeak>,
    pub atoms: AtomTable,
    /// Atoms true in every answer set.
    pub facts: BTreeSet<AtomId>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroundOptions {
    /// `/` on two integers truncates toward zero.
    pub integer_division: bool,
    /// Report skipped substitutions in `GroundProgram::warnings`.
    pub warn_undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("{}:{}: {message}", span.line, span.column)]
    RangeType { span: Span, message: String },
    #[error("{}:{}: {message}", span.line, span.column)]
    ExternalCall { span: Span, message: String },
    #[error("{}:{}: predicate {predicate} depends on itself through an aggregate", span.line, span.column)]
    AggregateRecursion { span: Span, predicate: String },
    #[error("{}:{}: weak constraint level `{level}` is not a rational", span.line, span.column)]
    WeakLevel { span: Span, level: String },
    #[error("{}:{}: rule is not ground", span.line, span.column)]
    NotGround { span: Span },
}

impl GroundError {
    pub fn span(&self) -> Span {
        match self {
            GroundError::RangeType { span, .. }
            | GroundError::ExternalCall { span, .. }
            | GroundError::AggregateRecursion { span, .. }
            | GroundError::WeakLevel { span, .. }
            | GroundError::NotGround { span } => *span,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Window {
    Full,
    Old,
    Delta,
}

/// Per-atom grounding state.
#[derive(Clone, Copy, Default)]
struct AtomState {
    /// Round in which the atom was first derived, if ever.
    stamp: Option<u32>,
    certain: bool,
}

struct Grounder<'o> {
    opts: &'o GroundOptions,
    table: AtomTable,
    state: Vec<AtomState>,
    by_pred: BTreeMap<Signature, Vec<AtomId>>,
    /// Head predicates not yet fully grounded.
    open: BTreeSet<Signature>,
    generation: u32,
    new_atoms: usize,
    rules: Vec<GroundRule>,
    seen_rules: BTreeSet<GroundRule>,
    weaks: Vec<GroundWeak>,
    seen_weaks: BTreeSet<GroundWeak>,
    warnings: Vec<String>,
}

/// Either a ground body literal or nothing (settled true).
type Slots = Vec<Option<GroundLiteral>>;

struct Frame<'r> {
    body: &'r [Literal],
    steps: &'r [Step],
    windows: &'r [Window],
    span: Span,
}

type Leaf<'f> = dyn FnMut(&mut Grounder<'_>, &Subst, &Slots) -> Result<(), GroundError> + 'f;

/// Implicit `:- p(X..), -p(X..).` for predicates used with both polarities.
fn consistency_constraints(rules: &[Rule]) -> Vec<Rule> {
    let heads: BTreeSet<Signature> = rules
        .iter()
        .flat_map(|r| r.head.iter().map(ClassicalAtom::signature))
        .collect();
    heads
        .iter()
        .filter(|s| {
            !s.negative
                && heads.contains(&Signature {
                    negative: true,
                    ..(*s).clone()
                })
        })
        .map(|s| {
            let args: Vec<Term> = (1..=s.arity).map(|i| Term::Var(format!("X{i}"))).collect();
            let atom = |negative| ClassicalAtom {
                negative,
                predicate: s.name.clone(),
                args: args.clone(),
            };
            Rule {
                head: vec![],
                body: vec![Literal::pos(atom(false)), Literal::pos(atom(true))],
                span: Span::default(),
            }
        })
        .collect()
}

/// Grounds a safe program.
pub fn ground(p: &SourceProgram, opts: &GroundOptions) -> Result<GroundProgram, GroundError> {
    let mut rules: Vec<Rule> = p.rules.iter().map(Rule::standardize).collect();
    rules.extend(consistency_constraints(&rules));
    let comps = deps::components(&rules);

    let mut by_comp: Vec<Vec<&Rule>> = vec![Vec::new(); comps.order.len()];
    let mut constraints = Vec::new();
    for r in &rules {
        match r.head.first() {
            Some(h) => {
                let c = comps.of[&h.signature()];
                for (sig, in_agg) in deps::body_predicates(&r.body) {
                    if in_agg && comps.of.get(&sig) == Some(&c) {
                        return Err(GroundError::AggregateRecursion {
                            span: r.span,
                            predicate: sig.to_string(),
                        });
                    }
                }
                by_comp[c].push(r);
            }
            None => constraints.push(r),
        }
    }

    let mut g = Grounder {
        opts,
        table: AtomTable::new(),
        state: Vec::new(),
        by_pred: BTreeMap::new(),
        open: comps.of.keys().cloned().collect(),
        generation: 1,
        new_atoms: 0,
        rules: Vec::new(),
        seen_rules: BTreeSet::new(),
        weaks: Vec::new(),
        seen_weaks: BTreeSet::new(),
        warnings: Vec::new(),
    };
    for (ci, comp) in comps.order.iter().enumerate() {
        g.ground_component(&by_comp[ci], comp)?;
        for sig in comp {
            g.open.remove(sig);
        }
    }
    for r in constraints {
        g.ground_rule_once(r)?;
    }
    for w in &p.weaks {
        g.ground_weak(&w.standardize())?;
    }
    Ok(g.finish())
}

/// Instantiates an already ground rule verbatim, interning every atom it
/// mentions into `table`. Nothing is simplified away, so aggregate elements
/// keep their conditions even when no rule can derive them.
pub fn ground_rule_as_is(
    rule: &Rule,
    table: &mut AtomTable,
    opts: &GroundOptions,
) -> Result<Option<GroundRule>, GroundError> {
    let rule = rule.standardize();
    let span = rule.span;
    let s = Subst::new();
    let atom_of = |a: &ClassicalAtom, table: &mut AtomTable| -> Result<Option<AtomId>, GroundError> {
        let mut args = Vec::with_capacity(a.args.len());
        for t in &a.args {
            if !t.is_ground() {
                return Err(GroundError::NotGround { span });
            }
            match eval(t, &s, opts, span)? {
                Some(v) => args.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(table.intern(GroundAtom {
            negative: a.negative,
            predicate: a.predicate.clone(),
            args,
        })))
    };
    let mut head = Vec::new();
    for a in &rule.head {
        match atom_of(a, table)? {
            Some(id) => head.push(id),
            None => return Ok(None),
        }
    }
    type AtomOf<'a> = dyn Fn(&ClassicalAtom, &mut AtomTable) -> Result<Option<AtomId>, GroundError> + 'a;
    fn literal(
        l: &Literal,
        table: &mut AtomTable,
        atom_of: &AtomOf<'_>,
        opts: &GroundOptions,
        span: Span,
    ) -> Result<Option<Option<GroundLiteral>>, GroundError> {
        let s = Subst::new();
        Ok(match l {
            Literal::Atom { negated, atom } => atom_of(atom, table)?.map(|id| {
                Some(if *negated {
                    GroundLiteral::Neg(id)
                } else {
                    GroundLiteral::Pos(id)
                })
            }),
            Literal::Builtin(b) => {
                let (Some(x), Some(y)) = (eval(&b.left, &s, opts, span)?, eval(&b.right, &s, opts, span)?) else {
                    return Ok(None);
                };
                b.rel.holds(x.cmp(&y)).then_some(None)
            }
            Literal::External { negated, call } => {
                let mut inputs = Vec::new();
                for t in &call.inputs {
                    match eval(t, &s, opts, span)? {
                        Some(v) => inputs.push(v),
                        None => return Ok(None),
                    }
                }
                let Some(out) = eval_external(&call.name, &inputs, span)? else {
                    return Ok(None);
                };
                let Some(expected) = eval(&call.outputs[0], &s, opts, span)? else {
                    return Ok(None);
                };
                ((out == expected) != *negated).then_some(None)
            }
            Literal::Aggregate { negated, atom } => {
                let Some(guard) = eval(&atom.guard, &s, opts, span)? else {
                    return Ok(None);
                };
                let mut elements = Vec::new();
                for e in &atom.elements {
                    let mut tuple = Vec::new();
                    for t in &e.terms {
                        match eval(t, &s, opts, span)? {
                            Some(v) => tuple.push(v),
                            None => return Ok(None),
                        }
                    }
                    let mut condition = Vec::new();
                    for c in &e.condition {
                        match literal(c, table, atom_of, opts, span)? {
                            Some(Some(lit)) => condition.push(lit),
                            Some(None) => {}
                            None => return Ok(None),
                        }
                    }
                    elements.push(GroundElement { tuple, condition });
                }
                Some(Some(GroundLiteral::Aggregate {
                    negated: *negated,
                    agg: GroundAggregate {
                        func: atom.func,
                        elements,
                        rel: atom.rel,
                        guard,
                    },
                }))
            }
        })
    }
    let mut body = Vec::new();
    for l in &rule.body {
        match literal(l, table, &atom_of, opts, span)? {
            Some(Some(lit)) => body.push(lit),
            Some(None) => {}
            None => return Ok(None),
        }
    }
    Ok(Some(GroundRule { head, body }))
}

impl Grounder<'_> {
    fn is_open(&self, sig: &Signature) -> bool {
        self.open.contains(sig)
    }

    fn state(&self, id: AtomId) -> AtomState {
        self.state.get(id - self.table.first_id()).copied().unwrap_or_default()
    }

    fn state_mut(&mut self, id: AtomId) -> &mut AtomState {
        let i = id - self.table.first_id();
        if self.state.len() <= i {
            self.state.resize(i + 1, AtomState::default());
        }
        &mut self.state[i]
    }

    fn in_window(&self, id: AtomId, w: Window) -> bool {
        let g = self.generation;
        match (self.state(id).stamp, w) {
            (None, _) => false,
            (Some(s), Window::Full) => s < g,
            (Some(s), Window::Old) => s + 1 < g,
            (Some(s), Window::Delta) => s + 1 == g,
        }
    }

    fn undefined(&mut self, span: Span, what: &dyn core::fmt::Display) {
        if self.opts.warn_undefined {
            let msg = format!(
                "{}:{}: undefined arithmetic in `{what}`; substitution skipped",
                span.line, span.column
            );
            if !self.warnings.contains(&msg) {
                self.warnings.push(msg);
            }
        }
    }

    fn derive(&mut self, id: AtomId) {
        if self.state(id).stamp.is_none() {
            let generation = self.generation;
            self.state_mut(id).stamp = Some(generation);
            let sig = self.table.atom(id).signature();
            self.by_pred.entry(sig).or_default().push(id);
            self.new_atoms += 1;
        }
    }

    fn ground_atom(&mut self, a: &ClassicalAtom, s: &Subst, span: Span) -> Result<Option<GroundAtom>, GroundError> {
        let mut args = Vec::with_capacity(a.args.len());
        for t in &a.args {
            match eval(t, s, self.opts, span)? {
                Some(v) => args.push(v),
                None => {
                    self.undefined(span, a);
                    return Ok(None);
                }
            }
        }
        Ok(Some(GroundAtom {
            negative: a.negative,
            predicate: a.predicate.clone(),
            args,
        }))
    }

    fn ground_component(&mut self, rules: &[&Rule], comp: &[Signature]) -> Result<(), GroundError> {
        struct Prepared<'r> {
            rule: &'r Rule,
            steps: Vec<Step>,
            /// Plan positions of positive atoms over this component.
            recursive: Vec<usize>,
        }
        let prepared: Vec<Prepared> = rules
            .iter()
            .map(|r| {
                let globals = r.classify_variables().global;
                let plan = plan_body(&r.body, &BTreeSet::new(), &globals);
                let recursive = plan
                    .steps
                    .iter()
                    .enumerate()
                    .filter_map(|(pos, st)| match st {
                        Step::Match(i) => match &r.body[*i] {
                            Literal::Atom { atom, .. } if comp.contains(&atom.signature()) => Some(pos),
                            _ => None,
                        },
                        _ => None,
                    })
                    .collect();
                Prepared {
                    rule: r,
                    steps: plan.steps,
                    recursive,
                }
            })
            .collect();

        let mut first = true;
        loop {
            self.new_atoms = 0;
            for p in &prepared {
                if first {
                    let windows = vec![Window::Full; p.steps.len()];
                    self.ground_rule_with(p.rule, &p.steps, &windows)?;
                } else {
                    for (k, &pos) in p.recursive.iter().enumerate() {
                        let mut windows = vec![Window::Full; p.steps.len()];
                        for &earlier in &p.recursive[..k] {
                            windows[earlier] = Window::Old;
                        }
                        windows[pos] = Window::Delta;
                        self.ground_rule_with(p.rule, &p.steps, &windows)?;
                    }
                }
            }
            self.generation += 1;
            first = false;
            if self.new_atoms == 0 {
                return Ok(());
            }
        }
    }

    fn ground_rule_once(&mut self, r: &Rule) -> Result<(), GroundError> {
        let globals = r.classify_variables().global;
        let plan = plan_body(&r.body, &BTreeSet::new(), &globals);
        let windows = vec![Window::Full; plan.steps.len()];
        self.ground_rule_with(r, &plan.steps, &windows)
    }

    fn ground_rule_with(&mut self, r: &Rule, steps: &[Step], windows: &[Window]) -> Result<(), GroundError> {
        let frame = Frame {
            body: &r.body,
            steps,
            windows,
            span: r.span,
        };
        let mut leaf = |g: &mut Grounder<'_>, s: &Subst, slots: &Slots| g.emit_rule(r, s, slots);
        let mut slots = vec![None; r.body.len()];
        self.enumerate(&frame, 0, &Subst::new(), &mut slots, &mut leaf)
    }

    fn emit_rule(&mut self, r: &Rule, s: &Subst, slots: &Slots) -> Result<(), GroundError> {
        let body: Vec<GroundLiteral> = slots.iter().flatten().cloned().collect();
        let mut heads: Vec<Vec<GroundAtom>> = vec![Vec::new()];
        for a in &r.head {
            let mut choices: Vec<Vec<Value>> = vec![Vec::new()];
            for t in &a.args {
                let values = match t {
                    Term::Binary(BinOp::Range, lo, hi) => match eval_range(lo, hi, s, self.opts, r.span)? {
                        Some(vs) => vs,
                        None => {
                            self.undefined(r.span, a);
                            return Ok(());
                        }
                    },
                    _ => match eval(t, s, self.opts, r.span)? {
                        Some(v) => vec![v],
                        None => {
                            self.undefined(r.span, a);
                            return Ok(());
                        }
                    },
                };
                choices = choices
                    .into_iter()
                    .flat_map(|prefix| {
                        values.iter().map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v.clone());
                            p
                        })
                    })
                    .collect();
            }
            heads = heads
                .into_iter()
                .flat_map(|h| {
                    choices.iter().map(move |args| {
                        let mut h = h.clone();
                        h.push(GroundAtom {
                            negative: a.negative,
                            predicate: a.predicate.clone(),
                            args: args.clone(),
                        });
                        h
                    })
                })
                .collect();
        }
        for head in heads {
            let ids: Vec<AtomId> = head.into_iter().map(|a| self.table.intern(a)).collect();
            for &id in &ids {
                self.derive(id);
            }
            if ids.len() == 1 && body.is_empty() {
                self.state_mut(ids[0]).certain = true;
            }
            let rule = GroundRule {
                head: ids,
                body: body.clone(),
            };
            if self.seen_rules.insert(rule.clone()) {
                self.rules.push(rule);
            }
        }
        Ok(())
    }

    fn ground_weak(&mut self, w: &WeakConstraint) -> Result<(), GroundError> {
        let globals = w.classify_variables().global;
        let plan = plan_body(&w.body, &BTreeSet::new(), &globals);
        let windows = vec![Window::Full; plan.steps.len()];
        let frame = Frame {
            body: &w.body,
            steps: &plan.steps,
            windows: &windows,
            span: w.span,
        };
        let mut leaf = |g: &mut Grounder<'_>, s: &Subst, slots: &Slots| -> Result<(), GroundError> {
            let mut spec = Vec::with_capacity(w.terms.len() + 2);
            for t in [&w.weight, &w.level].into_iter().chain(&w.terms) {
                match eval(t, s, g.opts, w.span)? {
                    Some(v) => spec.push(v),
                    None => {
                        g.undefined(w.span, w);
                        return Ok(());
                    }
                }
            }
            let terms = spec.split_off(2);
            let level = match spec.pop() {
                Some(Value::Number(l)) => l,
                other => {
                    return Err(GroundError::WeakLevel {
                        span: w.span,
                        level: other.map(|v| v.to_string()).unwrap_or_default(),
                    })
                }
            };
            let weak = GroundWeak {
                body: slots.iter().flatten().cloned().collect(),
                weight: spec.pop().expect("weight"),
                level,
                terms,
            };
            if g.seen_weaks.insert(weak.clone()) {
                g.weaks.push(weak);
            }
            Ok(())
        };
        let mut slots = vec![None; w.body.len()];
        self.enumerate(&frame, 0, &Subst::new(), &mut slots, &mut leaf)
    }

    fn enumerate(
        &mut self,
        f: &Frame<'_>,
        k: usize,
        s: &Subst,
        slots: &mut Slots,
        leaf: &mut Leaf<'_>,
    ) -> Result<(), GroundError> {
        let Some(&step) = f.steps.get(k) else {
            return leaf(self, s, slots);
        };
        let span = f.span;
        match step {
            Step::Match(i) => {
                let Literal::Atom { atom, .. } = &f.body[i] else {
                    unreachable!()
                };
                let window = f.windows[k];
                let candidates: Vec<AtomId> = if atom.args.iter().all(|t| t.vars().iter().all(|v| s.contains_key(v))) {
                    match self.ground_atom(atom, s, span)? {
                        Some(ga) => self.table.get(&ga).into_iter().collect(),
                        None => return Ok(()),
                    }
                } else {
                    self.by_pred.get(&atom.signature()).cloned().unwrap_or_default()
                };
                for id in candidates {
                    if !self.in_window(id, window) {
                        continue;
                    }
                    let mut s2 = s.clone();
                    let mut ok = true;
                    for (t, v) in atom.args.iter().zip(&self.table.atom(id).args) {
                        if !match_term(t, v, &mut s2, self.opts, span)? {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        slots[i] = (!self.state(id).certain).then_some(GroundLiteral::Pos(id));
                        self.enumerate(f, k + 1, &s2, slots, leaf)?;
                    }
                }
                Ok(())
            }
            Step::Assign { lit, pattern_left } => {
                let Literal::Builtin(b) = &f.body[lit] else {
                    unreachable!()
                };
                let (pattern, source) = if pattern_left {
                    (&b.left, &b.right)
                } else {
                    (&b.right, &b.left)
                };
                let values = match source {
                    Term::Binary(BinOp::Range, lo, hi) => eval_range(lo, hi, s, self.opts, span)?,
                    t => eval(t, s, self.opts, span)?.map(|v| vec![v]),
                };
                let Some(values) = values else {
                    self.undefined(span, &f.body[lit]);
                    return Ok(());
                };
                slots[lit] = None;
                for v in values {
                    let mut s2 = s.clone();
                    if match_term(pattern, &v, &mut s2, self.opts, span)? {
                        self.enumerate(f, k + 1, &s2, slots, leaf)?;
                    }
                }
                Ok(())
            }
            Step::Call(i) => {
                let Literal::External { call, .. } = &f.body[i] else {
                    unreachable!()
                };
                let Some(out) = self.call(call, s, span)? else {
                    self.undefined(span, &f.body[i]);
                    return Ok(());
                };
                let mut s2 = s.clone();
                slots[i] = None;
                if match_term(&call.outputs[0], &out, &mut s2, self.opts, span)? {
                    self.enumerate(f, k + 1, &s2, slots, leaf)?;
                }
                Ok(())
            }
            Step::Test(i) => {
                if let Some(slot) = self.test(&f.body[i], s, span)? {
                    slots[i] = slot;
                    self.enumerate(f, k + 1, s, slots, leaf)?;
                }
                Ok(())
            }
            Step::Aggregate { lit, assign } => {
                let Literal::Aggregate { negated, atom } = &f.body[lit] else {
                    unreachable!()
                };
                let (fixed, open_elems) = self.instantiate_elements(atom, s, span)?;
                let fixed_tuples: BTreeSet<Vec<Value>> = fixed.iter().map(|e| e.tuple.clone()).collect();
                if assign {
                    let open_tuples: BTreeSet<Vec<Value>> = open_elems.iter().map(|e| e.tuple.clone()).collect();
                    let candidates = aggregate::reachable_values(atom.func, &fixed_tuples, &open_tuples);
                    let mut elements = fixed;
                    elements.extend(open_elems.iter().cloned());
                    for c in candidates {
                        let mut s2 = s.clone();
                        if !match_term(&atom.guard, &c, &mut s2, self.opts, span)? {
                            continue;
                        }
                        slots[lit] = (!open_elems.is_empty()).then(|| GroundLiteral::Aggregate {
                            negated: false,
                            agg: GroundAggregate {
                                func: atom.func,
                                elements: elements.clone(),
                                rel: Rel::Eq,
                                guard: c,
                            },
                        });
                        self.enumerate(f, k + 1, &s2, slots, leaf)?;
                    }
                    return Ok(());
                }
                let Some(guard) = eval(&atom.guard, s, self.opts, span)? else {
                    self.undefined(span, &f.body[lit]);
                    return Ok(());
                };
                if open_elems.is_empty() {
                    let value = aggregate::apply(atom.func, fixed_tuples.iter().map(Vec::as_slice));
                    if value.satisfies(atom.rel, &guard) == *negated {
                        return Ok(());
                    }
                    slots[lit] = None;
                } else {
                    let mut elements = fixed;
                    elements.extend(open_elems);
                    slots[lit] = Some(GroundLiteral::Aggregate {
                        negated: *negated,
                        agg: GroundAggregate {
                            func: atom.func,
                            elements,
                            rel: atom.rel,
                            guard,
                        },
                    });
                }
                self.enumerate(f, k + 1, s, slots, leaf)
            }
        }
    }

    fn call(&mut self, call: &ExternalCall, s: &Subst, span: Span) -> Result<Option<Value>, GroundError> {
        let mut inputs = Vec::with_capacity(call.inputs.len());
        for t in &call.inputs {
            match eval(t, s, self.opts, span)? {
                Some(v) => inputs.push(v),
                None => return Ok(None),
            }
        }
        eval_external(&call.name, &inputs, span)
    }

    /// Evaluates a fully bound literal. `None`: the substitution fails;
    /// `Some(None)`: the literal is settled true; `Some(Some(l))`: kept.
    fn test(&mut self, lit: &Literal, s: &Subst, span: Span) -> Result<Option<Option<GroundLiteral>>, GroundError> {
        match lit {
            Literal::Atom { negated, atom } => {
                let Some(ga) = self.ground_atom(atom, s, span)? else {
                    return Ok(None);
                };
                let sig = ga.signature();
                let id = self.table.get(&ga);
                let st = id.map(|id| self.state(id)).unwrap_or_default();
                if !*negated {
                    // positive atoms are normally matched, but a fully bound one may land here
                    return Ok(match id {
                        Some(id) if st.stamp.is_some() => Some((!st.certain).then_some(GroundLiteral::Pos(id))),
                        _ => None,
                    });
                }
                if st.certain {
                    Ok(None)
                } else if st.stamp.is_some() || self.is_open(&sig) {
                    let id = id.unwrap_or_else(|| self.table.intern(ga));
                    Ok(Some(Some(GroundLiteral::Neg(id))))
                } else {
                    Ok(Some(None))
                }
            }
            Literal::Builtin(b) => {
                let member = |x: &Value, range: &Term, g: &mut Self| -> Result<Option<bool>, GroundError> {
                    let Term::Binary(BinOp::Range, lo, hi) = range else {
                        unreachable!()
                    };
                    Ok(eval_range(lo, hi, s, g.opts, span)?.map(|vs| vs.contains(x)))
                };
                let holds = match (&b.left, &b.right) {
                    (Term::Binary(BinOp::Range, ..), other) | (other, Term::Binary(BinOp::Range, ..)) => {
                        let range = if matches!(b.left, Term::Binary(BinOp::Range, ..)) {
                            &b.left
                        } else {
                            &b.right
                        };
                        match eval(other, s, self.opts, span)? {
                            Some(x) => member(&x, range, self)?,
                            None => None,
                        }
                    }
                    (l, r) => match (eval(l, s, self.opts, span)?, eval(r, s, self.opts, span)?) {
                        (Some(x), Some(y)) => Some(b.rel.holds(x.cmp(&y))),
                        _ => None,
                    },
                };
                match holds {
                    Some(true) => Ok(Some(None)),
                    Some(false) => Ok(None),
                    None => {
                        self.undefined(span, lit);
                        Ok(None)
                    }
                }
            }
            Literal::External { negated, call } => {
                let Some(out) = self.call(call, s, span)? else {
                    self.undefined(span, lit);
                    return Ok(None);
                };
                let Some(expected) = eval(&call.outputs[0], s, self.opts, span)? else {
                    self.undefined(span, lit);
                    return Ok(None);
                };
                Ok(((out == expected) != *negated).then_some(None))
            }
            Literal::Aggregate { .. } => unreachable!("aggregates are scheduled as aggregate steps"),
        }
    }

    /// inst(E) for every element: instances whose condition is settled true
    /// (`fixed`) and those still depending on open atoms.
    fn instantiate_elements(
        &mut self,
        atom: &AggregateAtom,
        s: &Subst,
        span: Span,
    ) -> Result<(Vec<GroundElement>, Vec<GroundElement>), GroundError> {
        let mut seen = BTreeSet::new();
        let mut fixed = Vec::new();
        let mut open = Vec::new();
        let bound: BTreeSet<String> = s.keys().cloned().collect();
        for e in &atom.elements {
            let plan = plan_body(&e.condition, &bound, &BTreeSet::new());
            let windows = vec![Window::Full; plan.steps.len()];
            let frame = Frame {
                body: &e.condition,
                steps: &plan.steps,
                windows: &windows,
                span,
            };
            let mut found = Vec::new();
            let mut leaf = |g: &mut Grounder<'_>, s: &Subst, slots: &Slots| -> Result<(), GroundError> {
                let mut tuple = Vec::with_capacity(e.terms.len());
                for t in &e.terms {
                    match eval(t, s, g.opts, span)? {
                        Some(v) => tuple.push(v),
                        None => {
                            g.undefined(span, t);
                            return Ok(());
                        }
                    }
                }
                found.push(GroundElement {
                    tuple,
                    condition: slots.iter().flatten().cloned().collect(),
                });
                Ok(())
            };
            let mut slots = vec![None; e.condition.len()];
            self.enumerate(&frame, 0, s, &mut slots, &mut leaf)?;
            for el in found {
                if seen.insert(el.clone()) {
                    if el.condition.is_empty() {
                        fixed.push(el);
                    } else {
                        open.push(el);
                    }
                }
            }
        }
        Ok((fixed, open))
    }

    fn finish(self) -> GroundProgram {
        let certain = self
            .table
            .iter()
            .filter(|(id, _)| self.state(*id).certain)
            .map(|(id, _)| id)
            .collect();
        finalize::finalize(self.table, self.rules, self.weaks, certain, self.warnings)
    }
}

impl GroundProgram {
    /// The ground atom behind `id`.
    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        self.atoms.atom(id)
    }

    /// Atom ids that are neither facts nor settled false.
    pub fn open_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.atoms
            .iter()
            .map(|(id, _)| id)
            .filter(|id| !self.facts.contains(id))
    }
}
