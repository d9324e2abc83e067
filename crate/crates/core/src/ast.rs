//! Syntax objects, ground values and their total order.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AstError {
    #[error("internal error: term `{0}` is not a ground evaluated term")]
    NotEvaluated(String),
}

/// Binary arithmetic operators. `Range` and `Mod` are integer-only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Range,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "\\",
            BinOp::Range => "..",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Number(Rational),
    Symbol(String),
    Str(String),
    Var(String),
    /// Only present before the parser freshens it.
    Anonymous,
    Func(String, Vec<Term>),
    Neg(Box<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn int(i: i64) -> Term {
        Term::Number(Rational::from_integer(i))
    }

    pub fn binary(op: BinOp, l: Term, r: Term) -> Term {
        Term::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) | Term::Anonymous => false,
            Term::Number(_) | Term::Symbol(_) | Term::Str(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
            Term::Neg(t) => t.is_ground(),
            Term::Binary(_, l, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self, Term::Neg(_) | Term::Binary(..))
    }

    pub fn contains_range(&self) -> bool {
        match self {
            Term::Binary(BinOp::Range, ..) => true,
            Term::Binary(_, l, r) => l.contains_range() || r.contains_range(),
            Term::Neg(t) => t.contains_range(),
            Term::Func(_, args) => args.iter().any(Term::contains_range),
            _ => false,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Neg(t) => t.collect_vars(out),
            Term::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Variables that matching against a ground value can bind: those not
    /// under an arithmetic operator.
    pub fn collect_matchable_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_matchable_vars(out)),
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Converts a ground, arithmetic-free term to a value.
    pub fn to_value(&self) -> Result<Value, AstError> {
        match self {
            Term::Number(r) => Ok(Value::Number(r.clone())),
            Term::Symbol(s) => Ok(Value::Symbol(s.clone())),
            Term::Str(s) => Ok(Value::Str(s.clone())),
            Term::Func(f, args) => Ok(Value::Func(
                f.clone(),
                args.iter().map(Term::to_value).collect::<Result<_, _>>()?,
            )),
            other => Err(AstError::NotEvaluated(alloc::format!("{other}"))),
        }
    }

    /// Replaces rational literals written as `p/q` or `-x` by their
    /// standard-form value. Idempotent.
    pub fn standardize(&self) -> Term {
        match self {
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(Term::standardize).collect()),
            Term::Neg(t) => match t.standardize() {
                Term::Number(r) => Term::Number(-&r),
                other => Term::Neg(Box::new(other)),
            },
            Term::Binary(op, l, r) => {
                let (l, r) = (l.standardize(), r.standardize());
                if *op == BinOp::Div {
                    if let (Term::Number(p), Term::Number(q)) = (&l, &r) {
                        if p.is_integer() && q.is_integer() && !q.is_zero() {
                            if let Ok(v) = p.div(q) {
                                return Term::Number(v);
                            }
                        }
                    }
                }
                Term::binary(*op, l, r)
            }
            other => other.clone(),
        }
    }
}

impl From<Value> for Term {
    fn from(v: Value) -> Term {
        match v {
            Value::Number(r) => Term::Number(r),
            Value::Symbol(s) => Term::Symbol(s),
            Value::Str(s) => Term::Str(s),
            Value::Func(f, args) => Term::Func(f, args.into_iter().map(Term::from).collect()),
        }
    }
}

/// A ground, arithmetically evaluated term: an element of the Herbrand universe.
///
/// `Ord` is the language's total order: rationals, then symbolic constants,
/// then strings, then functional terms (by arity, functor, arguments).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Number(Rational),
    Symbol(String),
    Str(String),
    Func(String, Vec<Value>),
}

impl Value {
    fn rank(&self) -> u8 {
        match self {
            Value::Number(_) => 0,
            Value::Symbol(_) => 1,
            Value::Str(_) => 2,
            Value::Func(..) => 3,
        }
    }

    pub fn as_number(&self) -> Option<&Rational> {
        match self {
            Value::Number(r) => Some(r),
            _ => None,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a.cmp(b),
            (Value::Symbol(a), Value::Symbol(b)) | (Value::Str(a), Value::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            (Value::Func(f, xs), Value::Func(g, ys)) => xs
                .len()
                .cmp(&ys.len())
                .then_with(|| f.as_bytes().cmp(g.as_bytes()))
                .then_with(|| xs.cmp(ys)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on ground evaluated terms.
pub fn term_order(t: &Term, u: &Term) -> Result<Ordering, AstError> {
    Ok(t.to_value()?.cmp(&u.to_value()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
}

impl Rel {
    /// Whether `l rel r` holds given `l.cmp(r)`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Rel::Lt => ord == Ordering::Less,
            Rel::Le => ord != Ordering::Greater,
            Rel::Eq => ord == Ordering::Equal,
            Rel::Ne => ord != Ordering::Equal,
            Rel::Gt => ord == Ordering::Greater,
            Rel::Ge => ord != Ordering::Less,
        }
    }

    /// The relation with operands swapped: `a < b` iff `b > a`.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggFn {
    Count,
    Sum,
    Max,
    Min,
}

impl AggFn {
    pub fn name(self) -> &'static str {
        match self {
            AggFn::Count => "#count",
            AggFn::Sum => "#sum",
            AggFn::Max => "#max",
            AggFn::Min => "#min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalAtom {
    /// Strong negation `-p(...)`.
    pub negative: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

impl ClassicalAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        ClassicalAtom {
            negative: false,
            predicate: predicate.into(),
            args,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature {
            negative: self.negative,
            name: self.predicate.clone(),
            arity: self.args.len(),
        }
    }
}

/// Predicate identity; `-p/n` and `p/n` are distinct predicates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub negative: bool,
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}/{}",
            if self.negative { "-" } else { "" },
            self.name,
            self.arity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuiltinAtom {
    pub rel: Rel,
    pub left: Term,
    pub right: Term,
}

/// `&name(inputs; outputs)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExternalCall {
    pub name: String,
    pub inputs: Vec<Term>,
    pub outputs: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateElement {
    pub terms: Vec<Term>,
    pub condition: Vec<Literal>,
}

/// `#fn{elements} rel guard`; a left guard is stored flipped on the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateAtom {
    pub func: AggFn,
    pub elements: Vec<AggregateElement>,
    pub rel: Rel,
    pub guard: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Atom { negated: bool, atom: ClassicalAtom },
    Builtin(BuiltinAtom),
    External { negated: bool, call: ExternalCall },
    Aggregate { negated: bool, atom: AggregateAtom },
}

impl Literal {
    pub fn pos(atom: ClassicalAtom) -> Literal {
        Literal::Atom { negated: false, atom }
    }

    pub fn is_positive_atom(&self) -> bool {
        matches!(self, Literal::Atom { negated: false, .. })
    }

    /// Variables outside aggregate elements.
    pub fn collect_global_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Literal::Atom { atom, .. } => atom.args.iter().for_each(|t| t.collect_vars(out)),
            Literal::Builtin(b) => {
                b.left.collect_vars(out);
                b.right.collect_vars(out);
            }
            Literal::External { call, .. } => call
                .inputs
                .iter()
                .chain(&call.outputs)
                .for_each(|t| t.collect_vars(out)),
            Literal::Aggregate { atom, .. } => atom.guard.collect_vars(out),
        }
    }

    pub fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        self.collect_global_vars(out);
        if let Literal::Aggregate { atom, .. } = self {
            for e in &atom.elements {
                e.collect_vars(out);
            }
        }
    }

    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Literal {
        match self {
            Literal::Atom { negated, atom } => Literal::Atom {
                negated: *negated,
                atom: atom.map_terms(f),
            },
            Literal::Builtin(b) => Literal::Builtin(BuiltinAtom {
                rel: b.rel,
                left: f(&b.left),
                right: f(&b.right),
            }),
            Literal::External { negated, call } => Literal::External {
                negated: *negated,
                call: ExternalCall {
                    name: call.name.clone(),
                    inputs: call.inputs.iter().map(f).collect(),
                    outputs: call.outputs.iter().map(f).collect(),
                },
            },
            Literal::Aggregate { negated, atom } => Literal::Aggregate {
                negated: *negated,
                atom: AggregateAtom {
                    func: atom.func,
                    elements: atom
                        .elements
                        .iter()
                        .map(|e| AggregateElement {
                            terms: e.terms.iter().map(f).collect(),
                            condition: e.condition.iter().map(|l| l.map_terms(f)).collect(),
                        })
                        .collect(),
                    rel: atom.rel,
                    guard: f(&atom.guard),
                },
            },
        }
    }
}

impl AggregateElement {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.terms.iter().for_each(|t| t.collect_vars(out));
        self.condition.iter().for_each(|l| l.collect_all_vars(out));
    }
}

impl ClassicalAtom {
    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> ClassicalAtom {
        ClassicalAtom {
            negative: self.negative,
            predicate: self.predicate.clone(),
            args: self.args.iter().map(f).collect(),
        }
    }
}

/// Statement position: input source index, 1-based line and column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub source: usize,
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Vec<ClassicalAtom>,
    pub body: Vec<Literal>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakConstraint {
    pub body: Vec<Literal>,
    pub weight: Term,
    pub level: Term,
    pub terms: Vec<Term>,
    pub span: Span,
}

/// Global variables and, per aggregate element, its local variables.
///
/// Elements are keyed by (body literal index, element index).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableClasses {
    pub global: BTreeSet<String>,
    pub local: BTreeMap<(usize, usize), BTreeSet<String>>,
}

fn classify(body: &[Literal], mut global: BTreeSet<String>) -> VariableClasses {
    for lit in body {
        lit.collect_global_vars(&mut global);
    }
    let mut local = BTreeMap::new();
    for (li, lit) in body.iter().enumerate() {
        if let Literal::Aggregate { atom, .. } = lit {
            for (ei, e) in atom.elements.iter().enumerate() {
                let mut vars = BTreeSet::new();
                e.collect_vars(&mut vars);
                let own: BTreeSet<String> = vars.difference(&global).cloned().collect();
                local.insert((li, ei), own);
            }
        }
    }
    VariableClasses { global, local }
}

impl Rule {
    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && self.head.len() == 1 && self.head[0].args.iter().all(Term::is_ground)
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn classify_variables(&self) -> VariableClasses {
        let mut head_vars = BTreeSet::new();
        for a in &self.head {
            a.args.iter().for_each(|t| t.collect_vars(&mut head_vars));
        }
        classify(&self.body, head_vars)
    }

    pub fn standardize(&self) -> Rule {
        Rule {
            head: self.head.iter().map(|a| a.map_terms(&Term::standardize)).collect(),
            body: self.body.iter().map(|l| l.map_terms(&Term::standardize)).collect(),
            span: self.span,
        }
    }
}

impl WeakConstraint {
    pub fn classify_variables(&self) -> VariableClasses {
        let mut spec_vars = BTreeSet::new();
        self.weight.collect_vars(&mut spec_vars);
        self.level.collect_vars(&mut spec_vars);
        self.terms.iter().for_each(|t| t.collect_vars(&mut spec_vars));
        classify(&self.body, spec_vars)
    }

    pub fn standardize(&self) -> WeakConstraint {
        WeakConstraint {
            body: self.body.iter().map(|l| l.map_terms(&Term::standardize)).collect(),
            weight: self.weight.standardize(),
            level: self.level.standardize(),
            terms: self.terms.iter().map(Term::standardize).collect(),
            span: self.span,
        }
    }
}

impl ClassicalAtom {
    pub fn standardize(&self) -> ClassicalAtom {
        self.map_terms(&Term::standardize)
    }
}

/// A parsed program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub rules: Vec<Rule>,
    pub weaks: Vec<WeakConstraint>,
    /// Source names, indexed by `Span::source`.
    pub sources: Vec<String>,
}

// ---------------------------------------------------------------------------
// Rendering

/// How rationals are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrintMode {
    /// `p/q`, integers bare.
    #[default]
    Fraction,
    /// Rounded decimal with at most the given number of places.
    Decimal(u32),
}

/// Renders a rational per the print mode.
pub fn write_rational(f: &mut dyn fmt::Write, r: &Rational, mode: PrintMode) -> fmt::Result {
    match mode {
        PrintMode::Decimal(digits) if !r.is_integer() => f.write_str(&r.to_decimal_string(digits)),
        _ => write!(f, "{r}"),
    }
}

fn write_quoted(f: &mut dyn fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        if c == '"' {
            f.write_str("\\\"")?;
        } else {
            f.write_char(c)?;
        }
    }
    f.write_char('"')
}

fn write_list<T>(
    f: &mut dyn fmt::Write,
    items: &[T],
    sep: &str,
    mut each: impl FnMut(&mut dyn fmt::Write, &T) -> fmt::Result,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        each(f, item)?;
    }
    Ok(())
}

pub fn write_value(f: &mut dyn fmt::Write, v: &Value, mode: PrintMode) -> fmt::Result {
    match v {
        Value::Number(r) => write_rational(f, r, mode),
        Value::Symbol(s) => f.write_str(s),
        Value::Str(s) => write_quoted(f, s),
        Value::Func(name, args) => {
            f.write_str(name)?;
            f.write_char('(')?;
            write_list(f, args, ",", |f, a| write_value(f, a, mode))?;
            f.write_char(')')
        }
    }
}

fn needs_parens(t: &Term) -> bool {
    match t {
        Term::Binary(..) | Term::Neg(_) => true,
        Term::Number(r) => !r.is_integer() || r.is_negative(),
        _ => false,
    }
}

pub fn write_term(f: &mut dyn fmt::Write, t: &Term, mode: PrintMode) -> fmt::Result {
    let operand = |f: &mut dyn fmt::Write, t: &Term| -> fmt::Result {
        if needs_parens(t) {
            f.write_char('(')?;
            write_term(f, t, mode)?;
            f.write_char(')')
        } else {
            write_term(f, t, mode)
        }
    };
    match t {
        Term::Number(r) => write_rational(f, r, mode),
        Term::Symbol(s) | Term::Var(s) => f.write_str(s),
        Term::Str(s) => write_quoted(f, s),
        Term::Anonymous => f.write_char('_'),
        Term::Func(name, args) => {
            f.write_str(name)?;
            f.write_char('(')?;
            write_list(f, args, ",", |f, a| write_term(f, a, mode))?;
            f.write_char(')')
        }
        Term::Neg(inner) => {
            f.write_char('-')?;
            operand(f, inner)
        }
        Term::Binary(op, l, r) => {
            operand(f, l)?;
            f.write_str(op.symbol())?;
            operand(f, r)
        }
    }
}

pub fn write_atom(f: &mut dyn fmt::Write, a: &ClassicalAtom, mode: PrintMode) -> fmt::Result {
    if a.negative {
        f.write_char('-')?;
    }
    f.write_str(&a.predicate)?;
    if !a.args.is_empty() {
        f.write_char('(')?;
        write_list(f, &a.args, ",", |f, t| write_term(f, t, mode))?;
        f.write_char(')')?;
    }
    Ok(())
}

pub fn write_literal(f: &mut dyn fmt::Write, l: &Literal, mode: PrintMode) -> fmt::Result {
    let not = |f: &mut dyn fmt::Write, negated: bool| if negated { f.write_str("not ") } else { Ok(()) };
    match l {
        Literal::Atom { negated, atom } => {
            not(f, *negated)?;
            write_atom(f, atom, mode)
        }
        Literal::Builtin(b) => {
            write_term(f, &b.left, mode)?;
            f.write_str(b.rel.symbol())?;
            write_term(f, &b.right, mode)
        }
        Literal::External { negated, call } => {
            not(f, *negated)?;
            write!(f, "&{}(", call.name)?;
            write_list(f, &call.inputs, ",", |f, t| write_term(f, t, mode))?;
            f.write_char(';')?;
            write_list(f, &call.outputs, ",", |f, t| write_term(f, t, mode))?;
            f.write_char(')')
        }
        Literal::Aggregate { negated, atom } => {
            not(f, *negated)?;
            f.write_str(atom.func.name())?;
            f.write_char('{')?;
            write_list(f, &atom.elements, ";", |f, e| {
                write_list(f, &e.terms, ",", |f, t| write_term(f, t, mode))?;
                if !e.condition.is_empty() {
                    f.write_char(':')?;
                    write_list(f, &e.condition, ",", |f, c| write_literal(f, c, mode))?;
                }
                Ok(())
            })?;
            f.write_char('}')?;
            f.write_str(atom.rel.symbol())?;
            write_term(f, &atom.guard, mode)
        }
    }
}

pub fn write_rule(f: &mut dyn fmt::Write, r: &Rule, mode: PrintMode) -> fmt::Result {
    write_list(f, &r.head, " | ", |f, a| write_atom(f, a, mode))?;
    if !r.body.is_empty() || r.head.is_empty() {
        f.write_str(if r.head.is_empty() { ":- " } else { " :- " })?;
        write_list(f, &r.body, ", ", |f, l| write_literal(f, l, mode))?;
    }
    f.write_char('.')
}

pub fn write_weak(f: &mut dyn fmt::Write, w: &WeakConstraint, mode: PrintMode) -> fmt::Result {
    f.write_str(":~ ")?;
    write_list(f, &w.body, ", ", |f, l| write_literal(f, l, mode))?;
    f.write_str(". [")?;
    write_term(f, &w.weight, mode)?;
    f.write_char('@')?;
    write_term(f, &w.level, mode)?;
    for t in &w.terms {
        f.write_char(',')?;
        write_term(f, t, mode)?;
    }
    f.write_char(']')
}

/// Adapter giving any renderer a `Display` impl.
pub struct Rendered<'a, T: ?Sized> {
    item: &'a T,
    mode: PrintMode,
}

pub trait Render {
    fn write_to(&self, f: &mut dyn fmt::Write, mode: PrintMode) -> fmt::Result;

    fn render(&self, mode: PrintMode) -> Rendered<'_, Self> {
        Rendered { item: self, mode }
    }
}

impl<T: Render + ?Sized> fmt::Display for Rendered<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.item.write_to(f, self.mode)
    }
}

macro_rules! render_impl {
    ($ty:ty, $func:ident) => {
        impl Render for $ty {
            fn write_to(&self, f: &mut dyn fmt::Write, mode: PrintMode) -> fmt::Result {
                $func(f, self, mode)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $func(f, self, PrintMode::Fraction)
            }
        }
    };
}

render_impl!(Value, write_value);
render_impl!(Term, write_term);
render_impl!(ClassicalAtom, write_atom);
render_impl!(Literal, write_literal);
render_impl!(Rule, write_rule);
render_impl!(WeakConstraint, write_weak);

impl Render for SourceProgram {
    fn write_to(&self, f: &mut dyn fmt::Write, mode: PrintMode) -> fmt::Result {
        for r in &self.rules {
            write_rule(f, r, mode)?;
            f.write_char('\n')?;
        }
        for w in &self.weaks {
            write_weak(f, w, mode)?;
            f.write_char('\n')?;
        }
        Ok(())
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_to(f, PrintMode::Fraction)
    }
}
