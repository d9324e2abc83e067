//! Recursive-descent parser for ASP-Core-2 with rational terms.
//!
//! Operator precedence, tightest first: unary minus, `* / \`, `+ -`, `..`.
//! A fraction `p/q` is ordinary division of integer literals; standardization
//! folds it to a rational constant once parsing is done. Decimal literals are
//! converted right away with the configured number of digits.

mod lexer;
mod safety;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

pub use lexer::{tokenize, Tok, Token};
pub use safety::{check_safety, SafetyViolation};

use crate::ast::*;
use crate::builtins;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Decimal places kept for literals like `0.1234567`; at most 6.
    pub decimal_digits: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            decimal_digits: rational::DEFAULT_DECIMAL_DIGITS,
        }
    }
}

/// Parses a single source text.
pub fn parse_program(text: &str, opts: &ParseOptions) -> Result<SourceProgram, ParseError> {
    parse_sources(&[("<input>", text)], opts)
}

/// Parses several named sources as one program, in order.
pub fn parse_sources(sources: &[(&str, &str)], opts: &ParseOptions) -> Result<SourceProgram, ParseError> {
    if opts.decimal_digits > rational::MAX_DECIMAL_DIGITS {
        return Err(ParseError {
            span: Span::default(),
            message: format!(
                "decimal digits must be at most {}, got {}",
                rational::MAX_DECIMAL_DIGITS,
                opts.decimal_digits
            ),
        });
    }
    let mut program = SourceProgram::default();
    let mut fresh = 0usize;
    for (idx, (name, text)) in sources.iter().enumerate() {
        program.sources.push(name.to_string());
        let tokens = tokenize(text, idx)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            opts: *opts,
            fresh: &mut fresh,
        };
        parser.program(&mut program)?;
    }
    Ok(program)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    opts: ParseOptions,
    fresh: &'a mut usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn fail<T>(&self, span: Span, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            span,
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn program(&mut self, out: &mut SourceProgram) -> PResult<()> {
        while *self.peek() != Tok::Eof {
            let span = self.span();
            match self.peek() {
                Tok::WeakIf => {
                    self.next();
                    let weak = self.weak_constraint(span)?;
                    out.weaks.push(weak.standardize());
                }
                Tok::If => {
                    self.next();
                    let body = if *self.peek() == Tok::Dot {
                        vec![]
                    } else {
                        self.body(&[Tok::Dot])?
                    };
                    self.expect(Tok::Dot)?;
                    let rule = Rule {
                        head: vec![],
                        body,
                        span,
                    };
                    self.check_ranges(&rule)?;
                    out.rules.push(rule.standardize());
                }
                _ => {
                    let rule = self.rule(span)?;
                    self.check_ranges(&rule)?;
                    out.rules.push(rule.standardize());
                }
            }
        }
        Ok(())
    }

    fn rule(&mut self, span: Span) -> PResult<Rule> {
        let mut head = vec![self.classical_atom()?];
        while self.eat(&Tok::Bar) {
            head.push(self.classical_atom()?);
        }
        let body = if self.eat(&Tok::If) {
            if *self.peek() == Tok::Dot {
                vec![]
            } else {
                self.body(&[Tok::Dot])?
            }
        } else {
            vec![]
        };
        self.expect(Tok::Dot)?;
        Ok(Rule { head, body, span })
    }

    fn weak_constraint(&mut self, span: Span) -> PResult<WeakConstraint> {
        let body = if *self.peek() == Tok::Dot {
            vec![]
        } else {
            self.body(&[Tok::Dot])?
        };
        self.expect(Tok::Dot)?;
        self.expect(Tok::LBracket)?;
        let weight = self.term()?;
        let level = if self.eat(&Tok::At) { self.term()? } else { Term::int(0) };
        let mut terms = vec![];
        while self.eat(&Tok::Comma) {
            terms.push(self.term()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(WeakConstraint {
            body,
            weight,
            level,
            terms,
            span,
        })
    }

    fn body(&mut self, terminators: &[Tok]) -> PResult<Vec<Literal>> {
        let mut lits = vec![];
        loop {
            self.literal(true, &mut lits)?;
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if !terminators.contains(self.peek()) {
            return self.error("`,` or end of body");
        }
        Ok(lits)
    }

    /// Parses one literal, pushing it (or two, for a doubly guarded aggregate).
    fn literal(&mut self, allow_aggregate: bool, out: &mut Vec<Literal>) -> PResult<()> {
        let start = self.span();
        let negated = self.eat(&Tok::Not);
        match self.peek().clone() {
            Tok::Aggregate(func) if allow_aggregate => {
                self.next();
                let elements = self.aggregate_elements()?;
                let Some((rel, guard)) = self.opt_guard()? else {
                    return self.fail(start, "aggregate needs a comparison guard");
                };
                out.push(Literal::Aggregate {
                    negated,
                    atom: AggregateAtom {
                        func,
                        elements,
                        rel,
                        guard,
                    },
                });
                Ok(())
            }
            Tok::Aggregate(_) => self.fail(start, "aggregates cannot be nested"),
            Tok::Amp => {
                self.next();
                let call = self.external()?;
                out.push(Literal::External { negated, call });
                Ok(())
            }
            _ => {
                let term = self.term()?;
                if let Tok::Rel(rel) = *self.peek() {
                    self.next();
                    if let Tok::Aggregate(func) = *self.peek() {
                        if !allow_aggregate {
                            return self.fail(start, "aggregates cannot be nested");
                        }
                        self.next();
                        let elements = self.aggregate_elements()?;
                        let left = AggregateAtom {
                            func,
                            elements,
                            rel: rel.flip(),
                            guard: term,
                        };
                        match self.opt_guard()? {
                            None => out.push(Literal::Aggregate { negated, atom: left }),
                            Some(_) if negated => {
                                return self.fail(start, "a negated aggregate may have only one guard")
                            }
                            Some((rel2, guard2)) => {
                                let right = AggregateAtom {
                                    rel: rel2,
                                    guard: guard2,
                                    ..left.clone()
                                };
                                out.push(Literal::Aggregate { negated, atom: left });
                                out.push(Literal::Aggregate { negated, atom: right });
                            }
                        }
                        return Ok(());
                    }
                    let right = self.term()?;
                    if negated {
                        return self.fail(start, "`not` cannot precede a comparison");
                    }
                    out.push(Literal::Builtin(BuiltinAtom { rel, left: term, right }));
                    Ok(())
                } else {
                    let atom = self.term_to_atom(term, start)?;
                    out.push(Literal::Atom { negated, atom });
                    Ok(())
                }
            }
        }
    }

    fn opt_guard(&mut self) -> PResult<Option<(Rel, Term)>> {
        if let Tok::Rel(rel) = *self.peek() {
            self.next();
            Ok(Some((rel, self.term()?)))
        } else {
            Ok(None)
        }
    }

    fn aggregate_elements(&mut self) -> PResult<Vec<AggregateElement>> {
        self.expect(Tok::LBrace)?;
        let mut elements = vec![];
        if self.eat(&Tok::RBrace) {
            return Ok(elements);
        }
        loop {
            let mut terms = vec![];
            if !matches!(self.peek(), Tok::Colon | Tok::Semi | Tok::RBrace) {
                terms.push(self.term()?);
                while self.eat(&Tok::Comma) {
                    terms.push(self.term()?);
                }
            }
            let mut condition = vec![];
            if self.eat(&Tok::Colon) {
                loop {
                    self.literal(false, &mut condition)?;
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            elements.push(AggregateElement { terms, condition });
            if self.eat(&Tok::RBrace) {
                return Ok(elements);
            }
            if !self.eat(&Tok::Semi) {
                return self.error("`;` or `}`");
            }
        }
    }

    fn external(&mut self) -> PResult<ExternalCall> {
        let span = self.span();
        let Tok::Ident(name) = self.next().tok else {
            return self.fail(span, "expected function name after `&`");
        };
        let Some(builtin) = builtins::lookup(&name) else {
            return self.fail(span, format!("unknown external function `&{name}`"));
        };
        self.expect(Tok::LParen)?;
        let mut inputs = vec![];
        if !matches!(self.peek(), Tok::Semi | Tok::RParen) {
            inputs.push(self.term()?);
            while self.eat(&Tok::Comma) {
                inputs.push(self.term()?);
            }
        }
        let mut outputs = vec![];
        if self.eat(&Tok::Semi) && *self.peek() != Tok::RParen {
            outputs.push(self.term()?);
            while self.eat(&Tok::Comma) {
                outputs.push(self.term()?);
            }
        }
        self.expect(Tok::RParen)?;
        if inputs.len() != builtin.inputs || outputs.len() != builtin.outputs {
            return self.fail(
                span,
                format!(
                    "`&{name}` takes {} input(s) and {} output(s), got {} and {}",
                    builtin.inputs,
                    builtin.outputs,
                    inputs.len(),
                    outputs.len()
                ),
            );
        }
        if let Some(bad) = outputs.iter().find(|t| !matches!(t, Term::Var(_))) {
            return self.fail(span, format!("output of `&{name}` must be a variable, found `{bad}`"));
        }
        Ok(ExternalCall { name, inputs, outputs })
    }

    fn classical_atom(&mut self) -> PResult<ClassicalAtom> {
        let span = self.span();
        let term = self.term()?;
        self.term_to_atom(term, span)
    }

    fn term_to_atom(&self, term: Term, span: Span) -> PResult<ClassicalAtom> {
        let (negative, inner) = match term {
            Term::Neg(inner) => (true, *inner),
            other => (false, other),
        };
        match inner {
            Term::Symbol(predicate) => Ok(ClassicalAtom {
                negative,
                predicate,
                args: vec![],
            }),
            Term::Func(predicate, args) => Ok(ClassicalAtom {
                negative,
                predicate,
                args,
            }),
            other => self.fail(span, format!("expected an atom, found term `{other}`")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let left = self.additive()?;
        if self.eat(&Tok::DotDot) {
            let right = self.additive()?;
            return Ok(Term::binary(BinOp::Range, left, right));
        }
        Ok(left)
    }

    fn additive(&mut self) -> PResult<Term> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            self.next();
            let right = self.multiplicative()?;
            left = Term::binary(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> PResult<Term> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Backslash => BinOp::Mod,
                _ => return Ok(left),
            };
            self.next();
            let right = self.unary()?;
            left = Term::binary(op, left, right);
        }
    }

    fn unary(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            return Ok(Term::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.next();
                let value = BigInt::parse_bytes(digits.as_bytes(), 10).expect("lexer yields digits");
                Ok(Term::Number(Rational::from_integer(value)))
            }
            Tok::Decimal(text) => {
                self.next();
                match rational::from_decimal(&text, self.opts.decimal_digits) {
                    Ok(r) => Ok(Term::Number(r)),
                    Err(e) => self.fail(span, e.to_string()),
                }
            }
            Tok::Str(s) => {
                self.next();
                Ok(Term::Str(s))
            }
            Tok::Var(v) => {
                self.next();
                Ok(Term::Var(v))
            }
            Tok::Anonymous => {
                self.next();
                let name = format!("_V{}", *self.fresh);
                *self.fresh += 1;
                Ok(Term::Var(name))
            }
            Tok::Ident(name) => {
                self.next();
                if *self.peek() == Tok::LParen && *self.peek_at(1) != Tok::RParen {
                    self.next();
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Term::Func(name, args))
                } else if *self.peek() == Tok::LParen {
                    self.fail(span, "functional terms need at least one argument")
                } else {
                    Ok(Term::Symbol(name))
                }
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.error("a term"),
        }
    }

    /// Ranges may only form a whole side of `=` or an argument of a sole head atom.
    fn check_ranges(&self, rule: &Rule) -> PResult<()> {
        let misplaced = |t: &Term| match t {
            Term::Binary(BinOp::Range, l, r) => l.contains_range() || r.contains_range(),
            other => other.contains_range(),
        };
        for (i, atom) in rule.head.iter().enumerate() {
            let has = atom.args.iter().any(Term::contains_range);
            if has && (rule.head.len() > 1 || atom.args.iter().any(&misplaced)) {
                return self.fail(rule.span, format!("misplaced interval in head atom {}", i + 1));
            }
        }
        fn check_lits(lits: &[Literal], misplaced: &dyn Fn(&Term) -> bool) -> bool {
            lits.iter().all(|l| match l {
                Literal::Atom { atom, .. } => !atom.args.iter().any(Term::contains_range),
                Literal::Builtin(b) if b.rel == Rel::Eq => !misplaced(&b.left) && !misplaced(&b.right),
                Literal::Builtin(b) => !b.left.contains_range() && !b.right.contains_range(),
                Literal::External { call, .. } => !call.inputs.iter().chain(&call.outputs).any(Term::contains_range),
                Literal::Aggregate { atom, .. } => {
                    !atom.guard.contains_range()
                        && atom
                            .elements
                            .iter()
                            .all(|e| !e.terms.iter().any(Term::contains_range) && check_lits(&e.condition, misplaced))
                }
            })
        }
        if !check_lits(&rule.body, &misplaced) {
            return self.fail(
                rule.span,
                "intervals are only allowed as one side of `=` or in a head atom",
            );
        }
        Ok(())
    }
}
