//! Arithmetic evaluation, external calls and term matching.
//!
//! `Ok(None)` means the substitution is not well-formed (division by zero,
//! arithmetic on a non-number, a fractional modulus operand). Callers skip
//! such substitutions. Errors are reserved for ill-typed intervals and calls.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{GroundError, GroundOptions};
use crate::ast::{BinOp, Span, Term, Value};
use crate::builtins;
use crate::rational::Rational;

pub(crate) type Subst = BTreeMap<String, Value>;

/// Evaluates a ground term with no variables.
pub fn eval_arith(t: &Term, opts: &GroundOptions) -> Result<Option<Value>, GroundError> {
    eval(t, &Subst::new(), opts, Span::default())
}

pub(crate) fn eval(t: &Term, s: &Subst, opts: &GroundOptions, span: Span) -> Result<Option<Value>, GroundError> {
    Ok(match t {
        Term::Number(r) => Some(Value::Number(r.clone())),
        Term::Symbol(x) => Some(Value::Symbol(x.clone())),
        Term::Str(x) => Some(Value::Str(x.clone())),
        Term::Var(v) => s.get(v).cloned(),
        Term::Anonymous => None,
        Term::Func(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match eval(a, s, opts, span)? {
                    Some(v) => vals.push(v),
                    None => return Ok(None),
                }
            }
            Some(Value::Func(f.clone(), vals))
        }
        Term::Neg(inner) => match eval(inner, s, opts, span)? {
            Some(Value::Number(r)) => Some(Value::Number(-&r)),
            _ => None,
        },
        Term::Binary(BinOp::Range, ..) => {
            return Err(GroundError::RangeType {
                span,
                message: format!("interval `{t}` used as a single value"),
            })
        }
        Term::Binary(op, l, r) => {
            let (Some(Value::Number(a)), Some(Value::Number(b))) = (eval(l, s, opts, span)?, eval(r, s, opts, span)?)
            else {
                return Ok(None);
            };
            let v = match op {
                BinOp::Add => Some(&a + &b),
                BinOp::Sub => Some(&a - &b),
                BinOp::Mul => Some(&a * &b),
                BinOp::Div if opts.integer_division && a.is_integer() && b.is_integer() => a.int_div(&b).ok(),
                BinOp::Div => a.div(&b).ok(),
                BinOp::Mod => a.modulo(&b).ok(),
                BinOp::Range => unreachable!(),
            };
            v.map(Value::Number)
        }
    })
}

/// Expands `l..r` to the integers between the bounds.
pub(crate) fn eval_range(
    l: &Term,
    r: &Term,
    s: &Subst,
    opts: &GroundOptions,
    span: Span,
) -> Result<Option<Vec<Value>>, GroundError> {
    let (Some(lo), Some(hi)) = (eval(l, s, opts, span)?, eval(r, s, opts, span)?) else {
        return Ok(None);
    };
    let bound = |v: &Value| -> Result<BigInt, GroundError> {
        match v {
            Value::Number(x) if x.is_integer() => Ok(x.numer().clone()),
            other => Err(GroundError::RangeType {
                span,
                message: format!("interval bound `{other}` is not an integer"),
            }),
        }
    };
    let (lo, hi) = (bound(&lo)?, bound(&hi)?);
    let mut out = Vec::new();
    if lo <= hi {
        let len = (&hi - &lo).to_usize().ok_or_else(|| GroundError::RangeType {
            span,
            message: format!("interval {lo}..{hi} is too large"),
        })?;
        let mut i = lo;
        for _ in 0..=len {
            out.push(Value::Number(Rational::from_integer(i.clone())));
            i += 1;
        }
    }
    Ok(Some(out))
}

/// Calls a registered function. Inputs must be rationals.
pub fn eval_external(name: &str, inputs: &[Value], span: Span) -> Result<Option<Value>, GroundError> {
    let builtin = builtins::lookup(name).ok_or_else(|| GroundError::ExternalCall {
        span,
        message: format!("unknown function `&{name}`"),
    })?;
    if inputs.len() != builtin.inputs {
        return Err(GroundError::ExternalCall {
            span,
            message: format!("`&{name}` expects {} input(s), got {}", builtin.inputs, inputs.len()),
        });
    }
    let mut args = Vec::with_capacity(inputs.len());
    for v in inputs {
        match v {
            Value::Number(r) => args.push(r.clone()),
            other => {
                return Err(GroundError::ExternalCall {
                    span,
                    message: format!("`&{name}` expects rational inputs, got `{other}`"),
                })
            }
        }
    }
    Ok((builtin.eval)(&args).map(Value::Number))
}

/// Matches `pattern` against `value`, extending `s`. Arithmetic subterms must
/// already be evaluable.
pub(crate) fn match_term(
    pattern: &Term,
    value: &Value,
    s: &mut Subst,
    opts: &GroundOptions,
    span: Span,
) -> Result<bool, GroundError> {
    match (pattern, value) {
        (Term::Var(v), _) => match s.get(v) {
            Some(bound) => Ok(bound == value),
            None => {
                s.insert(v.clone(), value.clone());
                Ok(true)
            }
        },
        (Term::Func(f, args), Value::Func(g, vals)) => {
            if f != g || args.len() != vals.len() {
                return Ok(false);
            }
            for (a, v) in args.iter().zip(vals) {
                if !match_term(a, v, s, opts, span)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Term::Func(..), _) => Ok(false),
        _ => Ok(eval(pattern, s, opts, span)?.as_ref() == Some(value)),
    }
}
