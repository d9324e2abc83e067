//! Safety check: every variable must be bound by positive atoms, `=` or
//! an external call output, directly or through a chain of such bindings.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Literal, SourceProgram, Span};
use crate::plan::plan_body;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyViolation {
    pub span: Span,
    pub variable: String,
    pub context: &'static str,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: unsafe variable `{}` in {}",
            self.span.line, self.span.column, self.variable, self.context
        )
    }
}

fn check_statement(
    span: Span,
    outer: &BTreeSet<String>,
    body: &[Literal],
    globals: &BTreeSet<String>,
    out: &mut Vec<SafetyViolation>,
) {
    let plan = plan_body(body, &BTreeSet::new(), globals);
    let mut unsafe_vars = BTreeMap::new();
    for v in outer.iter().filter(|v| !plan.bound.contains(*v)) {
        unsafe_vars.entry(v.clone()).or_insert("head or weak specification");
    }
    for &i in &plan.stuck {
        let mut vars = BTreeSet::new();
        body[i].collect_global_vars(&mut vars);
        for v in vars.into_iter().filter(|v| !plan.bound.contains(v)) {
            unsafe_vars.entry(v).or_insert("body");
        }
    }
    for lit in body {
        let Literal::Aggregate { atom, .. } = lit else { continue };
        for e in &atom.elements {
            let inner = plan_body(&e.condition, &plan.bound, &BTreeSet::new());
            let mut vars = BTreeSet::new();
            e.collect_vars(&mut vars);
            for v in vars.into_iter().filter(|v| !inner.bound.contains(v)) {
                unsafe_vars.entry(v).or_insert("aggregate element");
            }
        }
    }
    out.extend(unsafe_vars.into_iter().map(|(variable, context)| SafetyViolation {
        span,
        variable,
        context,
    }));
}

/// Returns all safety violations, in statement order.
pub fn check_safety(p: &SourceProgram) -> Vec<SafetyViolation> {
    let mut out = Vec::new();
    for r in &p.rules {
        let classes = r.classify_variables();
        let mut head = BTreeSet::new();
        for a in &r.head {
            a.args.iter().for_each(|t| t.collect_vars(&mut head));
        }
        check_statement(r.span, &head, &r.body, &classes.global, &mut out);
    }
    for w in &p.weaks {
        let classes = w.classify_variables();
        let mut spec = w.weight.vars();
        spec.extend(w.level.vars());
        w.terms.iter().for_each(|t| t.collect_vars(&mut spec));
        check_statement(w.span, &spec, &w.body, &classes.global, &mut out);
    }
    out
}
