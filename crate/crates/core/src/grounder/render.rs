//! Text rendering of ground programs, one statement per line.

use core::fmt;

use super::{AtomTable, GroundAtom, GroundLiteral, GroundProgram};
use crate::ast::{write_value, PrintMode};

pub fn write_ground_atom(f: &mut dyn fmt::Write, a: &GroundAtom, mode: PrintMode) -> fmt::Result {
    if a.negative {
        f.write_char('-')?;
    }
    f.write_str(&a.predicate)?;
    if !a.args.is_empty() {
        f.write_char('(')?;
        for (i, v) in a.args.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write_value(f, v, mode)?;
        }
        f.write_char(')')?;
    }
    Ok(())
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

pub fn write_ground_literal(
    f: &mut dyn fmt::Write,
    l: &GroundLiteral,
    atoms: &AtomTable,
    mode: PrintMode,
) -> fmt::Result {
    match l {
        GroundLiteral::Pos(a) => write_ground_atom(f, atoms.atom(*a), mode),
        GroundLiteral::Neg(a) => {
            f.write_str("not ")?;
            write_ground_atom(f, atoms.atom(*a), mode)
        }
        GroundLiteral::Aggregate { negated, agg } => {
            if *negated {
                f.write_str("not ")?;
            }
            f.write_str(agg.func.name())?;
            f.write_char('{')?;
            write_list(f, &agg.elements, ";", |f, e| {
                write_list(f, &e.tuple, ",", |f, v| write_value(f, v, mode))?;
                if !e.condition.is_empty() {
                    f.write_char(':')?;
                    write_list(f, &e.condition, ",", |f, c| write_ground_literal(f, c, atoms, mode))?;
                }
                Ok(())
            })?;
            f.write_char('}')?;
            f.write_str(agg.rel.symbol())?;
            write_value(f, &agg.guard, mode)
        }
    }
}

/// Facts, then rules, then weak constraints, each as source syntax.
pub fn write_ground_program(f: &mut dyn fmt::Write, g: &GroundProgram, mode: PrintMode) -> fmt::Result {
    let atoms = &g.atoms;
    for &id in &g.facts {
        write_ground_atom(f, atoms.atom(id), mode)?;
        f.write_str(".\n")?;
    }
    for r in &g.rules {
        write_list(f, &r.head, " | ", |f, a| write_ground_atom(f, atoms.atom(*a), mode))?;
        if !r.body.is_empty() || r.head.is_empty() {
            f.write_str(if r.head.is_empty() { ":- " } else { " :- " })?;
            write_list(f, &r.body, ", ", |f, l| write_ground_literal(f, l, atoms, mode))?;
        }
        f.write_str(".\n")?;
    }
    for w in &g.weaks {
        f.write_str(":~ ")?;
        write_list(f, &w.body, ", ", |f, l| write_ground_literal(f, l, atoms, mode))?;
        f.write_str(". [")?;
        write_value(f, &w.weight, mode)?;
        f.write_char('@')?;
        crate::ast::write_rational(f, &w.level, mode)?;
        for t in &w.terms {
            f.write_char(',')?;
            write_value(f, t, mode)?;
        }
        f.write_str("]\n")?;
    }
    Ok(())
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ground_atom(f, self, PrintMode::Fraction)
    }
}
