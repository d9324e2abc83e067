use std::path::Path;

use ratground_core::ast::{ClassicalAtom, Literal};
use ratground_core::emitter::{self, AuxAllocator};
use ratground_core::grounder::{eval_arith, ground_rule_as_is, AtomTable, GroundAtom, GroundOptions};
use ratground_core::parser::parse_program;

use super::read;

fn ground_atom(a: &ClassicalAtom) -> GroundAtom {
    let opts = GroundOptions::default();
    GroundAtom {
        negative: a.negative,
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| eval_arith(t, &opts).unwrap().unwrap()).collect(),
    }
}

/// Translates the single rule of `path` with ids assigned from 1 in the
/// order the atoms are listed: aggregate element atoms, then the head.
pub fn listing_with_listed_ids(path: &Path) -> String {
    let p = parse_program(&read(path), &Default::default()).unwrap();
    let rule = &p.rules[0];
    let mut table = AtomTable::with_first_id(1);
    for lit in &rule.body {
        if let Literal::Aggregate { atom, .. } = lit {
            for e in &atom.elements {
                for c in &e.condition {
                    if let Literal::Atom { atom, .. } = c {
                        table.intern(ground_atom(atom));
                    }
                }
            }
        }
    }
    for h in &rule.head {
        table.intern(ground_atom(h));
    }
    let ground = ground_rule_as_is(rule, &mut table, &GroundOptions::default())
        .unwrap()
        .unwrap();
    let mut aux = AuxAllocator::new(table.next_id());
    emitter::translate_rule(&ground, &mut aux)
        .iter()
        .map(|r| format!("{r}\n"))
        .collect()
}
