//! Global simplification to a fixpoint, then dense renumbering.
//!
//! An atom in no rule head is false in every answer set; an atom derived by a
//! rule with an empty body is true in every answer set. Both facts let
//! literals and rules be removed, which may settle further atoms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{AtomId, AtomTable, GroundAggregate, GroundElement, GroundLiteral, GroundProgram, GroundRule, GroundWeak};
use crate::aggregate;

struct Known<'a> {
    certain: &'a BTreeSet<AtomId>,
    headed: &'a BTreeSet<AtomId>,
}

enum Simplified {
    True,
    False,
    Keep(GroundLiteral),
}

fn simplify_literal(lit: &GroundLiteral, k: &Known) -> Simplified {
    match lit {
        GroundLiteral::Pos(a) if k.certain.contains(a) => Simplified::True,
        GroundLiteral::Pos(a) if !k.headed.contains(a) => Simplified::False,
        GroundLiteral::Neg(a) if k.certain.contains(a) => Simplified::False,
        GroundLiteral::Neg(a) if !k.headed.contains(a) => Simplified::True,
        GroundLiteral::Aggregate { negated, agg } => {
            let mut elements = BTreeSet::new();
            let mut ordered = Vec::new();
            for e in &agg.elements {
                if let Some(condition) = simplify_body(&e.condition, k) {
                    let el = GroundElement {
                        tuple: e.tuple.clone(),
                        condition,
                    };
                    if elements.insert(el.clone()) {
                        ordered.push(el);
                    }
                }
            }
            if ordered.iter().all(|e| e.condition.is_empty()) {
                let tuples: BTreeSet<&[_]> = ordered.iter().map(|e| e.tuple.as_slice()).collect();
                let holds = aggregate::apply(agg.func, tuples).satisfies(agg.rel, &agg.guard);
                return if holds != *negated {
                    Simplified::True
                } else {
                    Simplified::False
                };
            }
            Simplified::Keep(GroundLiteral::Aggregate {
                negated: *negated,
                agg: GroundAggregate {
                    elements: ordered,
                    ..agg.clone()
                },
            })
        }
        other => Simplified::Keep(other.clone()),
    }
}

/// `None` if some literal is false.
fn simplify_body(body: &[GroundLiteral], k: &Known) -> Option<Vec<GroundLiteral>> {
    let mut out = Vec::with_capacity(body.len());
    for l in body {
        match simplify_literal(l, k) {
            Simplified::True => {}
            Simplified::False => return None,
            Simplified::Keep(l) => out.push(l),
        }
    }
    Some(out)
}

pub(super) fn finalize(
    table: AtomTable,
    mut rules: Vec<GroundRule>,
    weaks: Vec<GroundWeak>,
    mut certain: BTreeSet<AtomId>,
    warnings: Vec<String>,
) -> GroundProgram {
    loop {
        let mut headed = certain.clone();
        headed.extend(rules.iter().flat_map(|r| r.head.iter().copied()));
        let before = (rules.len(), certain.len(), headed.len());
        let mut next = Vec::with_capacity(rules.len());
        let mut seen = BTreeSet::new();
        for r in &rules {
            if r.head.iter().any(|h| certain.contains(h)) {
                continue;
            }
            let k = Known {
                certain: &certain,
                headed: &headed,
            };
            let Some(body) = simplify_body(&r.body, &k) else {
                continue;
            };
            if body.is_empty() && r.head.len() == 1 {
                certain.insert(r.head[0]);
                continue;
            }
            let rule = GroundRule {
                head: r.head.clone(),
                body,
            };
            if seen.insert(rule.clone()) {
                next.push(rule);
            }
        }
        let changed = next != rules;
        rules = next;
        let mut headed_after = certain.clone();
        headed_after.extend(rules.iter().flat_map(|r| r.head.iter().copied()));
        if !changed && before == (rules.len(), certain.len(), headed_after.len()) {
            break;
        }
    }

    let mut headed = certain.clone();
    headed.extend(rules.iter().flat_map(|r| r.head.iter().copied()));
    let k = Known {
        certain: &certain,
        headed: &headed,
    };
    let mut seen = BTreeSet::new();
    let weaks: Vec<GroundWeak> = weaks
        .into_iter()
        .filter_map(|w| {
            let body = simplify_body(&w.body, &k)?;
            let w = GroundWeak { body, ..w };
            seen.insert(w.clone()).then_some(w)
        })
        .collect();

    let mut r = Renumber {
        old: &table,
        new: AtomTable::with_first_id(table.first_id()),
        map: BTreeMap::new(),
    };
    let facts = certain.iter().map(|&a| r.id(a)).collect();
    let rules = rules
        .iter()
        .map(|rule| GroundRule {
            head: rule.head.iter().map(|&a| r.id(a)).collect(),
            body: r.body(&rule.body),
        })
        .collect();
    let weaks = weaks
        .iter()
        .map(|w| GroundWeak {
            body: r.body(&w.body),
            ..w.clone()
        })
        .collect();
    GroundProgram {
        rules,
        weaks,
        atoms: r.new,
        facts,
        warnings,
    }
}

/// Assigns new ids in order of first occurrence.
struct Renumber<'a> {
    old: &'a AtomTable,
    new: AtomTable,
    map: BTreeMap<AtomId, AtomId>,
}

impl Renumber<'_> {
    fn id(&mut self, old: AtomId) -> AtomId {
        if let Some(&id) = self.map.get(&old) {
            return id;
        }
        let id = self.new.intern(self.old.atom(old).clone());
        self.map.insert(old, id);
        id
    }

    fn body(&mut self, body: &[GroundLiteral]) -> Vec<GroundLiteral> {
        body.iter()
            .map(|l| match l {
                GroundLiteral::Pos(a) => GroundLiteral::Pos(self.id(*a)),
                GroundLiteral::Neg(a) => GroundLiteral::Neg(self.id(*a)),
                GroundLiteral::Aggregate { negated, agg } => GroundLiteral::Aggregate {
                    negated: *negated,
                    agg: GroundAggregate {
                        elements: agg
                            .elements
                            .iter()
                            .map(|e| GroundElement {
                                tuple: e.tuple.clone(),
                                condition: self.body(&e.condition),
                            })
                            .collect(),
                        ..agg.clone()
                    },
                },
            })
            .collect()
    }
}
