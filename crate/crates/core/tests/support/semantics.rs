//! Randomized checks of the answer-set evaluator on small generated
//! programs over propositional atoms `a0`..`a5` and their strong negations.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use ratground_core::evaluator::{self, Interpretation};
use ratground_core::grounder::{ground, GroundOptions, GroundProgram};
use ratground_core::parser::parse_program;

const ATOMS: u8 = 6;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

#[derive(Debug, Clone)]
struct GenRule {
    head: Vec<String>,
    pos: Vec<String>,
    neg: Vec<String>,
    /// `(lower bound, weighted atoms)` of a `#sum` in the body.
    sum: Option<(String, Vec<(String, String)>)>,
}

impl GenRule {
    fn render(&self) -> String {
        let mut body: Vec<String> = self.pos.clone();
        body.extend(self.neg.iter().map(|a| format!("not {a}")));
        if let Some((bound, elems)) = &self.sum {
            let elems: Vec<String> = elems
                .iter()
                .enumerate()
                .map(|(k, (w, a))| format!("{w},{k} : {a}"))
                .collect();
            body.push(format!("#sum{{{}}} >= {bound}", elems.join("; ")));
        }
        let head = self.head.join(" | ");
        if body.is_empty() {
            format!("{head}.")
        } else {
            format!("{head} :- {}.", body.join(", "))
        }
    }
}

fn atom(strong: bool) -> BoxedStrategy<String> {
    let plain = (0..ATOMS).prop_map(|k| format!("a{k}"));
    if strong {
        prop_oneof![3 => plain, 1 => (0..ATOMS).prop_map(|k| format!("-a{k}"))].boxed()
    } else {
        plain.boxed()
    }
}

fn weight() -> impl Strategy<Value = String> {
    (-6i64..7, 1i64..5).prop_map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") })
}

fn rule(positive_only: bool) -> BoxedStrategy<GenRule> {
    let heads = if positive_only { 1..2usize } else { 0..3usize };
    let negs = if positive_only { 0..1usize } else { 0..3usize };
    let sum = if positive_only {
        Just(None).boxed()
    } else {
        proptest::option::weighted(0.25, (weight(), prop::collection::vec((weight(), atom(false)), 1..4))).boxed()
    };
    (
        prop::collection::vec(atom(!positive_only), heads),
        prop::collection::vec(atom(!positive_only), 0..3),
        prop::collection::vec(atom(!positive_only), negs),
        sum,
    )
        .prop_map(|(head, pos, neg, sum)| GenRule { head, pos, neg, sum })
        .prop_filter("a constraint needs a body", |r| {
            !r.head.is_empty() || !r.pos.is_empty() || !r.neg.is_empty()
        })
        .boxed()
}

fn program(positive_only: bool) -> impl Strategy<Value = Vec<GenRule>> {
    prop::collection::vec(rule(positive_only), 1..8)
}

fn render(rules: &[GenRule]) -> String {
    rules.iter().map(|r| r.render() + "\n").collect()
}

/// Grounds `text`; programs the grounder rejects (recursion through an
/// aggregate) are skipped.
fn ground_text(text: &str, opts: &GroundOptions) -> Option<GroundProgram> {
    let p = parse_program(text, &Default::default()).expect("generated programs parse");
    ground(&p, opts).ok()
}

fn names(g: &GroundProgram, i: &Interpretation) -> BTreeSet<String> {
    i.iter().map(|&a| g.atoms.atom(a).to_string()).collect()
}

/// Answer sets are consistent models, and dropping any single atom breaks
/// some rule of the reduct.
pub fn answer_sets_are_minimal_models(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&program(false), |rules| {
            let text = render(&rules);
            let Some(g) = ground_text(&text, &GroundOptions::default()) else {
                return Ok(());
            };
            for i in evaluator::answer_sets(&g).unwrap() {
                prop_assert!(evaluator::is_model(&g, &i), "{text}: {:?}", names(&g, &i));
                prop_assert!(evaluator::consistent(&g, &i), "{text}: {:?}", names(&g, &i));
                let reduct = evaluator::reduct(&g, &i);
                for &a in &i {
                    let mut smaller = i.clone();
                    smaller.remove(&a);
                    let rules_hold = reduct.rules.iter().all(|r| {
                        let body = r.body.iter().all(|l| evaluator::satisfied(l, &smaller));
                        !body || r.head.iter().any(|h| smaller.contains(h))
                    });
                    let facts_hold = g.facts.is_subset(&smaller);
                    prop_assert!(!(rules_hold && facts_hold), "{text}: {:?} without {a}", names(&g, &i));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Least fixpoint of the immediate-consequence operator, over atom names.
fn least_fixpoint(rules: &[GenRule]) -> BTreeSet<String> {
    let mut model = BTreeSet::new();
    loop {
        let next: BTreeSet<String> = rules
            .iter()
            .filter(|r| r.pos.iter().all(|a| model.contains(a)))
            .flat_map(|r| r.head.iter().cloned())
            .chain(model.iter().cloned())
            .collect();
        if next == model {
            return model;
        }
        model = next;
    }
}

/// Positive normal programs have exactly their least fixpoint as answer set.
pub fn positive_programs_have_least_model(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&program(true), |rules| {
            let text = render(&rules);
            let g = ground_text(&text, &GroundOptions::default()).expect("no aggregates");
            let found = evaluator::answer_sets(&g).unwrap();
            prop_assert_eq!(found.len(), 1, "{}", text);
            prop_assert_eq!(names(&g, &found[0]), least_fixpoint(&rules), "{}", text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Integer facts and division-free arithmetic.
fn integer_program() -> impl Strategy<Value = String> {
    let fact = (-5i64..6).prop_map(|k| format!("p({k})."));
    let rules = prop::sample::subsequence(
        vec![
            "q(X + Y) :- p(X), p(Y), X < Y.",
            "r(X * 2 - 1) :- p(X), not q(X).",
            "s(X) | t(X) :- q(X), X > 0.",
            "u(X \\ 3) :- p(X), X >= 0.",
            "v(N) :- N = #count{X : s(X)}.",
            "w :- #sum{X : t(X); Y : r(Y)} > 2.",
            ":- s(X), t(Y), X = Y + 1.",
            "m(X) :- X = #max{Y : q(Y)}.",
            "k(X..X+1) :- p(X), X < -3.",
        ],
        0..=9,
    );
    (prop::collection::btree_set(fact, 1..4), rules).prop_map(|(facts, rules)| {
        let mut text: String = facts.into_iter().collect::<Vec<_>>().join(" ");
        text.push('\n');
        for r in rules {
            text.push_str(r);
            text.push('\n');
        }
        text
    })
}

/// Without division, truncating integer division changes nothing.
pub fn integer_division_is_neutral(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&integer_program(), |text| {
            let exact = ground_text(&text, &GroundOptions::default());
            let truncating = ground_text(
                &text,
                &GroundOptions {
                    integer_division: true,
                    ..GroundOptions::default()
                },
            );
            let solve = |g: Option<GroundProgram>| -> Result<Option<Vec<BTreeSet<String>>>, TestCaseError> {
                let Some(g) = g else { return Ok(None) };
                match evaluator::answer_sets(&g) {
                    Ok(sets) => Ok(Some(sets.iter().map(|i| names(&g, i)).collect())),
                    Err(_) => Err(TestCaseError::reject("too many atoms")),
                }
            };
            prop_assert_eq!(solve(exact)?, solve(truncating)?, "{}", text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
