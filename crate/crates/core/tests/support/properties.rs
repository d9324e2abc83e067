//! Randomized property checks shared by the property tests and the
//! acceptance report. Each check runs `cases` random cases and returns the
//! first failure, if any.

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use ratground_core::ast::{Rel, Value};
use ratground_core::emitter::scale;
use ratground_core::rational::{from_decimal, Rational};
use std::cmp::Ordering;

pub const CASES: u32 = 1000;

const RELS: [Rel; 6] = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Gt, Rel::Ge];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-50i64..50, 1i64..20),
        (-1_000_000_000i64..1_000_000_000, 1i64..1_000_000_000),
    ]
    .prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn check_standard(r: &Rational) -> Result<(), TestCaseError> {
    use num_integer::Integer;
    prop_assert!(r.denom() > &BigInt::from(0), "denominator not positive: {r}");
    prop_assert_eq!(r.numer().gcd(r.denom()), BigInt::from(1), "not reduced: {}", r);
    Ok(())
}

pub fn field_laws(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(rational(), rational(), rational()), |(a, b, c)| {
            let zero = Rational::zero();
            let one = Rational::one();
            for r in [a.add(&b), a.sub(&b), a.mul(&b), a.neg()] {
                check_standard(&r)?;
            }
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&zero), a.clone());
            prop_assert_eq!(a.mul(&one), a.clone());
            prop_assert_eq!(a.add(&a.neg()), zero.clone());
            prop_assert_eq!(a.sub(&b), a.add(&b.neg()));
            if !a.is_zero() {
                let inv = one.div(&a).unwrap();
                check_standard(&inv)?;
                prop_assert_eq!(a.mul(&inv), one.clone());
                prop_assert_eq!(b.div(&a).unwrap().mul(&a), b.clone());
            }
            // order agrees with the sign of the difference
            prop_assert_eq!(a.cmp(&b), b.sub(&a).neg().cmp(&zero));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn value() -> impl Strategy<Value = Value> {
    let name = prop::sample::select(vec!["a", "b", "ab", "f", "g", "z"]);
    let leaf = prop_oneof![
        rational().prop_map(Value::Number),
        name.clone().prop_map(|s| Value::Symbol(s.into())),
        prop::sample::select(vec!["", "a", "b", "10.1", "2.1"]).prop_map(|s| Value::Str(s.into())),
    ];
    leaf.prop_recursive(3, 16, 3, move |inner| {
        (name.clone(), prop::collection::vec(inner, 1..3)).prop_map(|(f, args)| Value::Func(f.into(), args))
    })
}

pub fn term_order(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(value(), value(), value()), |(a, b, c)| {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
            prop_assert_eq!(a.cmp(&a), Ordering::Equal);
            if a <= b && b <= c {
                prop_assert!(a <= c, "{:?} <= {:?} <= {:?}", a, b, c);
            }
            if a < b && b < c {
                prop_assert!(a < c);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn scale_proportional(cases: u32) -> Result<(), String> {
    let entries = prop::collection::vec((rational(), any::<bool>()), 0..6);
    runner(cases)
        .run(&(entries, rational()), |(entries, bound)| {
            let weighted: Vec<(bool, Rational)> = entries.iter().map(|(w, x)| (*x, w.clone())).collect();
            let (scaled, b) = scale(&weighted, &bound);
            let exact = weighted
                .iter()
                .filter(|(x, _)| *x)
                .fold(Rational::zero(), |s, (_, w)| s.add(w));
            let int: BigInt = scaled.iter().filter(|(x, _)| *x).map(|(_, w)| w.clone()).sum();
            for rel in RELS {
                prop_assert_eq!(rel.holds(exact.cmp(&bound)), rel.holds(int.cmp(&b)), "{:?}", rel);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Independent reading of a plain decimal string.
fn decimal_value(s: &str) -> Rational {
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
    let (i, f) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{i}{f}").parse().unwrap();
    let r = Rational::new(digits, BigInt::from(10u32).pow(f.len() as u32)).unwrap();
    if neg {
        r.neg()
    } else {
        r
    }
}

pub fn decimal_round_trip(cases: u32) -> Result<(), String> {
    // m fractional digits, kept in full since m <= f
    let input = (any::<bool>(), 0u64..1_000_000, 1usize..=6, 0u64..1_000_000)
        .prop_flat_map(|(neg, int, m, frac)| (Just(neg), Just(int), Just(m), Just(frac), m as u32..=6));
    runner(cases)
        .run(&input, |(neg, int, m, frac, f)| {
            let frac = format!("{frac:06}");
            let text = format!("{}{}.{}", if neg { "-" } else { "" }, int, &frac[..m]);
            let r = from_decimal(&text, f).unwrap();
            prop_assert_eq!(&r, &decimal_value(&text));
            let back = r.to_decimal_string(f);
            prop_assert_eq!(decimal_value(&back), r.clone(), "{} -> {}", text, back);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
