//! Mathematical functions callable as `&name(inputs; output)`.

use crate::rational::Rational;

/// Evaluation function; `None` means undefined for these inputs.
pub type BuiltinFn = fn(&[Rational]) -> Option<Rational>;

#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub inputs: usize,
    pub outputs: usize,
    pub eval: BuiltinFn,
}

/// The closed registry of supported functions.
pub static REGISTRY: &[Builtin] = &[
    Builtin {
        name: "truncate",
        inputs: 1,
        outputs: 1,
        eval: |a| Some(truncate(&a[0])),
    },
    Builtin {
        name: "round",
        inputs: 1,
        outputs: 1,
        eval: |a| Some(round(&a[0])),
    },
    Builtin {
        name: "ceil",
        inputs: 1,
        outputs: 1,
        eval: |a| Some(ceil(&a[0])),
    },
    Builtin {
        name: "floor",
        inputs: 1,
        outputs: 1,
        eval: |a| Some(floor(&a[0])),
    },
    Builtin {
        name: "pow",
        inputs: 2,
        outputs: 1,
        eval: |a| pow(&a[0], &a[1]),
    },
    Builtin {
        name: "abs",
        inputs: 1,
        outputs: 1,
        eval: |a| Some(abs(&a[0])),
    },
];

pub fn lookup(name: &str) -> Option<&'static Builtin> {
    REGISTRY.iter().find(|b| b.name == name)
}

pub fn truncate(x: &Rational) -> Rational {
    x.trunc()
}

/// Ties round away from zero.
pub fn round(x: &Rational) -> Rational {
    x.round()
}

pub fn ceil(x: &Rational) -> Rational {
    x.ceil()
}

pub fn floor(x: &Rational) -> Rational {
    x.floor()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// `x^e` for integer `e`. Fractional exponents and `0` to a negative power
/// are undefined.
pub fn pow(x: &Rational, e: &Rational) -> Option<Rational> {
    if !e.is_integer() {
        return None;
    }
    x.pow(e.numer()).ok()
}
