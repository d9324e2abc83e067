//! Exact rational numbers in standard form.
//!
//! Every [`Rational`] is kept reduced: the denominator is positive and shares
//! no factor with the numerator, so structural equality is numeric equality.
//! Zero is `0/1`. Integers are backed by `num-bigint`, so nothing overflows.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Largest number of decimal digits accepted by [`from_decimal`] and the CLI.
pub const MAX_DECIMAL_DIGITS: u32 = 6;

/// Default number of decimal digits kept for decimal literals.
pub const DEFAULT_DECIMAL_DIGITS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("undefined arithmetic: {0}")]
    UndefinedArithmetic(&'static str),
    #[error("malformed decimal literal `{0}`")]
    Syntax(String),
}

/// An arbitrary-precision fraction in standard form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds the standard form of `p/q`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, RationalError> {
        let p = p.into();
        let q = q.into();
        if q.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self::reduce(p, q))
    }

    pub fn from_integer(i: impl Into<BigInt>) -> Self {
        Rational {
            num: i.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    // q != 0 is the caller's obligation.
    fn reduce(p: BigInt, q: BigInt) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let g = p.gcd(&q);
        let (mut num, mut den) = (p / &g, q / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Rational { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Converts to `i64` when the value is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.num.to_i64()
        } else {
            None
        }
    }

    /// Sum via the common denominator `lcm(q_t, q_u)`.
    pub fn add(&self, other: &Rational) -> Rational {
        let l = self.den.lcm(&other.den);
        let p = (&l / &self.den) * &self.num + (&l / &other.den) * &other.num;
        Self::reduce(p, l)
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        let l = self.den.lcm(&other.den);
        let p = (&l / &self.den) * &self.num - (&l / &other.den) * &other.num;
        Self::reduce(p, l)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        let p = &self.num * &other.num;
        let q = &self.den * &other.den;
        Self::reduce(p, q)
    }

    /// Exact quotient; dividing by zero is undefined.
    pub fn div(&self, other: &Rational) -> Result<Rational, RationalError> {
        if other.is_zero() {
            return Err(RationalError::UndefinedArithmetic("division by zero"));
        }
        let p = &self.num * &other.den;
        let q = &self.den * &other.num;
        Ok(Self::reduce(p, q))
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    /// Integer division truncating toward zero, as in integer-only ASP.
    ///
    /// Both operands must be integers.
    pub fn int_div(&self, other: &Rational) -> Result<Rational, RationalError> {
        if !self.is_integer() || !other.is_integer() {
            return Err(RationalError::UndefinedArithmetic("integer division on non-integers"));
        }
        if other.is_zero() {
            return Err(RationalError::UndefinedArithmetic("division by zero"));
        }
        // BigInt `/` truncates toward zero.
        Ok(Self::from_integer(&self.num / &other.num))
    }

    /// Integer modulus `m - n * trunc(m / n)`; operands must be integers.
    pub fn modulo(&self, other: &Rational) -> Result<Rational, RationalError> {
        if !self.is_integer() || !other.is_integer() {
            return Err(RationalError::UndefinedArithmetic("modulus on non-integers"));
        }
        if other.is_zero() {
            return Err(RationalError::UndefinedArithmetic("modulus by zero"));
        }
        Ok(Self::from_integer(&self.num % &other.num))
    }

    pub fn trunc(&self) -> Rational {
        Self::from_integer(&self.num / &self.den)
    }

    pub fn floor(&self) -> Rational {
        Self::from_integer(self.num.div_floor(&self.den))
    }

    pub fn ceil(&self) -> Rational {
        Self::from_integer(-((-&self.num).div_floor(&self.den)))
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> Rational {
        Self::from_integer(round_half_away(&self.num, &self.den))
    }

    /// Integer power. Negative exponents invert; `0^0` is `1`.
    pub fn pow(&self, exp: &BigInt) -> Result<Rational, RationalError> {
        let magnitude = exp
            .abs()
            .to_u32()
            .ok_or(RationalError::UndefinedArithmetic("exponent too large"))?;
        let num = Pow::pow(&self.num, magnitude);
        let den = Pow::pow(&self.den, magnitude);
        if exp.is_negative() {
            if num.is_zero() {
                return Err(RationalError::UndefinedArithmetic("zero to a negative power"));
            }
            Ok(Self::reduce(den, num))
        } else {
            Ok(Self::reduce(num, den))
        }
    }

    /// Rounds to `digits` decimal places with the shared tie policy.
    pub fn round_to_places(&self, digits: u32) -> Rational {
        let scale = pow10(digits);
        let n = round_half_away(&(&self.num * &scale), &self.den);
        Self::reduce(n, scale)
    }

    /// Decimal rendering with at most `digits` places, trailing zeros stripped.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scale = pow10(digits);
        let n = round_half_away(&(&self.num * &scale), &self.den);
        let negative = n.is_negative();
        let (int_part, frac_part) = n.abs().div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 && !frac_part.is_zero() {
            let frac = frac_part.to_string();
            let mut padded = String::new();
            for _ in frac.len()..digits as usize {
                padded.push('0');
            }
            padded.push_str(&frac);
            out.push('.');
            out.push_str(padded.trim_end_matches('0'));
        }
        out
    }

    /// Multiplies by an integer factor; used for lcm scaling.
    pub fn scale(&self, factor: &BigInt) -> Rational {
        Self::reduce(&self.num * factor, self.den.clone())
    }
}

/// Rounds `num / den` (den > 0) to the nearest integer, ties away from zero.
///
/// This is the single rounding policy for decimal input and output.
pub fn round_half_away(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    let twice = r.abs() * 2u32;
    if twice >= *den {
        if num.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn pow10(digits: u32) -> BigInt {
    Pow::pow(BigInt::from(10u32), digits)
}

/// Parses a decimal literal `i.d1...dm` (optionally signed), keeping at most
/// `max_digits` decimal places; longer fractions are rounded.
pub fn from_decimal(text: &str, max_digits: u32) -> Result<Rational, RationalError> {
    let malformed = || RationalError::Syntax(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_digits, frac_digits) = body.split_once('.').ok_or_else(malformed)?;
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_digits) || !all_digits(frac_digits) {
        return Err(malformed());
    }
    let mut joined = String::with_capacity(int_digits.len() + frac_digits.len());
    joined.push_str(int_digits);
    joined.push_str(frac_digits);
    let mut num = BigInt::parse_bytes(joined.as_bytes(), 10).ok_or_else(malformed)?;
    if negative {
        num = -num;
    }
    let m = u32::try_from(frac_digits.len()).map_err(|_| malformed())?;
    let exact = Rational::reduce(num, pow10(m));
    if m <= max_digits {
        Ok(exact)
    } else {
        Ok(exact.round_to_places(max_digits))
    }
}

/// Least common multiple of all denominators; `1` for an empty input.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(&r.den))
}

/// Scales every value by the lcm of their denominators, returning integers.
pub fn scale_to_integers(values: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let l = lcm_denominators(values);
    let scaled = values.iter().map(|v| &v.num * (&l / &v.den)).collect();
    (l, scaled)
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::add(self, rhs)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::sub(self, rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::mul(self, rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational::neg(self)
    }
}
