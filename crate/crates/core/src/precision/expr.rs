use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::Precision;
use crate::error::{Error, Result};

/// Symbolic real number built from rationals, square roots, logarithms and
/// field operations. Evaluated lazily to certified intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealExpr {
    Rational(BigRational),
    Sqrt(Box<RealExpr>),
    Log(Box<RealExpr>),
    Neg(Box<RealExpr>),
    Add(Box<RealExpr>, Box<RealExpr>),
    Sub(Box<RealExpr>, Box<RealExpr>),
    Mul(Box<RealExpr>, Box<RealExpr>),
    Div(Box<RealExpr>, Box<RealExpr>),
    Pow(Box<RealExpr>, i32),
}

impl RealExpr {
    pub fn int(n: impl Into<BigInt>) -> Self {
        RealExpr::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        RealExpr::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        RealExpr::Rational(r)
    }

    /// Exact decimal such as `"20.7"` or `"3.87e13"`.
    pub fn decimal(s: &str) -> Self {
        RealExpr::Rational(parse_decimal(s).unwrap_or_else(|| panic!("bad decimal literal {s}")))
    }

    pub fn sqrt(self) -> Self {
        RealExpr::Sqrt(Box::new(self))
    }

    pub fn log(self) -> Self {
        RealExpr::Log(Box::new(self))
    }

    pub fn pow(self, k: i32) -> Self {
        RealExpr::Pow(Box::new(self), k)
    }

    /// `1 + sqrt(2)`
    pub fn alpha() -> Self {
        RealExpr::int(1) + RealExpr::int(2).sqrt()
    }

    /// `1 - sqrt(2)`
    pub fn beta() -> Self {
        RealExpr::int(1) - RealExpr::int(2).sqrt()
    }

    /// `log b / log(1 + sqrt(2))`
    pub fn log_ratio(b: u32) -> Self {
        RealExpr::int(b).log() / RealExpr::alpha().log()
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    /// The value as a rational, when the expression is structurally
    /// log-free and sqrt-free (or reduces to perfect squares and `log 1`).
    pub fn exact(&self) -> Option<BigRational> {
        match self {
            RealExpr::Rational(r) => Some(r.clone()),
            RealExpr::Sqrt(x) => {
                let r = x.exact()?;
                if r.is_negative() {
                    return None;
                }
                let (n, d) = (r.numer().magnitude().sqrt(), r.denom().magnitude().sqrt());
                let back = BigRational::new(
                    BigInt::from(n.clone()) * BigInt::from(n.clone()),
                    BigInt::from(d.clone()) * BigInt::from(d.clone()),
                );
                (back == r).then(|| BigRational::new(n.into(), d.into()))
            }
            RealExpr::Log(x) => {
                let r = x.exact()?;
                r.is_one().then(BigRational::zero)
            }
            RealExpr::Neg(x) => Some(-x.exact()?),
            RealExpr::Add(a, b) => Some(a.exact()? + b.exact()?),
            RealExpr::Sub(a, b) => Some(a.exact()? - b.exact()?),
            RealExpr::Mul(a, b) => Some(a.exact()? * b.exact()?),
            RealExpr::Div(a, b) => {
                let d = b.exact()?;
                if d.is_zero() {
                    return None;
                }
                Some(a.exact()? / d)
            }
            RealExpr::Pow(x, k) => {
                let r = x.exact()?;
                if r.is_zero() && *k < 0 {
                    return None;
                }
                Some(num_traits::pow::Pow::pow(r, *k))
            }
        }
    }

    fn eval_at(&self, wp: u32) -> Result<Interval> {
        if let Some(r) = self.exact() {
            return Ok(Interval::from_rational(&r, wp));
        }
        match self {
            RealExpr::Rational(r) => Ok(Interval::from_rational(r, wp)),
            RealExpr::Sqrt(x) => x.eval_at(wp)?.sqrt(),
            RealExpr::Log(x) => x.eval_at(wp)?.ln(),
            RealExpr::Neg(x) => Ok(x.eval_at(wp)?.neg()),
            RealExpr::Add(a, b) => Ok(a.eval_at(wp)?.add(&b.eval_at(wp)?)),
            RealExpr::Sub(a, b) => Ok(a.eval_at(wp)?.sub(&b.eval_at(wp)?)),
            RealExpr::Mul(a, b) => Ok(a.eval_at(wp)?.mul(&b.eval_at(wp)?)),
            RealExpr::Div(a, b) => a.eval_at(wp)?.div(&b.eval_at(wp)?),
            RealExpr::Pow(x, k) => {
                // Extra guard bits: repeated squaring loses about log2(k) bits.
                let guard = 32 - (k.unsigned_abs()).leading_zeros();
                Ok(x.eval_at(wp + guard)?.powi(*k)?.with_bits(wp))
            }
        }
    }
}

/// Maximum number of internal precision increases inside [`eval`].
const EVAL_REFINEMENTS: u32 = 8;

/// Certified enclosure of `expr` whose width is at most
/// `2^(2 - bits) * max(1, |hi|)`.
pub fn eval(expr: &RealExpr, bits: u32) -> Result<Interval> {
    let mut wp = bits + 32;
    let mut last_err = Error::PrecisionExhausted { bits: wp };
    for _ in 0..EVAL_REFINEMENTS {
        match expr.eval_at(wp) {
            Ok(iv) => {
                let scale = {
                    let m = iv.mag();
                    if m > Dyadic::one() {
                        m
                    } else {
                        Dyadic::one()
                    }
                };
                let allowed = scale.mul_pow2(2 - bits as i64);
                if iv.width() <= allowed {
                    return Ok(iv.with_bits(bits));
                }
                last_err = Error::PrecisionExhausted { bits: wp };
            }
            Err(e) if e.is_refinable() => last_err = e,
            Err(e) => return Err(e),
        }
        wp = wp.saturating_mul(2);
    }
    Err(last_err)
}

/// `floor(x)`, refining the working precision until both interval ends agree.
pub fn certified_floor(expr: &RealExpr, precision: &Precision) -> Result<BigInt> {
    if let Some(r) = expr.exact() {
        return Ok(r.floor().to_integer());
    }
    for bits in precision.schedule() {
        if let Some(f) = eval(expr, bits)?.floor() {
            return Ok(f);
        }
    }
    Err(Error::PrecisionExhausted {
        bits: precision.max_bits,
    })
}

/// `(||x||, nearest integer)` with the nearest integer certified.
pub fn nearest_integer_distance(
    expr: &RealExpr,
    precision: &Precision,
) -> Result<(Interval, BigInt)> {
    if let Some(r) = expr.exact() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let n = (&r + &half).floor().to_integer();
        let d = (r - BigRational::from_integer(n.clone())).abs();
        return Ok((Interval::from_rational(&d, precision.start_bits), n));
    }
    for bits in precision.schedule() {
        if let Some(found) = eval(expr, bits)?.distance_to_nearest() {
            return Ok(found);
        }
    }
    Err(Error::PrecisionExhausted {
        bits: precision.max_bits,
    })
}

/// Parses `123`, `-4.56`, `1.17e30`, `7.39E+29` exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let value = BigRational::from_integer(digits) * num_traits::pow::Pow::pow(ten, scale);
    Some(if neg { -value } else { value })
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExpr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            RealExpr::Sqrt(x) => write!(f, "sqrt({x})"),
            RealExpr::Log(x) => write!(f, "log({x})"),
            RealExpr::Neg(x) => write!(f, "-({x})"),
            RealExpr::Add(a, b) => write!(f, "({a}+{b})"),
            RealExpr::Sub(a, b) => write!(f, "({a}-{b})"),
            RealExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            RealExpr::Div(a, b) => write!(f, "{a}/{b}"),
            RealExpr::Pow(x, k) => write!(f, "({x})^{k}"),
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for RealExpr {
            type Output = RealExpr;

            fn $method(self, rhs: RealExpr) -> RealExpr {
                RealExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }

        impl $trait<&RealExpr> for &RealExpr {
            type Output = RealExpr;

            fn $method(self, rhs: &RealExpr) -> RealExpr {
                RealExpr::$variant(Box::new(self.clone()), Box::new(rhs.clone()))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl Neg for RealExpr {
    type Output = RealExpr;

    fn neg(self) -> RealExpr {
        RealExpr::Neg(Box::new(self))
    }
}
