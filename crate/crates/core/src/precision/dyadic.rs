//! Binary floating numbers `mant * 2^exp` with unbounded mantissa and
//! explicitly directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Rounding {
    pub fn flip(self) -> Rounding {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// Exact dyadic rational. The mantissa is kept odd (or zero) so that
/// structural equality coincides with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `n / 2^k` rounded in the given direction.
pub(crate) fn shr_round(n: &BigInt, k: u64, dir: Rounding) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    match dir {
        // num-bigint shifts round toward negative infinity.
        Rounding::Down => n >> k,
        Rounding::Up => -((-n) >> k),
    }
}

pub(crate) fn div_round(num: &BigInt, den: &BigInt, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Down => num.div_floor(den),
        Rounding::Up => num.div_ceil(den),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Position of the leading bit: `|x|` lies in `[2^m, 2^(m+1))`.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `bits` significant bits.
    pub fn round(&self, bits: u32, dir: Rounding) -> Dyadic {
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        Dyadic::new(shr_round(&self.mant, shift, dir), self.exp + shift as i64)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Rounding::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Rounding::Up)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// `num / den` rounded to `bits` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        // Scale so the integer quotient carries at least `bits + 2` bits.
        let k = bits as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let (n, d) = if k >= 0 {
            (num << (k as u64), den)
        } else {
            (num, den << ((-k) as u64))
        };
        Dyadic::new(div_round(&n, &d, dir), -k).round(bits, dir)
    }

    pub fn from_rational(r: &BigRational, bits: u32, dir: Rounding) -> Dyadic {
        Self::from_ratio(r.numer(), r.denom(), bits, dir)
    }

    pub fn div(&self, other: &Dyadic, bits: u32, dir: Rounding) -> Dyadic {
        let q = Self::from_ratio(&self.mant, &other.mant, bits, dir);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Square root of a non-negative value, rounded to `bits` bits.
    pub fn sqrt(&self, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let m = self.mant.magnitude();
        let mut shift = (2 * bits as i64 + 4 - m.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled: BigUint = m << (shift as u64);
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let root = if !exact && dir == Rounding::Up {
            root + 1u32
        } else {
            root
        };
        Dyadic::new(BigInt::from(root), (self.exp - shift) / 2).round(bits, dir)
    }

    /// Power with a non-negative exponent, rounding after every step.
    pub fn pow(&self, k: u32, bits: u32, dir: Rounding) -> Dyadic {
        if k == 0 {
            return Self::one();
        }
        let negative_result = self.is_negative() && k % 2 == 1;
        // Work on |x| so that every intermediate is non-negative and the
        // rounding direction composes monotonically.
        let mag_dir = if negative_result { dir.flip() } else { dir };
        let mut base = self.abs();
        let mut acc = Self::one();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).round(bits, mag_dir);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).round(bits, mag_dir);
            }
        }
        if negative_result {
            -acc
        } else {
            acc
        }
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let keep = 60.min(len);
        let top = shr_round(&self.mant, (len - keep) as u64, Rounding::Down);
        let top = top.to_f64().unwrap_or(0.0);
        let e = self.exp + len - keep;
        if e > i32::MAX as i64 {
            return top.signum() * f64::INFINITY;
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }
}

/// `x` in scientific notation with `digits` significant digits, rounded in
/// direction `dir` (so a `Down` string is a valid lower bound).
pub fn format_sci(x: &BigRational, digits: u32, dir: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let ten = BigRational::from_integer(BigInt::from(10));
    let mag = x.abs();
    // Estimate the decimal exponent, then correct it exactly.
    let approx = (mag.numer().bits() as f64 - mag.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e = approx.floor() as i32;
    while num_traits::pow::Pow::pow(&ten, e) > mag {
        e -= 1;
    }
    while num_traits::pow::Pow::pow(&ten, e + 1) <= mag {
        e += 1;
    }
    let shift = e - digits as i32 + 1;
    let scaled = x / num_traits::pow::Pow::pow(&ten, shift);
    let mut m = match dir {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    if m.abs() >= BigInt::from(10u32).pow(digits) {
        m = match dir {
            Rounding::Down => m.div_floor(&BigInt::from(10)),
            Rounding::Up => m.div_ceil(&BigInt::from(10)),
        };
        e += 1;
    }
    let sign = if m.is_negative() { "-" } else { "" };
    let s = m.abs().to_string();
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same sign, both non-zero: leading-bit positions decide unless equal.
        let (ma, mb) = (self.msb().unwrap(), other.msb().unwrap());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa == Sign::Plus { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 7), Dyadic::zero());
    }

    #[test]
    fn ordering_handles_signs_and_exponents() {
        assert!(d(-1, 100) < d(1, -100));
        assert!(d(3, -1) > d(1, 0));
        assert!(d(-3, -1) < d(-1, 0));
        assert!(d(1, 1000) > d(7, 10));
    }

    #[test]
    fn directed_rounding_brackets() {
        let x = d(0b1011_0111, 0);
        assert_eq!(x.round(4, Rounding::Down), d(0b1011, 4));
        assert_eq!(x.round(4, Rounding::Up), d(0b1100, 4));
        let y = -x;
        assert_eq!(y.round(4, Rounding::Down), d(-0b1100, 4));
        assert_eq!(y.round(4, Rounding::Up), d(-0b1011, 4));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(7, -1).floor(), BigInt::from(3));
        assert_eq!(d(7, -1).ceil(), BigInt::from(4));
        assert_eq!(d(-7, -1).floor(), BigInt::from(-4));
        assert_eq!(d(-7, -1).ceil(), BigInt::from(-3));
    }

    #[test]
    fn ratio_brackets_one_third() {
        let lo = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 64, Rounding::Down);
        let hi = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 64, Rounding::Up);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!((&hi - &lo) <= Dyadic::pow2(-64));
    }

    #[test]
    fn sqrt_two_brackets() {
        let two = d(2, 0);
        let lo = two.sqrt(80, Rounding::Down);
        let hi = two.sqrt(80, Rounding::Up);
        assert!(&lo * &lo < two && two < &hi * &hi);
        let four = d(4, 0);
        assert_eq!(four.sqrt(10, Rounding::Down), d(2, 0));
        assert_eq!(four.sqrt(10, Rounding::Up), d(2, 0));
    }

    #[test]
    fn pow_rounding_direction_for_negative_base() {
        let x = d(-3, -1); // -1.5
        let lo = x.pow(3, 8, Rounding::Down);
        let hi = x.pow(3, 8, Rounding::Up);
        let exact = d(-27, -3);
        assert!(lo <= exact && exact <= hi);
    }

    #[test]
    fn scientific_strings() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(format_sci(&r(4937, 10_000), 3, Rounding::Down), "4.93e-1");
        assert_eq!(format_sci(&r(4937, 10_000), 3, Rounding::Up), "4.94e-1");
        assert_eq!(format_sci(&r(9999, 1), 2, Rounding::Up), "1.0e4");
        assert_eq!(format_sci(&r(-12, 1), 1, Rounding::Down), "-2e1");
        assert_eq!(format_sci(&r(100, 1), 3, Rounding::Down), "1.00e2");
        assert_eq!(format_sci(&r(0, 1), 3, Rounding::Down), "0");
    }
}
