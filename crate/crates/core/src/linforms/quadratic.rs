//! Exact arithmetic in `Q(sqrt 2)` and logarithmic heights.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::precision::{eval, Interval, RealExpr};

/// `u + v sqrt(2)` with rational `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    u: BigRational,
    v: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QuadraticNumber {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        QuadraticNumber { u, v }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Self::rational(rat(n))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// `1 + sqrt 2`
    pub fn alpha() -> Self {
        Self::new(BigRational::one(), BigRational::one())
    }

    /// `1 - sqrt 2`
    pub fn beta() -> Self {
        Self::new(BigRational::one(), -BigRational::one())
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }

    pub fn v(&self) -> &BigRational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.v.is_zero().then_some(&self.u)
    }

    pub fn degree(&self) -> u32 {
        if self.v.is_zero() {
            1
        } else {
            2
        }
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.u.clone(), -self.v.clone())
    }

    /// `u^2 - 2 v^2`
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - rat(2) * &self.v * &self.v
    }

    pub fn trace(&self) -> BigRational {
        rat(2) * &self.u
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = self.norm();
        Ok(Self::new(&self.u / &n, -&self.v / &n))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::int(1);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact sign of the real number `u + v sqrt 2`.
    pub fn signum(&self) -> Ordering {
        let su = self.u.cmp(&BigRational::zero());
        let sv = self.v.cmp(&BigRational::zero());
        if sv == Ordering::Equal || su == sv {
            return su;
        }
        if su == Ordering::Equal {
            return sv;
        }
        // Opposite signs: the larger square wins; they never tie.
        if self.u.clone() * &self.u > rat(2) * &self.v * &self.v {
            su
        } else {
            sv
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of `|self|` with 1.
    pub fn cmp_abs_one(&self) -> Ordering {
        (self.abs() - Self::int(1)).signum()
    }

    pub fn to_expr(&self) -> RealExpr {
        let u = RealExpr::rational(self.u.clone());
        if self.v.is_zero() {
            return u;
        }
        let v = RealExpr::rational(self.v.clone()) * RealExpr::int(2).sqrt();
        if self.u.is_zero() {
            v
        } else {
            u + v
        }
    }

    /// Primitive integer minimal polynomial, leading coefficient first and
    /// positive.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        let coeffs = if self.v.is_zero() {
            vec![BigRational::one(), -self.u.clone()]
        } else {
            vec![BigRational::one(), -self.trace(), self.norm()]
        };
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Absolute logarithmic height as an expression:
    /// `(log a0 + sum over conjugates of log max(1, |root|)) / degree`.
    pub fn height_expr(&self) -> Result<RealExpr> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if let Some(r) = self.as_rational() {
            let m = r.numer().abs().max(r.denom().clone());
            return Ok(RealExpr::int(m).log());
        }
        let poly = self.minimal_polynomial();
        let mut sum = RealExpr::int(poly[0].clone()).log();
        for root in [self.clone(), self.conjugate()] {
            if root.cmp_abs_one() == Ordering::Greater {
                sum = sum + root.abs().to_expr().log();
            }
        }
        Ok(sum / RealExpr::int(2))
    }

    pub fn height(&self, bits: u32) -> Result<Interval> {
        eval(&self.height_expr()?, bits)
    }

    /// `log |self|`.
    pub fn log_abs_expr(&self) -> Result<RealExpr> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.abs().to_expr().log())
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{} + {}*sqrt(2)", self.u, self.v)
        }
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;

    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.u + &rhs.u, &self.v + &rhs.v)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;

    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.u - &rhs.u, &self.v - &rhs.v)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;

    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(
            &self.u * &rhs.u + rat(2) * &self.v * &rhs.v,
            &self.u * &rhs.v + &self.v * &rhs.u,
        )
    }
}

impl Add for QuadraticNumber {
    type Output = QuadraticNumber;

    fn add(self, rhs: QuadraticNumber) -> QuadraticNumber {
        &self + &rhs
    }
}

impl Sub for QuadraticNumber {
    type Output = QuadraticNumber;

    fn sub(self, rhs: QuadraticNumber) -> QuadraticNumber {
        &self - &rhs
    }
}

impl Mul for QuadraticNumber {
    type Output = QuadraticNumber;

    fn mul(self, rhs: QuadraticNumber) -> QuadraticNumber {
        &self * &rhs
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;

    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.u, -self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Dyadic;
    use proptest::prelude::*;

    fn q(u: (i64, i64), v: (i64, i64)) -> QuadraticNumber {
        QuadraticNumber::new(BigRational::new(u.0.into(), u.1.into()), BigRational::new(v.0.into(), v.1.into()))
    }

    fn approx(iv: &Interval) -> f64 {
        iv.midpoint_f64()
    }

    #[test]
    fn heights_of_examples() {
        let ln_alpha = (1.0 + 2f64.sqrt()).ln();
        let h = QuadraticNumber::alpha().height(128).unwrap();
        assert!((approx(&h) - ln_alpha / 2.0).abs() < 1e-15);
        let h = QuadraticNumber::ratio(3, 7).height(128).unwrap();
        assert!((approx(&h) - 7f64.ln()).abs() < 1e-15);
        let two_root_two = q((0, 1), (2, 1));
        assert_eq!(two_root_two.minimal_polynomial(), vec![1.into(), 0.into(), (-8).into()]);
        let h = two_root_two.height(128).unwrap();
        assert!((approx(&h) - 8f64.ln() / 2.0).abs() < 1e-15);
        assert_eq!(QuadraticNumber::int(0).height(64), Err(Error::ZeroInput));
    }

    #[test]
    fn minimal_polynomial_clears_denominators() {
        // (b-1)/(2 sqrt 2 d1) with b = 10, d1 = 1 is (9/4) sqrt 2, root of 8X^2 - 81.
        let x = q((0, 1), (9, 4));
        assert_eq!(x.minimal_polynomial(), vec![8.into(), 0.into(), (-81).into()]);
        let h = x.height(128).unwrap();
        let expect = (8f64.ln() + 2.0 * (9.0 * 2f64.sqrt() / 4.0).ln()) / 2.0;
        assert!((approx(&h) - expect).abs() < 1e-14);
    }

    #[test]
    fn signs_and_powers() {
        assert_eq!(QuadraticNumber::beta().signum(), Ordering::Less);
        assert_eq!(q((3, 1), (-2, 1)).signum(), Ordering::Greater);
        assert_eq!(q((-3, 1), (2, 1)).signum(), Ordering::Less);
        let a5 = QuadraticNumber::alpha().pow(5).unwrap();
        let b5 = QuadraticNumber::beta().pow(5).unwrap();
        // alpha^5 + beta^5 = Q(5) = 82
        assert_eq!(a5.clone() + b5.clone(), QuadraticNumber::int(82));
        assert_eq!(
            (a5 - b5).checked_div(&q((0, 1), (2, 1))).unwrap(),
            QuadraticNumber::int(29)
        );
        let inv = QuadraticNumber::alpha().pow(-1).unwrap();
        assert_eq!(inv, q((-1, 1), (1, 1)));
    }

    #[test]
    fn exact_interval_agreement() {
        let x = q((7, 3), (-5, 2));
        let iv = eval(&x.to_expr(), 128).unwrap();
        assert!(iv.hi() < &Dyadic::zero());
        assert_eq!(x.signum(), Ordering::Less);
    }

    fn small_q() -> impl Strategy<Value = QuadraticNumber> {
        (-30i64..=30, 1i64..=12, -30i64..=30, 1i64..=12)
            .prop_map(|(a, b, c, d)| q((a, b), (c, d)))
            .prop_filter("nonzero", |x| !x.is_zero())
    }

    fn hi(iv: &Interval) -> BigRational {
        iv.hi().to_rational()
    }

    fn lo(iv: &Interval) -> BigRational {
        iv.lo().to_rational()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn product_rule(x in small_q(), y in small_q()) {
            let bits = 96;
            let hxy = (&x * &y).height(bits).unwrap();
            let sum = hx_plus_hy(&x, &y, bits);
            prop_assert!(lo(&hxy) <= sum);
        }

        #[test]
        fn sum_rule(x in small_q(), y in small_q()) {
            let bits = 96;
            for z in [&x + &y, &x - &y] {
                if z.is_zero() {
                    continue;
                }
                let hz = z.height(bits).unwrap();
                let bound = hx_plus_hy(&x, &y, bits) + hi(&eval(&RealExpr::int(2).log(), bits).unwrap());
                prop_assert!(lo(&hz) <= bound);
            }
        }

        #[test]
        fn power_rule(x in small_q(), s in -4i32..=4) {
            let bits = 128;
            let hs = x.pow(s).unwrap().height(bits).unwrap();
            let h = x.height(bits).unwrap();
            let k = BigRational::from_integer(BigInt::from(s.unsigned_abs()));
            let tol = BigRational::new(1.into(), BigInt::one() << 90u32);
            prop_assert!(lo(&hs) <= &k * hi(&h) + &tol);
            prop_assert!(hi(&hs) + &tol >= &k * lo(&h));
        }

        #[test]
        fn signum_matches_intervals(x in small_q()) {
            let iv = eval(&x.to_expr(), 128).unwrap();
            let expected = if iv.is_positive() { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(x.signum(), expected);
        }
    }

    fn hx_plus_hy(x: &QuadraticNumber, y: &QuadraticNumber, bits: u32) -> BigRational {
        hi(&x.height(bits).unwrap()) + hi(&y.height(bits).unwrap())
    }
}
