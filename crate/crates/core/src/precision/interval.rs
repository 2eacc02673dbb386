use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{format_sci, shr_round, Dyadic, Rounding};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints. `bits` is the working
/// precision that produced it; arithmetic rounds results outward to the
/// larger precision of the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi, bits }
    }

    pub fn point(x: Dyadic, bits: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Self {
        Self::point(Dyadic::from_int(n.clone()), bits)
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        if r.is_integer() {
            return Self::from_int(r.numer(), bits);
        }
        Interval {
            lo: Dyadic::from_rational(r, bits, Rounding::Down),
            hi: Dyadic::from_rational(r, bits, Rounding::Up),
            bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(mut self, bits: u32) -> Self {
        self.bits = bits;
        self
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Largest absolute value of any point in the interval.
    pub fn mag(&self) -> Dyadic {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    /// Decimal lower bound with `digits` significant digits.
    pub fn lo_sci(&self, digits: u32) -> String {
        format_sci(&self.lo.to_rational(), digits, Rounding::Down)
    }

    /// Decimal upper bound with `digits` significant digits.
    pub fn hi_sci(&self, digits: u32) -> String {
        format_sci(&self.hi.to_rational(), digits, Rounding::Up)
    }

    pub fn midpoint_f64(&self) -> f64 {
        (&self.lo + &self.hi).mul_pow2(-1).to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// The common floor of every point, if the interval does not straddle an
    /// integer.
    pub fn floor(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        (f == self.hi.floor()).then_some(f)
    }

    /// Nearest integer (certified) and an enclosure of the distance to it.
    pub fn distance_to_nearest(&self) -> Option<(Interval, BigInt)> {
        let half = Dyadic::pow2(-1);
        let n = (&self.lo + &half).floor();
        if n != (&self.hi + &half).floor() {
            return None;
        }
        let nd = Dyadic::from_int(n.clone());
        let (a, b) = (&self.lo - &nd, &self.hi - &nd);
        let dist = if !a.is_negative() {
            Interval::new(a, b, self.bits)
        } else if !b.is_positive() {
            Interval::new(-b, -a, self.bits)
        } else {
            let top = if -&a > b { -a } else { b };
            Interval::new(Dyadic::zero(), top, self.bits)
        };
        Some((dist, n))
    }

    /// Enclosure of `||x||`, the distance to the nearest integer. Unlike
    /// [`Interval::distance_to_nearest`] this is defined across half-integers;
    /// `None` only when the width reaches 1.
    pub fn distance_to_integers(&self) -> Option<Interval> {
        if self.width() >= Dyadic::one() {
            return None;
        }
        let half = Dyadic::pow2(-1);
        let dist = |x: &Dyadic| (x - &Dyadic::from_int((x + &half).floor())).abs();
        let (a, b) = (dist(&self.lo), dist(&self.hi));
        let lo = if self.lo.floor() != self.hi.floor() || self.lo.ceil() == self.lo.floor() {
            Dyadic::zero()
        } else if a < b {
            a.clone()
        } else {
            b.clone()
        };
        let hi = if (&self.lo + &half).floor() != (&self.hi + &half).floor() {
            half
        } else if a > b {
            a
        } else {
            b
        };
        Some(Interval::new(lo, hi, self.bits))
    }

    fn outward(lo: Dyadic, hi: Dyadic, bits: u32) -> Interval {
        Interval {
            lo: lo.round(bits, Rounding::Down),
            hi: hi.round(bits, Rounding::Up),
            bits,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let bits = self.bits.max(other.bits);
        Self::outward(&self.lo + &other.lo, &self.hi + &other.hi, bits)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let bits = self.bits.max(other.bits);
        Self::outward(&self.lo - &other.hi, &self.hi - &other.lo, bits)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let bits = self.bits.max(other.bits);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self::outward(lo, hi, bits)
    }

    /// Exact product with an integer; no rounding, so the absolute width
    /// scales with `|n|`.
    pub fn mul_int(&self, n: &BigInt) -> Interval {
        let k = Dyadic::from_int(n.clone());
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if n.is_negative() {
            Interval::new(b, a, self.bits)
        } else {
            Interval::new(a, b, self.bits)
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: one.div(&self.hi, self.bits, Rounding::Down),
            hi: one.div(&self.lo, self.bits, Rounding::Up),
            bits: self.bits,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let bits = self.bits.max(other.bits);
        let quotients = |dir| {
            [
                self.lo.div(&other.lo, bits, dir),
                self.lo.div(&other.hi, bits, dir),
                self.hi.div(&other.lo, bits, dir),
                self.hi.div(&other.hi, bits, dir),
            ]
        };
        let lo = quotients(Rounding::Down).into_iter().min().unwrap();
        let hi = quotients(Rounding::Up).into_iter().max().unwrap();
        Ok(Interval { lo, hi, bits })
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: self.mag(),
                bits: self.bits,
            }
        }
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::SqrtOfNegative);
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.bits, Rounding::Down)
        };
        Ok(Interval {
            lo,
            hi: self.hi.sqrt(self.bits, Rounding::Up),
            bits: self.bits,
        })
    }

    pub fn powi(&self, k: i32) -> Result<Interval> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let k = k as u32;
        let bits = self.bits;
        if k == 0 {
            return Ok(Interval::point(Dyadic::one(), bits));
        }
        if k % 2 == 1 {
            return Ok(Interval {
                lo: self.lo.pow(k, bits, Rounding::Down),
                hi: self.hi.pow(k, bits, Rounding::Up),
                bits,
            });
        }
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let lo = if self.contains_zero() {
            Dyadic::zero()
        } else {
            small.pow(k, bits, Rounding::Down)
        };
        Ok(Interval {
            lo,
            hi: large.pow(k, bits, Rounding::Up),
            bits,
        })
    }

    /// Natural logarithm; the interval must lie strictly right of zero.
    pub fn ln(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::LogOfIntervalTouchingZero);
        }
        let work = self.bits + 32;
        let ln2 = ln2_scaled(work);
        let lo = ln_bound(&self.lo, work, &ln2, Rounding::Down);
        let hi = ln_bound(&self.hi, work, &ln2, Rounding::Up);
        Ok(Self::outward(lo, hi, self.bits))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.bits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Bounds `(lo, hi)` on `2^w * atanh(num/den)` for `0 <= num/den <= 1/3`.
///
/// Every truncated division undershoots by less than one unit, and the
/// undershoot of the running power is damped by `z^2 <= 1/9`, so each
/// series term is low by at most 2.2 units; the neglected tail after the
/// power underflows is below 1.3 units.
fn atanh_scaled(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!num.is_negative() && num * 3 <= *den);
    let num2 = num * num;
    let den2 = den * den;
    let mut t = (num << w as u64) / den;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * j + 1);
        t = (t * &num2) / &den2;
        j += 1;
    }
    let slack = BigInt::from(3 * j + 2);
    let hi = &sum + slack;
    (sum, hi)
}

/// `ln 2 = 2 atanh(1/3)`, scaled by `2^w`.
fn ln2_scaled(w: u32) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_scaled(&BigInt::one(), &BigInt::from(3), w);
    (lo << 1u32, hi << 1u32)
}

/// Directed bound on `ln x` for `x > 0`, working with `w` fractional bits.
fn ln_bound(x: &Dyadic, w: u32, ln2: &(BigInt, BigInt), dir: Rounding) -> Dyadic {
    debug_assert!(x.is_positive());
    // Trim oversized mantissas first; ln is increasing so rounding the
    // argument in `dir` keeps the bound valid.
    let x = x.round(w + 16, dir);
    let m = x.mantissa();
    let len = m.bits() as i64;
    // x = m * 2^e = y * 2^k with y = m / 2^(len-1) in [1, 2); pick y in
    // [3/4, 3/2) to keep |z| <= 1/5.
    let mut shift = len - 1;
    let mut k = x.exponent() + len - 1;
    let top_two = shr_round(m, (len - 2).max(0) as u64, Rounding::Down);
    if len >= 2 && top_two == BigInt::from(3) {
        shift += 1;
        k += 1;
    }
    // z = (y - 1)/(y + 1) = (m - 2^shift)/(m + 2^shift)
    let p = BigInt::one() << shift as u64;
    let znum = m - &p;
    let zden = m + &p;
    let (s_lo, s_hi) = atanh_scaled(&znum.abs(), &zden, w);
    // ln y = 2 atanh z, odd in z.
    let (y_lo, y_hi) = if znum.is_negative() {
        (-(s_hi << 1u32), -(s_lo << 1u32))
    } else {
        (s_lo << 1u32, s_hi << 1u32)
    };
    let kk = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kk * &ln2.0, &kk * &ln2.1)
    } else {
        (&kk * &ln2.1, &kk * &ln2.0)
    };
    let scaled = match dir {
        Rounding::Down => y_lo + k_lo,
        Rounding::Up => y_hi + k_hi,
    };
    Dyadic::new(scaled, -(w as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(n: i64, bits: u32) -> Interval {
        Interval::from_int(&BigInt::from(n), bits)
    }

    #[test]
    fn ln_two_matches_reference() {
        let l = iv(2, 128).ln().unwrap();
        let reference = std::f64::consts::LN_2;
        assert!((l.midpoint_f64() - reference).abs() < 1e-15);
        assert!(l.width() <= Dyadic::pow2(-120));
    }

    #[test]
    fn ln_one_is_zero_enclosure() {
        let l = iv(1, 96).ln().unwrap();
        assert!(l.contains(&Dyadic::zero()));
        assert!(l.width() <= Dyadic::pow2(-90));
    }

    #[test]
    fn ln_small_and_large_arguments() {
        let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), 128);
        let l = third.ln().unwrap();
        assert!((l.midpoint_f64() + 1.098_612_288_668_109_7).abs() < 1e-15);
        let big = Interval::from_int(&(BigInt::from(10).pow(40u32)), 128);
        let l = big.ln().unwrap();
        assert!((l.midpoint_f64() - 92.103_403_719_761_83).abs() < 1e-12);
    }

    #[test]
    fn ln_rejects_non_positive() {
        let z = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64);
        assert_eq!(z.ln(), Err(Error::LogOfIntervalTouchingZero));
    }

    #[test]
    fn division_by_zero_interval() {
        let z = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64);
        assert_eq!(iv(1, 64).div(&z), Err(Error::DivisionByIntervalContainingZero));
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let x = Interval::new(Dyadic::from_int(-2), Dyadic::from_int(1), 64);
        let sq = x.powi(2).unwrap();
        assert_eq!(sq.lo(), &Dyadic::zero());
        assert_eq!(sq.hi(), &Dyadic::from_int(4));
    }

    #[test]
    fn nearest_distance() {
        let x = Interval::from_rational(&BigRational::new(7.into(), 3.into()), 64);
        let (d, n) = x.distance_to_nearest().unwrap();
        assert_eq!(n, BigInt::from(2));
        assert!(d.contains_rational(&BigRational::new(1.into(), 3.into())));
        let straddle = Interval::new(Dyadic::new(BigInt::from(1), -2), Dyadic::new(BigInt::from(3), -2), 64);
        assert!(straddle.distance_to_nearest().is_none());
    }

    #[test]
    fn distance_across_half_integers() {
        let d = |lo: i64, hi: i64| {
            Interval::new(Dyadic::new(lo.into(), -3), Dyadic::new(hi.into(), -3), 64)
                .distance_to_integers()
                .map(|iv| (iv.lo().to_f64(), iv.hi().to_f64()))
        };
        // [11/8, 13/8] straddles 3/2
        assert_eq!(d(11, 13), Some((0.375, 0.5)));
        assert_eq!(d(9, 10), Some((0.125, 0.25)));
        // [7/8, 9/8] contains 1
        assert_eq!(d(7, 9), Some((0.0, 0.125)));
        assert_eq!(d(0, 8), None);
        let r = Interval::from_rational(&BigRational::new(7.into(), 2.into()), 64);
        assert_eq!(r.distance_to_integers().unwrap().lo().to_f64(), 0.5);
    }
}
