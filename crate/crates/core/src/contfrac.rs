//! Certified continued fractions of irrational reals.
//!
//! Quotients come from running Euclid on both ends of an enclosure of the
//! number and keeping the common prefix: every real between two numbers
//! sharing the prefix `[a0; ..., ak]` (with more quotients to follow in both)
//! shares it too, so each emitted quotient is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{eval, Precision, RealExpr};

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    tau: RealExpr,
    precision: Precision,
    bits_used: u32,
    quotients: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
}

/// Serializable dump of an expansion.
#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub expr: String,
    pub bits: u32,
    #[serde(serialize_with = "ser_ints")]
    pub quotients: Vec<BigInt>,
    #[serde(serialize_with = "ser_pairs")]
    pub convergents: Vec<(BigInt, BigInt)>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_pairs<S: serde::Serializer>(
    v: &[(BigInt, BigInt)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(p, q)| [p.to_string(), q.to_string()]))
}

/// Euclid on a rational; the last quotient of a finite expansion is kept.
fn rational_quotients(r: &BigRational) -> Vec<BigInt> {
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (a, rem) = num.div_mod_floor(&den);
        out.push(a);
        num = std::mem::replace(&mut den, rem);
    }
    out
}

/// Quotients shared by every real in `[lo, hi]`.
fn common_prefix(lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let a = rational_quotients(lo);
    let b = rational_quotients(hi);
    // The final quotient of a finite expansion is ambiguous ([.., k] = [.., k-1, 1]).
    let usable = a.len().min(b.len()).saturating_sub(1);
    a.into_iter()
        .zip(b)
        .take(usable)
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x)
        .collect()
}

fn convergents_of(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        out.push((p.clone(), q.clone()));
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

impl ContinuedFraction {
    fn empty(tau: RealExpr, precision: Precision) -> Result<Self> {
        if tau.is_exact() {
            return Err(Error::RationalTau);
        }
        Ok(ContinuedFraction {
            tau,
            precision,
            bits_used: 0,
            quotients: Vec::new(),
            convergents: Vec::new(),
        })
    }

    /// Expansion whose last convergent denominator exceeds `threshold`.
    pub fn expand_until_q_exceeds(
        tau: RealExpr,
        threshold: &BigInt,
        precision: &Precision,
    ) -> Result<Self> {
        let mut cf = Self::empty(tau, *precision)?;
        cf.extend_until(|cf| cf.last_q().is_some_and(|q| q > threshold))?;
        Ok(cf)
    }

    /// Expansion with at least `count` quotients.
    pub fn expand_terms(tau: RealExpr, count: usize, precision: &Precision) -> Result<Self> {
        let mut cf = Self::empty(tau, *precision)?;
        cf.extend_to(count)?;
        Ok(cf)
    }

    /// Grows the expansion to at least `count` quotients.
    pub fn extend_to(&mut self, count: usize) -> Result<()> {
        self.extend_until(|cf| cf.len() >= count)
    }

    /// Grows the expansion until the last denominator exceeds `threshold`.
    pub fn extend_past(&mut self, threshold: &BigInt) -> Result<()> {
        self.extend_until(|cf| cf.last_q().is_some_and(|q| q > threshold))
    }

    fn extend_until(&mut self, done: impl Fn(&Self) -> bool) -> Result<()> {
        if done(self) {
            return Ok(());
        }
        let start = self.bits_used;
        for bits in self.precision.schedule().filter(|&b| b > start) {
            let iv = eval(&self.tau, bits)?;
            let prefix = common_prefix(&iv.lo().to_rational(), &iv.hi().to_rational());
            if prefix.len() > self.quotients.len() {
                debug_assert_eq!(&prefix[..self.quotients.len()], &self.quotients[..]);
                self.convergents = convergents_of(&prefix);
                self.quotients = prefix;
            }
            self.bits_used = bits;
            if done(self) {
                return Ok(());
            }
        }
        Err(Error::PrecisionExhausted {
            bits: self.precision.max_bits,
        })
    }

    pub fn tau(&self) -> &RealExpr {
        &self.tau
    }

    pub fn bits_used(&self) -> u32 {
        self.bits_used
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// `(p_k, q_k)` with `p_0 = a_0`, `q_0 = 1`.
    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    fn last_q(&self) -> Option<&BigInt> {
        self.convergents.last().map(|(_, q)| q)
    }

    /// Smallest `N` with `q_N > M` and `a(M) = max(a_0, ..., a_N)`.
    pub fn a_max(&self, m: &BigInt) -> Result<(usize, BigInt)> {
        let n = self
            .convergents
            .iter()
            .position(|(_, q)| q > m)
            .ok_or_else(|| Error::InsufficientExpansion(format!("no denominator exceeds {m}")))?;
        let a = self.quotients[..=n].iter().max().cloned().unwrap_or_default();
        Ok((n, a))
    }

    /// `1 / ((a(M) + 2) y^2)`, a lower bound on `|tau - x/y|` for `0 < y < M`.
    pub fn legendre_lower_bound(&self, m: &BigInt, y: &BigInt) -> Result<BigRational> {
        if !y.is_positive() || y >= m {
            return Err(Error::InvalidParameter(format!("need 0 < y < M, got y = {y}")));
        }
        let (_, a) = self.a_max(m)?;
        Ok(BigRational::new(BigInt::one(), (a + 2u32) * y * y))
    }

    pub fn is_convergent(&self, x: &BigInt, y: &BigInt) -> bool {
        self.convergents.iter().any(|(p, q)| p == x && q == y)
    }

    /// Certifies `|tau - p_k/q_k| < 1/(q_k q_{k+1})` for every `k` with a
    /// successor.
    pub fn approximation_bounds_hold(&self) -> Result<bool> {
        // Twice the expansion precision keeps the last pair decidable.
        let bits = self.bits_used.saturating_mul(2).max(self.precision.start_bits);
        let iv = eval(&self.tau, bits)?;
        let (lo, hi) = (iv.lo().to_rational(), iv.hi().to_rational());
        for w in self.convergents.windows(2) {
            let ((p, q), (_, q_next)) = (&w[0], &w[1]);
            let approx = BigRational::new(p.clone(), q.clone());
            let gap = BigRational::new(BigInt::one(), q * q_next);
            let worst = (&lo - &approx).abs().max((&hi - &approx).abs());
            if worst >= gap {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_expansion(&self) -> Expansion {
        Expansion {
            expr: self.tau.to_string(),
            bits: self.bits_used,
            quotients: self.quotients.clone(),
            convergents: self.convergents.clone(),
        }
    }
}

/// Whether `|tau - x/y| < 1/(2 y^2)`; when it is, `x/y` is asserted to be a
/// convergent of `tau`.
pub fn legendre_locate(
    tau: &RealExpr,
    x: &BigInt,
    y: &BigInt,
    precision: &Precision,
) -> Result<bool> {
    if !y.is_positive() {
        return Err(Error::InvalidParameter(format!("denominator {y} must be positive")));
    }
    let approx = BigRational::new(x.clone(), y.clone());
    let limit = BigRational::new(BigInt::one(), BigInt::from(2) * y * y);
    let mut decided = None;
    for bits in precision.schedule() {
        let iv = eval(tau, bits)?;
        let lo = (iv.lo().to_rational() - &approx).abs();
        let hi = (iv.hi().to_rational() - &approx).abs();
        let contains = iv.contains_rational(&approx);
        let (near, far) = if contains {
            (BigRational::zero(), lo.max(hi))
        } else {
            (lo.clone().min(hi.clone()), lo.max(hi))
        };
        if far < limit {
            decided = Some(true);
            break;
        }
        if near >= limit {
            decided = Some(false);
            break;
        }
    }
    let inside = decided.ok_or(Error::PrecisionExhausted {
        bits: precision.max_bits,
    })?;
    if inside && x.gcd(y).is_one() {
        let cf = ContinuedFraction::expand_until_q_exceeds(tau.clone(), &(y - 1u32), precision)?;
        assert!(cf.is_convergent(x, y), "{x}/{y} is within 1/(2y^2) of tau but not a convergent");
    }
    Ok(inside)
}
