//! Pell and Pell-Lucas numbers.
//!
//! Both satisfy `x(n) = 2 x(n-1) + x(n-2)`; Pell starts `0, 1`, Pell-Lucas
//! starts `2, 2`. With `alpha = 1 + sqrt 2`, `beta = 1 - sqrt 2` the closed
//! forms are `P(n) = (alpha^n - beta^n) / (2 sqrt 2)` and
//! `Q(n) = alpha^n + beta^n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{eval, Interval, Precision, RealExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Pell,
    PellLucas,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 2] = [SequenceKind::Pell, SequenceKind::PellLucas];

    pub fn initial(self) -> (u32, u32) {
        match self {
            SequenceKind::Pell => (0, 1),
            SequenceKind::PellLucas => (2, 2),
        }
    }

    /// `P` or `Q`.
    pub fn symbol(self) -> &'static str {
        match self {
            SequenceKind::Pell => "P",
            SequenceKind::PellLucas => "Q",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Pell => "pell",
            SequenceKind::PellLucas => "pell-lucas",
        }
    }

    /// Binet expression for the `n`-th term.
    pub fn binet(self, n: u32) -> RealExpr {
        let n = n as i32;
        let powers = |sign: bool| {
            let a = RealExpr::alpha().pow(n);
            let b = RealExpr::beta().pow(n);
            if sign {
                a + b
            } else {
                a - b
            }
        };
        match self {
            SequenceKind::Pell => powers(false) / (RealExpr::int(2) * RealExpr::int(2).sqrt()),
            SequenceKind::PellLucas => powers(true),
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pell" | "p" => Ok(SequenceKind::Pell),
            "pell-lucas" | "pell_lucas" | "pelllucas" | "q" => Ok(SequenceKind::PellLucas),
            other => Err(Error::InvalidParameter(format!("unknown sequence {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTerm {
    pub kind: SequenceKind,
    pub n: u32,
    pub value: BigUint,
}

/// Iterator over `x(0), x(1), ...`.
pub struct Terms {
    kind: SequenceKind,
    n: u32,
    cur: BigUint,
    next: BigUint,
}

impl Iterator for Terms {
    type Item = SequenceTerm;

    fn next(&mut self) -> Option<SequenceTerm> {
        let following = (&self.next << 1u32) + &self.cur;
        let value = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, following));
        let term = SequenceTerm {
            kind: self.kind,
            n: self.n,
            value,
        };
        self.n += 1;
        Some(term)
    }
}

pub fn terms(kind: SequenceKind) -> Terms {
    let (a, b) = kind.initial();
    Terms {
        kind,
        n: 0,
        cur: BigUint::from(a),
        next: BigUint::from(b),
    }
}

pub fn term(kind: SequenceKind, n: u32) -> SequenceTerm {
    terms(kind).nth(n as usize).expect("infinite iterator")
}

pub fn terms_up_to(kind: SequenceKind, n_max: u32) -> Vec<SequenceTerm> {
    terms(kind).take(n_max as usize + 1).collect()
}

/// Whether the interval enclosure of the Binet expression contains the
/// recurrence value.
pub fn binet_check(kind: SequenceKind, n: u32, bits: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParameter("binet_check needs n >= 1".into()));
    }
    let iv = eval(&kind.binet(n), bits)?;
    let exact = BigRational::from_integer(BigInt::from(term(kind, n).value));
    Ok(iv.contains_rational(&exact))
}

/// Certifies `alpha^(n-2) <= P(n) <= alpha^(n-1)` or
/// `alpha^(n-2) <= Q(n) < alpha^(n+1)`.
pub fn growth_bounds_hold(kind: SequenceKind, n: u32, precision: &Precision) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParameter("growth bounds need n >= 1".into()));
    }
    let value = BigRational::from_integer(BigInt::from(term(kind, n).value));
    let upper_exp = match kind {
        SequenceKind::Pell => n as i32 - 1,
        SequenceKind::PellLucas => n as i32 + 1,
    };
    let lower = RealExpr::alpha().pow(n as i32 - 2);
    let upper = RealExpr::alpha().pow(upper_exp);
    let strict_upper = kind == SequenceKind::PellLucas;
    for bits in precision.schedule() {
        let lo_iv = eval(&lower, bits)?;
        let up_iv = eval(&upper, bits)?;
        match (decide_le(&lo_iv, &value, false), decide_ge(&up_iv, &value, strict_upper)) {
            (Some(a), Some(b)) => return Ok(a && b),
            (Some(false), _) | (_, Some(false)) => return Ok(false),
            _ => continue,
        }
    }
    Err(Error::PrecisionExhausted {
        bits: precision.max_bits,
    })
}

/// Decides `x <= v` for every `x` in `iv`, `None` if undecided.
fn decide_le(iv: &Interval, v: &BigRational, strict: bool) -> Option<bool> {
    let (lo, hi) = (iv.lo().to_rational(), iv.hi().to_rational());
    let holds = if strict { hi < *v } else { hi <= *v };
    let fails = if strict { lo >= *v } else { lo > *v };
    if holds {
        Some(true)
    } else if fails {
        Some(false)
    } else {
        None
    }
}

/// Decides `x >= v` (or `x > v` when strict) for every `x` in `iv`.
fn decide_ge(iv: &Interval, v: &BigRational, strict: bool) -> Option<bool> {
    let (lo, hi) = (iv.lo().to_rational(), iv.hi().to_rational());
    let holds = if strict { lo > *v } else { lo >= *v };
    let fails = if strict { hi <= *v } else { hi < *v };
    if holds {
        Some(true)
    } else if fails {
        Some(false)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(kind: SequenceKind, n: u32) -> Vec<u64> {
        terms_up_to(kind, n)
            .into_iter()
            .map(|t| u64::try_from(t.value).unwrap())
            .collect()
    }

    #[test]
    fn known_terms() {
        assert_eq!(term(SequenceKind::Pell, 11).value, BigUint::from(5741u32));
        assert_eq!(term(SequenceKind::Pell, 0).value, BigUint::from(0u32));
        assert_eq!(term(SequenceKind::PellLucas, 5).value, BigUint::from(82u32));
    }

    #[test]
    fn prefixes() {
        assert_eq!(values(SequenceKind::Pell, 5), vec![0, 1, 2, 5, 12, 29]);
        assert_eq!(values(SequenceKind::PellLucas, 4), vec![2, 2, 6, 14, 34]);
        assert_eq!(values(SequenceKind::Pell, 0), vec![0]);
        let ts = terms_up_to(SequenceKind::PellLucas, 7);
        assert!(ts.iter().enumerate().all(|(i, t)| t.n as usize == i));
    }

    #[test]
    fn binet_examples() {
        assert!(binet_check(SequenceKind::Pell, 11, 128).unwrap());
        assert!(binet_check(SequenceKind::PellLucas, 2, 128).unwrap());
        assert!(binet_check(SequenceKind::Pell, 1, 64).unwrap());
        assert!(binet_check(SequenceKind::Pell, 0, 64).is_err());
    }

    #[test]
    fn binet_rejects_wrong_value() {
        // The Pell-Lucas closed form evaluated at n must not contain P(n).
        let iv = eval(&SequenceKind::PellLucas.binet(6), 128).unwrap();
        let p6 = BigRational::from_integer(BigInt::from(term(SequenceKind::Pell, 6).value));
        assert!(!iv.contains_rational(&p6));
    }

    #[test]
    fn growth_bounds_small_n() {
        let p = Precision::default();
        for n in 1..=40 {
            assert!(growth_bounds_hold(SequenceKind::Pell, n, &p).unwrap(), "P({n})");
            assert!(growth_bounds_hold(SequenceKind::PellLucas, n, &p).unwrap(), "Q({n})");
        }
    }

    #[test]
    fn parses_kinds() {
        assert_eq!("pell".parse::<SequenceKind>().unwrap(), SequenceKind::Pell);
        assert_eq!("Pell-Lucas".parse::<SequenceKind>().unwrap(), SequenceKind::PellLucas);
        assert!("fib".parse::<SequenceKind>().is_err());
    }
}
