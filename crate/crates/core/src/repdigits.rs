//! Concatenations of two repdigit blocks: `d1` repeated `l1` times followed
//! by `d2` repeated `l2` times, read in base `b`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_BASE: u32 = 2;
pub const MAX_BASE: u32 = 10;

pub fn check_base(b: u32) -> Result<()> {
    if (MIN_BASE..=MAX_BASE).contains(&b) {
        Ok(())
    } else {
        Err(Error::InvalidBase(b))
    }
}

/// Canonical two-block representation. The trailing digit may be zero
/// (`70` in base 10 is `7|0`), the two digits must differ, and the blocks are
/// maximal runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcatRepdigit {
    pub b: u32,
    pub d1: u32,
    pub l1: u32,
    pub d2: u32,
    pub l2: u32,
}

impl ConcatRepdigit {
    pub fn new(b: u32, d1: u32, l1: u32, d2: u32, l2: u32) -> Result<Self> {
        check_base(b)?;
        let bad = |why: &str| Err(Error::InvalidRepdigit(format!("({b},{d1},{l1},{d2},{l2}): {why}")));
        if d1 == 0 || d1 >= b {
            return bad("leading digit must lie in 1..b");
        }
        if d2 >= b {
            return bad("trailing digit must lie in 0..b");
        }
        if d1 == d2 {
            return bad("digits must differ");
        }
        if l1 == 0 || l2 == 0 {
            return bad("block lengths must be positive");
        }
        Ok(ConcatRepdigit { b, d1, l1, d2, l2 })
    }

    /// `(d1 b^(l1+l2) - (d1-d2) b^l2 - d2) / (b-1)`
    pub fn value(&self) -> BigUint {
        let b = BigInt::from(self.b);
        let (d1, d2) = (BigInt::from(self.d1), BigInt::from(self.d2));
        let bl2 = b.pow(self.l2);
        let total = b.pow(self.l1 + self.l2);
        let numer = &d1 * total - (&d1 - &d2) * bl2 - d2;
        let den = BigInt::from(self.b - 1);
        debug_assert!((&numer % &den).is_zero());
        (numer / den).to_biguint().expect("positive value")
    }

    pub fn digit_string(&self) -> String {
        let c1 = char::from_digit(self.d1, 10).unwrap();
        let c2 = char::from_digit(self.d2, 10).unwrap();
        let mut s = String::with_capacity((self.l1 + self.l2) as usize);
        s.extend(std::iter::repeat(c1).take(self.l1 as usize));
        s.extend(std::iter::repeat(c2).take(self.l2 as usize));
        s
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        self.l1 + self.l2
    }
}

impl fmt::Display for ConcatRepdigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.digit_string(), self.b)
    }
}

/// Base-`b` digits, most significant first; `0` gives `[0]`.
pub fn digits(n: &BigUint, b: u32) -> Vec<u32> {
    assert!((MIN_BASE..=MAX_BASE).contains(&b), "base {b} outside 2..=10");
    n.to_radix_be(b).into_iter().map(u32::from).collect()
}

/// The unique two-block decomposition of `n` in base `b`, if its digit
/// string consists of exactly two maximal runs.
pub fn decompose(n: &BigUint, b: u32) -> Option<ConcatRepdigit> {
    if n.is_zero() {
        return None;
    }
    let ds = digits(n, b);
    let split = ds.iter().position(|&d| d != ds[0])?;
    let (head, tail) = ds.split_at(split);
    if tail.iter().any(|&d| d != tail[0]) {
        return None;
    }
    let r = ConcatRepdigit::new(
        b,
        head[0],
        head.len().to_u32()?,
        tail[0],
        tail.len().to_u32()?,
    )
    .ok()?;
    Some(r)
}
