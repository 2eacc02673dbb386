//! Initial bounds from two linear forms in three logarithms.
//!
//! The first form `(b-1)/(c d1) * alpha^n * b^-(l1+l2) - 1` bounds `l1`
//! against `log n`; the second, whose first algebraic number has height
//! growing with `l1`, then bounds `n` outright. Every constant the argument
//! relies on is re-checked here with certified arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matveev::leading_constant_expr;
use super::quadratic::QuadraticNumber;
use crate::error::{Error, Result};
use crate::precision::{eval, parse_decimal, Interval, Precision, RealExpr};
use crate::repdigits::{MAX_BASE, MIN_BASE};
use crate::sequences::SequenceKind;

/// Hand-chosen constants of the argument for one sequence. They are inputs,
/// not outputs: [`derive_initial_bounds`] certifies each before use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceParameters {
    pub kind: SequenceKind,
    /// The argument assumes `n > n_threshold`.
    pub n_threshold: u32,
    /// The first reduction assumes `l1 >= l1_threshold`.
    pub l1_threshold: u32,
    pub a1: &'static str,
    pub a2: &'static str,
    pub a3: &'static str,
    /// `|Gamma_first| < first_residue / b^l1`.
    pub first_residue: &'static str,
    /// `|Gamma_second| < second_residue / alpha^n`.
    pub second_residue: &'static str,
    /// `h(gamma_1) <= height_coefficient * (1 + log 1.3n)` in the second form.
    pub height_coefficient: &'static str,
    /// `l1 + l2 < growth * n`.
    pub growth: &'static str,
    /// `(l1 + l2) log b - offset < n log alpha`.
    pub offset: &'static str,
    pub reduction_a_l1: &'static str,
    pub reduction_a_n: &'static str,
}

pub fn parameters(kind: SequenceKind) -> SequenceParameters {
    match kind {
        SequenceKind::Pell => SequenceParameters {
            kind,
            n_threshold: 110,
            l1_threshold: 5,
            a1: "9.5",
            a2: "0.89",
            a3: "4.7",
            first_residue: "9.1",
            second_residue: "3",
            height_coefficient: "3.87e13",
            growth: "1.3",
            offset: "1.5",
            reduction_a_l1: "20.7",
            reduction_a_n: "6.81",
        },
        SequenceKind::PellLucas => SequenceParameters {
            kind,
            n_threshold: 300,
            l1_threshold: 6,
            a1: "4.4",
            a2: "0.89",
            a3: "4.7",
            first_residue: "27",
            second_residue: "2",
            height_coefficient: "2e13",
            growth: "1.3",
            offset: "3.2",
            reduction_a_l1: "62",
            reduction_a_n: "4.6",
        },
    }
}

fn dec(s: &str) -> RealExpr {
    RealExpr::decimal(s)
}

pub fn decimal_value(s: &str) -> BigRational {
    parse_decimal(s).unwrap_or_else(|| panic!("bad decimal literal {s}"))
}

fn ln_alpha() -> RealExpr {
    RealExpr::alpha().log()
}

/// `d1 b^l1 - (d1 - d2)`, the leading part of the repdigit value.
pub fn head_value(b: u32, d1: u32, d2: u32, l1: u32) -> BigInt {
    BigInt::from(d1) * BigInt::from(b).pow(l1) - (BigInt::from(d1) - BigInt::from(d2))
}

impl SequenceParameters {
    /// `gamma_1` of the first form.
    pub fn first_gamma(&self, b: u32, d1: u32) -> QuadraticNumber {
        match self.kind {
            // (b-1)/(2 sqrt2 d1) = ((b-1)/(4 d1)) sqrt 2
            SequenceKind::Pell => QuadraticNumber::new(
                BigRational::zero(),
                BigRational::new((b - 1).into(), (4 * d1).into()),
            ),
            SequenceKind::PellLucas => QuadraticNumber::ratio(b - 1, d1),
        }
    }

    /// `gamma_1` of the second form.
    pub fn second_gamma(&self, b: u32, d1: u32, d2: u32, l1: u32) -> QuadraticNumber {
        let x = head_value(b, d1, d2, l1);
        match self.kind {
            SequenceKind::Pell => QuadraticNumber::new(
                BigRational::zero(),
                BigRational::new(x * 2, (b - 1).into()),
            ),
            SequenceKind::PellLucas => QuadraticNumber::rational(BigRational::new(x, (b - 1).into())),
        }
    }

    /// Additive constant `K` in `h(gamma_1) <= K + l1 log b` for the second form.
    pub fn height_constant_expr(&self) -> RealExpr {
        let base = RealExpr::int(9).log() * RealExpr::int(3) + RealExpr::int(2).log();
        match self.kind {
            SequenceKind::Pell => RealExpr::int(8).log() / RealExpr::int(2) + base,
            SequenceKind::PellLucas => base,
        }
    }

    /// Upper bound on `(b-1)|beta|^n + ...` divided through, for one digit
    /// triple: the residue of the first form at `n = n_threshold + 1`.
    fn first_residue_expr(&self, b: u32, d1: u32, d2: u32) -> RealExpr {
        let tail = RealExpr::int(b - 1) * RealExpr::alpha().pow(-(self.n_threshold as i32 + 1))
            / RealExpr::int(b);
        let spread = RealExpr::int(d1.abs_diff(d2)) + RealExpr::ratio(d2, b);
        match self.kind {
            SequenceKind::Pell => {
                let c = RealExpr::int(2) * RealExpr::int(2).sqrt();
                (tail + c.clone() * spread) / (c * RealExpr::int(d1))
            }
            SequenceKind::PellLucas => (tail + spread) / RealExpr::int(d1),
        }
    }

    fn second_residue_expr(&self) -> RealExpr {
        let tail = RealExpr::alpha().pow(-(self.n_threshold as i32 + 1));
        match self.kind {
            // d2 / (b-1) <= 1
            SequenceKind::Pell => tail + RealExpr::int(2) * RealExpr::int(2).sqrt(),
            SequenceKind::PellLucas => tail + RealExpr::int(1),
        }
    }

    /// Exponent shift `s` in `b^(l1+l2-1) < x(n) <= alpha^(n+s)`.
    fn upper_growth_shift(&self) -> i32 {
        match self.kind {
            SequenceKind::Pell => -1,
            SequenceKind::PellLucas => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub holds: bool,
}

/// Chain of derived bounds for one sequence.
#[derive(Clone, Debug, Serialize)]
pub struct BoundLedger {
    pub kind: SequenceKind,
    pub parameters: SequenceParameters,
    /// Leading constant of the first form.
    #[serde(serialize_with = "crate::serial::interval")]
    pub c_first: Interval,
    /// `D * height_coefficient`, the `A_1` of the second form (times `1 + log 1.3n`).
    #[serde(serialize_with = "crate::serial::rational")]
    pub a1_second: BigRational,
    /// Leading constant of the second form.
    #[serde(serialize_with = "crate::serial::interval")]
    pub c_second: Interval,
    /// Every solution with `n > n_threshold` has `n < n_max`.
    #[serde(serialize_with = "crate::serial::bigint")]
    pub n_max: BigInt,
    /// Per base, every solution has `l1 + l2 <= l1l2_max[b]`.
    #[serde(serialize_with = "crate::serial::bigint_map")]
    pub l1l2_max: BTreeMap<u32, BigInt>,
    pub certificates: Vec<Certificate>,
}

impl BoundLedger {
    pub fn m_for_base(&self, b: u32) -> &BigInt {
        &self.l1l2_max[&b]
    }
}

/// Decides `lhs < rhs` (or `<=`) from enclosures; undecided counts as false.
fn certified_less(lhs: &RealExpr, rhs: &RealExpr, bits: u32, strict: bool) -> Result<bool> {
    let diff = eval(&(rhs.clone() - lhs.clone()), bits)?;
    Ok(if strict {
        diff.is_positive()
    } else {
        !diff.lo().is_negative()
    })
}

fn certify(p: &SequenceParameters, c_first: &Interval, bits: u32) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    let mut record = |name: String, holds: bool| out.push(Certificate { name, holds });
    let a1 = dec(p.a1);
    let d = RealExpr::int(2);

    let mut ok = true;
    for b in MIN_BASE..=MAX_BASE {
        for d1 in 1..b {
            let g = p.first_gamma(b, d1);
            ok &= certified_less(&(d.clone() * g.height_expr()?), &a1, bits, false)?;
            let log_abs = g.log_abs_expr()?;
            ok &= certified_less(&log_abs, &a1, bits, false)?;
            ok &= certified_less(&(-log_abs), &a1, bits, false)?;
        }
    }
    record("A1 >= max(D h(gamma1), |log gamma1|) for every base and leading digit".into(), ok);

    let a2_need = ln_alpha();
    record(
        "A2 >= D h(alpha) = log alpha".into(),
        certified_less(&a2_need, &dec(p.a2), bits, false)?,
    );
    record(
        "A3 >= D h(b) = 2 log b for b <= 10".into(),
        certified_less(&(d.clone() * RealExpr::int(MAX_BASE).log()), &dec(p.a3), bits, false)?,
    );
    let floor = dec("0.16");
    record(
        "A1, A2, A3 >= 0.16".into(),
        [p.a1, p.a2, p.a3]
            .iter()
            .try_fold(true, |acc, a| Ok::<_, Error>(acc && certified_less(&floor, &dec(a), bits, false)?))?,
    );

    let mut ok = true;
    for b in MIN_BASE..=MAX_BASE {
        for d1 in 1..b {
            for d2 in (0..b).filter(|&x| x != d1) {
                ok &= certified_less(&p.first_residue_expr(b, d1, d2), &dec(p.first_residue), bits, true)?;
            }
        }
    }
    record(format!("first form residue < {} / b^l1", p.first_residue), ok);
    record(
        format!("second form residue < {} / alpha^n", p.second_residue),
        certified_less(&p.second_residue_expr(), &dec(p.second_residue), bits, true)?,
    );

    let half = RealExpr::ratio(1, 2);
    record(
        format!("{} / 2^{} < 1/2", p.first_residue, p.l1_threshold),
        certified_less(
            &(dec(p.first_residue) / RealExpr::int(2).pow(p.l1_threshold as i32)),
            &half,
            bits,
            true,
        )?,
    );
    record(
        format!("{} / alpha^{} < 1/2", p.second_residue, p.n_threshold + 1),
        certified_less(
            &(dec(p.second_residue) / RealExpr::alpha().pow(p.n_threshold as i32 + 1)),
            &half,
            bits,
            true,
        )?,
    );
    // |Lambda| < 2 r once |e^Lambda - 1| < r < 1/2; then divide by log alpha.
    record(
        format!("2 * {} / log alpha <= {}", p.first_residue, p.reduction_a_l1),
        certified_less(
            &(RealExpr::int(2) * dec(p.first_residue) / ln_alpha()),
            &dec(p.reduction_a_l1),
            bits,
            false,
        )?,
    );
    record(
        format!("2 * {} / log alpha <= {}", p.second_residue, p.reduction_a_n),
        certified_less(
            &(RealExpr::int(2) * dec(p.second_residue) / ln_alpha()),
            &dec(p.reduction_a_n),
            bits,
            false,
        )?,
    );

    // l1 + l2 < (n + s) log alpha / log 2 + 1 <= growth * n for n > threshold.
    let n0 = RealExpr::int(p.n_threshold + 1);
    let tau2 = ln_alpha() / RealExpr::int(2).log();
    let lhs = (n0.clone() + RealExpr::int(p.upper_growth_shift())) * tau2.clone() + RealExpr::int(1);
    let growth_ok = certified_less(&lhs, &(dec(p.growth) * n0), bits, false)?
        && certified_less(&tau2, &dec(p.growth), bits, true)?;
    record(format!("l1 + l2 < {} n", p.growth), growth_ok);

    let sign = RealExpr::int(p.upper_growth_shift());
    let offset_need = RealExpr::int(MAX_BASE).log() + sign * ln_alpha();
    record(
        format!("(l1 + l2) log b - {} < n log alpha", p.offset),
        certified_less(&offset_need, &dec(p.offset), bits, false)?,
    );

    // h(gamma1) <= K + l1 log b < K + log r1 + C1 (1 + log 1.3n), and
    // 1 + log 1.3n >= 1 + log(1.3 (threshold + 1)).
    let c1_hi = RealExpr::rational(c_first.hi().to_rational());
    let spread = (p.height_constant_expr() + dec(p.first_residue).log())
        / (RealExpr::int(1) + (dec(p.growth) * RealExpr::int(p.n_threshold + 1)).log());
    record(
        format!("h(gamma1) <= {} (1 + log 1.3n) in the second form", p.height_coefficient),
        certified_less(&(c1_hi + spread), &dec(p.height_coefficient), bits, false)?,
    );
    Ok(out)
}

/// `f(n) = n log alpha - c (1 + log(growth n))^2 - log r`.
fn index_gap(n: &BigInt, c: &BigRational, growth: &str, log_r: &RealExpr) -> RealExpr {
    let n = RealExpr::int(n.clone());
    let inner = RealExpr::int(1) + (dec(growth) * n.clone()).log();
    n * ln_alpha() - RealExpr::rational(c.clone()) * inner.pow(2) - log_r.clone()
}

pub const INDEX_SEARCH_LIMIT_EXP: u32 = 40;

/// Smallest `N` found by bisection with `f(N) > 0` certified, where `f` is
/// as in [`index_gap`]. `f` is convex, so `f(start) < 0 < f(N)` gives
/// `f > 0` on `[N, oo)`: every `n >= start` with `f(n) < 0` satisfies `n < N`.
pub fn index_bound(
    c: &BigRational,
    growth: &str,
    log_r: &RealExpr,
    start: &BigInt,
    bits: u32,
) -> Result<BigInt> {
    let positive = |n: &BigInt| -> Result<bool> {
        Ok(eval(&index_gap(n, c, growth, log_r), bits)?.is_positive())
    };
    let limit = BigInt::from(10u32).pow(INDEX_SEARCH_LIMIT_EXP);
    if !positive(&limit)? {
        return Err(Error::NoFixpoint {
            limit: format!("1e{INDEX_SEARCH_LIMIT_EXP}"),
        });
    }
    if !eval(&index_gap(start, c, growth, log_r), bits)?.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "index inequality is not certified to hold at n = {start}"
        )));
    }
    let (mut lo, mut hi) = (start.clone(), limit);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        if positive(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `floor((n log alpha + offset) / log b)`, rounded up through the enclosure.
pub fn l1l2_bound(n: &BigInt, offset: &str, b: u32, bits: u32) -> Result<BigInt> {
    let e = (RealExpr::int(n.clone()) * ln_alpha() + dec(offset)) / RealExpr::int(b).log();
    Ok(eval(&e, bits)?.hi().floor())
}

pub fn leading_constant(a: [&RealExpr; 3], bits: u32) -> Result<Interval> {
    let a: Vec<RealExpr> = a.into_iter().cloned().collect();
    eval(&leading_constant_expr(3, 2, &a), bits)
}

/// Working precision for the initial bounds.
pub fn ledger_bits(precision: &Precision) -> u32 {
    precision.start_bits.max(256).min(precision.max_bits.max(64))
}

pub fn derive_initial_bounds(kind: SequenceKind, precision: &Precision) -> Result<BoundLedger> {
    let p = parameters(kind);
    let bits = ledger_bits(precision);
    let c_first = leading_constant([&dec(p.a1), &dec(p.a2), &dec(p.a3)], bits)?;
    let certificates = certify(&p, &c_first, bits)?;
    if let Some(bad) = certificates.iter().find(|c| !c.holds) {
        return Err(Error::InvalidParameter(format!("certificate failed: {}", bad.name)));
    }
    let a1_second = BigRational::from_integer(BigInt::from(2)) * decimal_value(p.height_coefficient);
    let c_second = leading_constant(
        [&RealExpr::rational(a1_second.clone()), &dec(p.a2), &dec(p.a3)],
        bits,
    )?;
    let n_max = index_bound(
        &c_second.hi().to_rational(),
        p.growth,
        &dec(p.second_residue).log(),
        &BigInt::from(p.n_threshold + 1),
        bits,
    )?;
    let mut l1l2_max = BTreeMap::new();
    for b in MIN_BASE..=MAX_BASE {
        l1l2_max.insert(b, l1l2_bound(&n_max, p.offset, b, bits)?);
    }
    debug_assert!(c_second.lo().cmp(c_first.hi()) == Ordering::Greater);
    Ok(BoundLedger {
        kind,
        parameters: p,
        c_first,
        a1_second,
        c_second,
        n_max,
        l1l2_max,
        certificates,
    })
}
