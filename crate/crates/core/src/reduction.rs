//! Reduction of the huge initial bounds.
//!
//! Both stages have the shape `0 < |u tau - v + mu| < A B^-w` with
//! `u <= M`. When `mu` is not an integer multiple of `tau` the Dujella-Petho
//! lemma applies: for a convergent `p/q` of `tau` with `q > 6M` and
//! `eps = ||mu q|| - M ||tau q|| > 0`, every solution has
//! `w < log(A q / eps) / log B`. When `mu = k tau` the form is homogeneous
//! and Legendre's bound `|y tau - v| > 1/((a(M) + 2) y)` is used instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::contfrac::ContinuedFraction;
use crate::error::{Error, Result};
use crate::linforms::{decimal_value, parameters, BoundLedger, QuadraticNumber};
use crate::precision::{eval, Interval, Precision, RealExpr};
use crate::repdigits::check_base;
use crate::sequences::SequenceKind;

/// Convergent denominators tried before giving up on an instance.
pub const MAX_ATTEMPTS: usize = 50;

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub tau: RealExpr,
    pub mu: RealExpr,
    pub a: BigRational,
    pub b: RealExpr,
    pub m: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    /// Index `k` of the convergent used (`q_0 = 1`).
    pub index: usize,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub q_used: BigInt,
    /// Denominators tried, including the successful one.
    pub attempts: usize,
    #[serde(serialize_with = "crate::serial::interval")]
    pub epsilon: Interval,
    pub w_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreOutcome {
    /// Smallest `N` with `q_N` beyond the bound on `|y|`.
    pub index: usize,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub a_m: BigInt,
    /// Bound on `|y|`, where `y = u + k`.
    #[serde(serialize_with = "crate::serial::bigint")]
    pub y_max: BigInt,
    pub shift: i64,
    pub w_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Outcome {
    BakerDavenport(ReductionOutcome),
    Legendre(LegendreOutcome),
}

impl Outcome {
    pub fn w_max(&self) -> u64 {
        match self {
            Outcome::BakerDavenport(o) => o.w_max,
            Outcome::Legendre(o) => o.w_max,
        }
    }
}

/// Shared per-`(tau, M)` state: one expansion reaching [`MAX_ATTEMPTS`]
/// denominators past `6M`, and a high-precision enclosure of `tau`.
#[derive(Clone, Debug)]
pub struct ReductionContext {
    pub cf: ContinuedFraction,
    pub m: BigInt,
    /// Index of the first denominator exceeding `6M`.
    pub start: usize,
    tau_iv: Interval,
    precision: Precision,
}

/// Bits needed so that `M * q * width(tau)` is far below `1/q`.
fn bits_for(q: &BigInt, m: &BigInt) -> u32 {
    (2 * q.bits() + m.bits() + 64) as u32
}

impl ReductionContext {
    pub fn new(tau: RealExpr, m: BigInt, precision: &Precision) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::InvalidParameter(format!("M must be positive, got {m}")));
        }
        let six_m = &m * 6u32;
        let mut cf = ContinuedFraction::expand_until_q_exceeds(tau, &six_m, precision)?;
        let start = cf
            .convergents()
            .iter()
            .position(|(_, q)| q > &six_m)
            .expect("expansion passes 6M");
        cf.extend_to(start + MAX_ATTEMPTS)?;
        let last_q = &cf.convergents()[start + MAX_ATTEMPTS - 1].1;
        let bits = bits_for(last_q, &m).clamp(precision.start_bits, precision.max_bits);
        let tau_iv = eval(cf.tau(), bits)?;
        Ok(ReductionContext {
            cf,
            m,
            start,
            tau_iv,
            precision: *precision,
        })
    }

    pub fn for_base(b: u32, m: BigInt, precision: &Precision) -> Result<Self> {
        check_base(b)?;
        Self::new(RealExpr::log_ratio(b), m, precision)
    }

    fn tau_at(&self, bits: u32) -> Result<Interval> {
        if bits <= self.tau_iv.bits() {
            Ok(self.tau_iv.clone())
        } else {
            eval(self.cf.tau(), bits)
        }
    }

    /// Dujella-Petho for `|u tau - v + mu| < A B^-w`, `u <= M`.
    pub fn baker_davenport(&self, mu: &RealExpr, a: &BigRational, b: &RealExpr) -> Result<ReductionOutcome> {
        let convergents = &self.cf.convergents()[self.start..self.start + MAX_ATTEMPTS];
        let exact_mu = mu.exact();
        let mut mu_iv: Option<Interval> = None;
        for (offset, (_, q)) in convergents.iter().enumerate() {
            let mut bits = bits_for(q, &self.m).clamp(self.precision.start_bits, self.precision.max_bits);
            let epsilon = loop {
                let d_mu = match &exact_mu {
                    // Exact, so a vanishing ||mu q|| is seen as such.
                    Some(r) => Some(Interval::from_rational(&nearest_distance_exact(&(r * q)), bits)),
                    None => {
                        if mu_iv.as_ref().map_or(true, |iv| iv.bits() < bits) {
                            mu_iv = Some(eval(mu, bits)?);
                        }
                        mu_iv.as_ref().and_then(|iv| iv.mul_int(q).distance_to_integers())
                    }
                };
                let tau_cur = self.tau_at(bits)?;
                let d_tau = tau_cur.mul_int(q).distance_to_integers();
                match d_mu.zip(d_tau).map(|(d_mu, d_tau)| d_mu.sub(&d_tau.mul_int(&self.m))) {
                    Some(e) if e.is_positive() => break Some(e),
                    Some(e) if !e.hi().is_positive() => break None,
                    _ if bits >= self.precision.max_bits => break None,
                    _ => bits = bits.saturating_mul(2).min(self.precision.max_bits),
                }
            };
            if let Some(epsilon) = epsilon {
                let w_max = dujella_petho_bound(a, q, &epsilon, b)?;
                return Ok(ReductionOutcome {
                    index: self.start + offset,
                    q_used: q.clone(),
                    attempts: offset + 1,
                    epsilon,
                    w_max,
                });
            }
        }
        Err(Error::EpsilonNeverPositive {
            attempts: MAX_ATTEMPTS,
        })
    }

    /// Legendre route for `|(u + k) tau - v| < A B^-w`, `u <= M`.
    pub fn legendre(&self, shift: i64, a: &BigRational, b: &RealExpr) -> Result<LegendreOutcome> {
        let y_max = &self.m + BigInt::from(shift.unsigned_abs());
        let (index, a_m) = self.cf.a_max(&(&y_max + 1u32))?;
        let value = RealExpr::rational(a * BigRational::from_integer((&a_m + 2u32) * &y_max)).log()
            / b.clone().log();
        let w_max = floor_hi(&value, self.precision.start_bits)?;
        Ok(LegendreOutcome {
            index,
            a_m,
            y_max,
            shift,
            w_max,
        })
    }
}

/// `||x||` for a rational `x`.
fn nearest_distance_exact(x: &BigRational) -> BigRational {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (x - (x + half).floor()).abs()
}

fn floor_hi(e: &RealExpr, bits: u32) -> Result<u64> {
    let f = eval(e, bits)?.hi().floor();
    Ok(f.max(BigInt::zero()).to_u64().unwrap_or(u64::MAX))
}

/// `floor(log(A q / eps_lo) / log B)`, taken from the upper end.
pub fn dujella_petho_bound(a: &BigRational, q: &BigInt, eps: &Interval, b: &RealExpr) -> Result<u64> {
    let ratio = a * BigRational::from_integer(q.clone()) / eps.lo().to_rational();
    let e = RealExpr::rational(ratio).log() / b.clone().log();
    floor_hi(&e, 128)
}

/// Standalone Dujella-Petho reduction of one instance.
pub fn baker_davenport(inst: &ReductionInstance, precision: &Precision) -> Result<ReductionOutcome> {
    let ctx = ReductionContext::new(inst.tau.clone(), inst.m.clone(), precision)?;
    ctx.baker_davenport(&inst.mu, &inst.a, &inst.b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// Bound on `l1` from the first form.
    L1,
    /// Bound on `n` from the second form.
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub d1: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<u32>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyBound {
    pub kind: SequenceKind,
    pub base: u32,
    pub stage: Stage,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub m: BigInt,
    /// Maximum over instances.
    pub raw_bound: u64,
    /// `raw_bound`, raised to `l1_threshold - 1` in the first stage.
    pub bound: u64,
    pub per_instance: Vec<InstanceRecord>,
}

impl FamilyBound {
    /// The instance with the smallest certified epsilon, if any.
    pub fn weakest_epsilon(&self) -> Option<&ReductionOutcome> {
        self.per_instance
            .iter()
            .filter_map(|r| match &r.outcome {
                Outcome::BakerDavenport(o) => Some(o),
                Outcome::Legendre(_) => None,
            })
            .min_by(|x, y| x.epsilon.lo().cmp(y.epsilon.lo()))
    }

    pub fn legendre_instances(&self) -> impl Iterator<Item = (&InstanceRecord, &LegendreOutcome)> {
        self.per_instance.iter().filter_map(|r| match &r.outcome {
            Outcome::Legendre(o) => Some((r, o)),
            Outcome::BakerDavenport(_) => None,
        })
    }
}

/// `Some(j)` when `x = b^j` exactly.
fn rational_power_of(x: &QuadraticNumber, b: u32) -> Option<i64> {
    let r = x.as_rational()?;
    if !r.is_positive() {
        return None;
    }
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let bb = BigInt::from(b);
    let mut j = 0i64;
    while (&num % &bb).is_zero() && num > BigInt::from(1) {
        num /= &bb;
        j += 1;
    }
    while (&den % &bb).is_zero() && den > BigInt::from(1) {
        den /= &bb;
        j -= 1;
    }
    (num == BigInt::from(1) && den == BigInt::from(1)).then_some(j)
}

/// Reduces `|u tau + log(gamma)/log alpha * sign - v|`: `sign = -1` puts
/// `mu = -log(gamma)/log alpha`.
fn reduce_gamma(
    ctx: &ReductionContext,
    gamma: &QuadraticNumber,
    sign: i64,
    b_base: u32,
    a: &BigRational,
    big_b: &RealExpr,
) -> Result<Outcome> {
    if let Some(j) = rational_power_of(gamma, b_base) {
        // mu = sign * j * tau
        return Ok(Outcome::Legendre(ctx.legendre(sign * j, a, big_b)?));
    }
    let log_gamma = gamma.log_abs_expr()? / RealExpr::alpha().log();
    let mu = if sign < 0 { -log_gamma } else { log_gamma };
    Ok(Outcome::BakerDavenport(ctx.baker_davenport(&mu, a, big_b)?))
}

fn context_label(kind: SequenceKind, b: u32, d1: u32, d2: Option<u32>, l1: Option<u32>) -> String {
    let mut s = format!("{kind} base {b} d1={d1}");
    if let Some(d2) = d2 {
        s.push_str(&format!(" d2={d2}"));
    }
    if let Some(l1) = l1 {
        s.push_str(&format!(" l1={l1}"));
    }
    s
}

/// Bound on `l1` from the first form, over every leading digit.
pub fn reduce_l1(
    kind: SequenceKind,
    b: u32,
    ledger: &BoundLedger,
    precision: &Precision,
) -> Result<FamilyBound> {
    let ctx = ReductionContext::for_base(b, ledger.m_for_base(b).clone(), precision)?;
    reduce_l1_with(kind, b, &ctx, precision)
}

pub fn reduce_l1_with(
    kind: SequenceKind,
    b: u32,
    ctx: &ReductionContext,
    _precision: &Precision,
) -> Result<FamilyBound> {
    let p = parameters(kind);
    let a = decimal_value(p.reduction_a_l1);
    let big_b = RealExpr::int(b);
    let per_instance = (1..b)
        .into_par_iter()
        .map(|d1| {
            let gamma = p.first_gamma(b, d1);
            reduce_gamma(ctx, &gamma, -1, b, &a, &big_b)
                .map(|outcome| InstanceRecord {
                    d1,
                    d2: None,
                    l1: None,
                    outcome,
                })
                .map_err(|e| e.within(context_label(kind, b, d1, None, None)))
        })
        .collect::<Result<Vec<_>>>()?;
    let raw_bound = per_instance.iter().map(|r| r.outcome.w_max()).max().unwrap_or(0);
    Ok(FamilyBound {
        kind,
        base: b,
        stage: Stage::L1,
        m: ctx.m.clone(),
        raw_bound,
        bound: raw_bound.max(p.l1_threshold as u64 - 1),
        per_instance,
    })
}

/// The `(d1, d2, l1)` triples of the second stage, in a fixed order.
pub fn n_stage_digits(b: u32, l1_max: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for d1 in 1..b {
        for d2 in (0..b).filter(|&d| d != d1) {
            for l1 in 1..=l1_max {
                out.push((d1, d2, l1));
            }
        }
    }
    out
}

/// Bound on `n` from the second form, over every `(d1, d2, l1)` with
/// `l1 <= l1_max`.
pub fn reduce_n(
    kind: SequenceKind,
    b: u32,
    l1_max: u32,
    ledger: &BoundLedger,
    precision: &Precision,
) -> Result<FamilyBound> {
    let ctx = ReductionContext::for_base(b, ledger.m_for_base(b).clone(), precision)?;
    reduce_n_with(kind, b, l1_max, &ctx, precision)
}

pub fn reduce_n_with(
    kind: SequenceKind,
    b: u32,
    l1_max: u32,
    ctx: &ReductionContext,
    _precision: &Precision,
) -> Result<FamilyBound> {
    let p = parameters(kind);
    let a = decimal_value(p.reduction_a_n);
    let big_b = RealExpr::alpha();
    let per_instance = n_stage_digits(b, l1_max)
        .into_par_iter()
        .map(|(d1, d2, l1)| {
            let gamma = p.second_gamma(b, d1, d2, l1);
            reduce_gamma(ctx, &gamma, 1, b, &a, &big_b)
                .map(|outcome| InstanceRecord {
                    d1,
                    d2: Some(d2),
                    l1: Some(l1),
                    outcome,
                })
                .map_err(|e| e.within(context_label(kind, b, d1, Some(d2), Some(l1))))
        })
        .collect::<Result<Vec<_>>>()?;
    let raw_bound = per_instance.iter().map(|r| r.outcome.w_max()).max().unwrap_or(0);
    Ok(FamilyBound {
        kind,
        base: b,
        stage: Stage::N,
        m: ctx.m.clone(),
        raw_bound,
        bound: raw_bound,
        per_instance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linforms::derive_initial_bounds;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    fn inst(tau: RealExpr, mu: RealExpr, a: i64, b: i64, m: i64) -> ReductionInstance {
        ReductionInstance {
            tau,
            mu,
            a: BigRational::from_integer(a.into()),
            b: RealExpr::int(b),
            m: BigInt::from(m),
        }
    }

    /// No `u <= M` and integer `v` with `|u tau - v + mu| < A B^-(w_max + 1)`.
    fn brute_force_sound(inst: &ReductionInstance, w_max: u64) -> bool {
        let bits = 160;
        let tau = eval(&inst.tau, bits).unwrap();
        let mu = eval(&inst.mu, bits).unwrap();
        let limit = eval(
            &(RealExpr::rational(inst.a.clone()) / inst.b.clone().pow(w_max as i32 + 1)),
            bits,
        )
        .unwrap();
        let m = inst.m.to_i64().unwrap();
        (1..=m).all(|u| {
            let x = tau.mul_int(&BigInt::from(u)).add(&mu);
            let (d, _) = x.distance_to_nearest().expect("decidable at 160 bits");
            // Every other v is farther than 1/2 > limit.
            !d.hi().is_negative() && d.lo() >= limit.hi()
        })
    }

    #[test]
    fn toy_instance_is_sound() {
        let i = inst(RealExpr::int(2).sqrt(), RealExpr::ratio(1, 3), 10, 2, 50);
        let out = baker_davenport(&i, &Precision::default()).unwrap();
        assert!(out.q_used > BigInt::from(300));
        assert!(out.epsilon.is_positive());
        assert!(brute_force_sound(&i, out.w_max));
    }

    #[test]
    fn zero_mu_never_works() {
        let i = inst(RealExpr::int(3).sqrt(), RealExpr::int(0), 10, 2, 50);
        assert_eq!(
            baker_davenport(&i, &Precision::default()),
            Err(Error::EpsilonNeverPositive {
                attempts: MAX_ATTEMPTS
            })
        );
    }

    #[test]
    fn rational_mu_hitting_integers_and_halves() {
        // q mu is an integer or a half-integer for many q; neither may stall.
        for den in [2, 7] {
            let i = inst(RealExpr::int(2).sqrt(), RealExpr::ratio(1, den), 10, 2, 50);
            let out = baker_davenport(&i, &Precision::default()).unwrap();
            assert!(brute_force_sound(&i, out.w_max));
        }
    }

    #[test]
    fn randomized_soundness() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let p = Precision::default();
        let mut checked = 0;
        for _ in 0..20 {
            let d = [2, 3, 5, 6, 7, 10, 11][rng.gen_range(0..7)];
            let tau = (RealExpr::int(rng.gen_range(-3..=3)) + RealExpr::int(d).sqrt())
                / RealExpr::int(rng.gen_range(1..=4));
            let mu = RealExpr::ratio(rng.gen_range(1..50), rng.gen_range(51..97));
            let i = inst(tau, mu, rng.gen_range(1..30), rng.gen_range(2..5), rng.gen_range(10..300));
            match baker_davenport(&i, &p) {
                Ok(out) => {
                    assert!(brute_force_sound(&i, out.w_max));
                    checked += 1;
                }
                Err(Error::EpsilonNeverPositive { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(checked >= 15);
    }

    #[test]
    fn larger_m_never_lowers_the_bound() {
        let p = Precision::default();
        let mut last = 0;
        for m in [10i64, 100, 1000, 10_000, 100_000] {
            let i = inst(RealExpr::log_ratio(3), RealExpr::ratio(2, 7), 20, 3, m);
            let w = baker_davenport(&i, &p).unwrap().w_max;
            assert!(w >= last, "M = {m}");
            last = w;
        }
    }

    #[test]
    fn powers_of_the_base() {
        assert_eq!(rational_power_of(&QuadraticNumber::int(1), 3), Some(0));
        assert_eq!(rational_power_of(&QuadraticNumber::ratio(1, 9), 3), Some(-2));
        assert_eq!(rational_power_of(&QuadraticNumber::int(27), 3), Some(3));
        assert_eq!(rational_power_of(&QuadraticNumber::int(6), 3), None);
        assert_eq!(rational_power_of(&QuadraticNumber::alpha(), 2), None);
    }

    #[test]
    fn digit_space_is_partitioned() {
        for b in 2..=10u32 {
            let triples = n_stage_digits(b, 7);
            assert_eq!(triples.len() as u32, (b - 1) * (b - 1) * 7);
            let mut sorted = triples.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), triples.len());
            assert!(triples.iter().all(|&(d1, d2, l1)| d1 >= 1 && d1 < b && d2 < b && d1 != d2 && l1 >= 1));
        }
    }

    #[test]
    fn pell_base_two_first_stage() {
        let p = Precision::default();
        let ledger = derive_initial_bounds(SequenceKind::Pell, &p).unwrap();
        let fam = reduce_l1(SequenceKind::Pell, 2, &ledger, &p).unwrap();
        assert!((109..=115).contains(&fam.bound), "{}", fam.bound);
        let eps = fam.weakest_epsilon().unwrap();
        assert!(eps.q_used > ledger.m_for_base(2) * 6u32);
    }

    #[test]
    fn pell_lucas_homogeneous_first_stage() {
        let p = Precision::default();
        let ledger = derive_initial_bounds(SequenceKind::PellLucas, &p).unwrap();
        let fam = reduce_l1(SequenceKind::PellLucas, 3, &ledger, &p).unwrap();
        let (rec, leg) = fam.legendre_instances().next().unwrap();
        assert_eq!(rec.d1, 2);
        assert_eq!(leg.a_m, BigInt::from(130));
        assert!(fam.bound <= 73, "{}", fam.bound);
        assert!(BigInt::one() < leg.y_max);
    }
}
