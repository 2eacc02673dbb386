//! The full pipeline: initial bounds, both reductions per base, and the
//! exhaustive search over the resulting box.

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linforms::{decimal_value, derive_initial_bounds, parameters, BoundLedger};
use crate::precision::{eval, Precision, RealExpr};
use crate::reduction::{reduce_l1_with, reduce_n_with, FamilyBound, ReductionContext, Stage};
use crate::repdigits::{check_base, decompose, ConcatRepdigit};
use crate::sequences::{terms_up_to, SequenceKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub kind: SequenceKind,
    pub n: u32,
    #[serde(serialize_with = "biguint_str")]
    pub value: BigUint,
    pub repr: ConcatRepdigit,
}

impl Solution {
    /// `P_11` or `Q_5`.
    pub fn label(&self) -> String {
        format!("{}_{}", self.kind.symbol(), self.n)
    }
}

fn biguint_str<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseBox {
    pub base: u32,
    pub l1_max: u64,
    pub l2_max: u64,
    /// Reduced bound on `n` for this base.
    pub n_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    /// Every `n <= n_max` is searched.
    pub n_max: u32,
    pub per_base: Vec<BaseBox>,
}

impl SearchBox {
    fn for_base(&self, b: u32) -> Option<&BaseBox> {
        self.per_base.iter().find(|x| x.base == b)
    }

    /// Fails if `s` lies outside the box.
    pub fn check(&self, s: &Solution) -> Result<()> {
        let inside = self.for_base(s.repr.b).is_some_and(|bx| {
            s.n <= self.n_max && u64::from(s.repr.l1) <= bx.l1_max && u64::from(s.repr.l2) <= bx.l2_max
        });
        if inside {
            Ok(())
        } else {
            Err(Error::BoxViolation(format!("{} = {}", s.label(), s.repr)))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverReport {
    pub kind: SequenceKind,
    pub bases: (u32, u32),
    pub ledger: BoundLedger,
    #[serde(serialize_with = "summaries")]
    pub family_bounds: Vec<FamilyBound>,
    pub search_box: SearchBox,
    pub solutions: Vec<Solution>,
}

impl SolverReport {
    pub fn family(&self, base: u32, stage: Stage) -> Option<&FamilyBound> {
        self.family_bounds.iter().find(|f| f.base == base && f.stage == stage)
    }

    /// Distinct values, ascending.
    pub fn values(&self) -> Vec<BigUint> {
        let mut v: Vec<_> = self.solutions.iter().map(|s| s.value.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Family bounds without the per-instance records.
#[derive(Serialize)]
struct FamilySummary<'a> {
    base: u32,
    stage: Stage,
    #[serde(serialize_with = "crate::serial::bigint")]
    m: &'a BigInt,
    raw_bound: u64,
    bound: u64,
    instances: usize,
}

fn summaries<S: Serializer>(f: &[FamilyBound], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(f.iter().map(|f| FamilySummary {
        base: f.base,
        stage: f.stage,
        m: &f.m,
        raw_bound: f.raw_bound,
        bound: f.bound,
        instances: f.per_instance.len(),
    }))
}

/// Every `(n, b)` with `n <= n_max` and `b` in `bases` where the term is a
/// concatenation of two repdigits.
pub fn search_exhaustive(kind: SequenceKind, n_max: u32, bases: RangeInclusive<u32>) -> Vec<Solution> {
    let mut out = Vec::new();
    for t in terms_up_to(kind, n_max) {
        for b in bases.clone() {
            if let Some(repr) = decompose(&t.value, b) {
                out.push(Solution {
                    kind,
                    n: t.n,
                    value: t.value.clone(),
                    repr,
                });
            }
        }
    }
    out
}

/// `floor((n log alpha + offset) / log b)`, a bound on `l1 + l2` and so on `l2`.
fn digit_count_bound(kind: SequenceKind, n: u32, b: u32, bits: u32) -> Result<u64> {
    let e = (RealExpr::int(n) * RealExpr::alpha().log() + RealExpr::rational(decimal_value(parameters(kind).offset)))
        / RealExpr::int(b).log();
    Ok(eval(&e, bits)?.hi().floor().to_u64().unwrap_or(u64::MAX))
}

fn check_bases(bases: &RangeInclusive<u32>) -> Result<()> {
    check_base(*bases.start())?;
    check_base(*bases.end())?;
    if bases.start() > bases.end() {
        return Err(Error::InvalidParameter(format!(
            "empty base range {}..={}",
            bases.start(),
            bases.end()
        )));
    }
    Ok(())
}

/// Reduces both stages for one base and checks the contradiction with the
/// assumed lower bound on `n`.
pub fn reduce_base(
    kind: SequenceKind,
    b: u32,
    ledger: &BoundLedger,
    precision: &Precision,
) -> Result<(FamilyBound, FamilyBound)> {
    let ctx = ReductionContext::for_base(b, ledger.m_for_base(b).clone(), precision)?;
    let l1 = reduce_l1_with(kind, b, &ctx, precision)?;
    let l1_max = u32::try_from(l1.bound).map_err(|_| Error::InvalidParameter(format!("l1 bound {}", l1.bound)))?;
    let n = reduce_n_with(kind, b, l1_max, &ctx, precision)?;
    let threshold = u64::from(parameters(kind).n_threshold);
    if n.bound >= threshold {
        return Err(Error::ReductionInsufficient {
            kind: kind.to_string(),
            base: b,
            bound: n.bound,
            threshold,
        });
    }
    Ok((l1, n))
}

pub fn solve(kind: SequenceKind, bases: RangeInclusive<u32>, precision: &Precision) -> Result<SolverReport> {
    check_bases(&bases)?;
    let ledger = derive_initial_bounds(kind, precision)?;
    let per_base = bases
        .clone()
        .into_par_iter()
        .map(|b| reduce_base(kind, b, &ledger, precision))
        .collect::<Result<Vec<_>>>()?;

    let p = parameters(kind);
    let n_max = per_base
        .iter()
        .map(|(_, n)| n.bound)
        .max()
        .unwrap_or(0)
        .max(u64::from(p.n_threshold)) as u32;
    let bits = precision.start_bits;
    let search_box = SearchBox {
        n_max,
        per_base: per_base
            .iter()
            .map(|(l1, n)| {
                Ok(BaseBox {
                    base: l1.base,
                    l1_max: l1.bound,
                    l2_max: digit_count_bound(kind, n_max, l1.base, bits)?,
                    n_bound: n.bound,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let mut solutions = search_exhaustive(kind, n_max, bases.clone());
    for s in &solutions {
        search_box.check(s)?;
    }
    solutions.sort_by_key(|s| (s.kind, s.n, s.repr.b));

    Ok(SolverReport {
        kind,
        bases: (*bases.start(), *bases.end()),
        ledger,
        family_bounds: per_base.into_iter().flat_map(|(l1, n)| [l1, n]).collect(),
        search_box,
        solutions,
    })
}
