//! Lower bound for a nonzero linear form in logarithms of real algebraic
//! numbers (the Bugeaud-Mignotte-Siksek form of Matveev's theorem):
//!
//! `|g1^b1 ... gt^bt - 1| > exp(-1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D) (1 + log B) A1 ... At)`.

use crate::error::{Error, Result};
use crate::precision::{eval, Interval, RealExpr};

#[derive(Clone, Debug)]
pub struct MatveevInstance {
    /// Number of logarithms.
    pub t: u32,
    /// Degree of the number field.
    pub d: u32,
    /// `A_i >= max(D h(g_i), |log g_i|, 0.16)`.
    pub a: Vec<RealExpr>,
    /// `B >= max |b_i|`.
    pub b: RealExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatveevBound {
    /// Everything except the `(1 + log B)` factor.
    pub leading: Interval,
    /// The full exponent.
    pub full: Interval,
}

impl MatveevInstance {
    pub fn new(t: u32, d: u32, a: Vec<RealExpr>, b: RealExpr) -> Result<Self> {
        if t == 0 || d == 0 {
            return Err(Error::InvalidParameter("t and D must be positive".into()));
        }
        if a.len() != t as usize {
            return Err(Error::InvalidParameter(format!("expected {t} A values, got {}", a.len())));
        }
        Ok(MatveevInstance { t, d, a, b })
    }

    pub fn leading_expr(&self) -> RealExpr {
        leading_constant_expr(self.t, self.d, &self.a)
    }
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * A1 ... At`.
pub fn leading_constant_expr(t: u32, d: u32, a: &[RealExpr]) -> RealExpr {
    let t_int = RealExpr::int(t);
    let mut c = RealExpr::decimal("1.4")
        * RealExpr::int(30).pow(t as i32 + 3)
        * t_int.clone().pow(4)
        * t_int.sqrt()
        * RealExpr::int(d).pow(2)
        * (RealExpr::int(1) + RealExpr::int(d).log());
    for ai in a {
        c = c * ai.clone();
    }
    c
}

/// Certified leading constant and full exponent. Fails if some `A_i` is
/// not certified to be at least 0.16 or `B` not at least 1.
pub fn matveev_exponent(inst: &MatveevInstance, bits: u32) -> Result<MatveevBound> {
    let floor = RealExpr::decimal("0.16");
    for (i, ai) in inst.a.iter().enumerate() {
        let slack = eval(&(ai.clone() - floor.clone()), bits)?;
        if slack.lo().is_negative() {
            return Err(Error::InvalidParameter(format!("A_{} is not certified >= 0.16", i + 1)));
        }
    }
    let b_slack = eval(&(inst.b.clone() - RealExpr::int(1)), bits)?;
    if b_slack.lo().is_negative() {
        return Err(Error::InvalidParameter("B is not certified >= 1".into()));
    }
    let lead = inst.leading_expr();
    let full = lead.clone() * (RealExpr::int(1) + inst.b.clone().log());
    Ok(MatveevBound {
        leading: eval(&lead, bits)?,
        full: eval(&full, bits)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(a: &[&str], b: &str) -> MatveevInstance {
        let a = a.iter().map(|s| RealExpr::decimal(s)).collect::<Vec<_>>();
        MatveevInstance::new(a.len() as u32, if a.len() == 1 { 1 } else { 2 }, a, RealExpr::decimal(b)).unwrap()
    }

    #[test]
    fn trivial_single_log() {
        let m = matveev_exponent(&inst(&["0.16"], "1"), 128).unwrap();
        assert!((m.leading.midpoint_f64() - 181_440.0).abs() < 1e-6);
        assert_eq!(m.leading, m.full);
    }

    #[test]
    fn three_logs_in_a_quadratic_field() {
        let m = matveev_exponent(&inst(&["9.5", "0.89", "4.7"], "1000"), 128).unwrap();
        let c = m.leading.midpoint_f64();
        assert!((c / 3.853e13 - 1.0).abs() < 5e-4, "{c}");
        let m = matveev_exponent(&inst(&["4.4", "0.89", "4.7"], "1000"), 128).unwrap();
        let c = m.leading.midpoint_f64();
        assert!((c / 1.784e13 - 1.0).abs() < 5e-4, "{c}");
        let full = m.full.midpoint_f64();
        assert!((full / (c * (1.0 + 1000f64.ln())) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_a_and_b() {
        let base = matveev_exponent(&inst(&["4.4", "0.89", "4.7"], "100"), 128).unwrap();
        let bigger_a = matveev_exponent(&inst(&["4.5", "0.89", "4.7"], "100"), 128).unwrap();
        let bigger_b = matveev_exponent(&inst(&["4.4", "0.89", "4.7"], "101"), 128).unwrap();
        assert!(bigger_a.full.lo() > base.full.hi());
        assert!(bigger_b.full.lo() > base.full.hi());
    }

    #[test]
    fn rejects_small_a() {
        assert!(matveev_exponent(&inst(&["0.1"], "1"), 64).is_err());
        assert!(MatveevInstance::new(2, 2, vec![RealExpr::int(1)], RealExpr::int(1)).is_err());
    }
}
