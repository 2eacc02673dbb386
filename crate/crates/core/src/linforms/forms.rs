//! The four linear forms evaluated exactly at concrete parameters, used to
//! confirm they never vanish.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::bounds::parameters;
use super::quadratic::QuadraticNumber;
use crate::error::Result;
use crate::repdigits::ConcatRepdigit;
use crate::sequences::SequenceKind;

fn power_of(b: u32, e: i32) -> QuadraticNumber {
    let p = BigInt::from(b).pow(e.unsigned_abs());
    if e >= 0 {
        QuadraticNumber::rational(BigRational::from_integer(p))
    } else {
        QuadraticNumber::rational(BigRational::new(1.into(), p))
    }
}

/// `Gamma + 1` for the first form: `gamma1 * alpha^n * b^-(l1+l2)`.
pub fn first_form(kind: SequenceKind, n: u32, r: &ConcatRepdigit) -> Result<QuadraticNumber> {
    let g = parameters(kind).first_gamma(r.b, r.d1);
    let a = QuadraticNumber::alpha().pow(n as i32)?;
    Ok(&(&g * &a) * &power_of(r.b, -(r.len() as i32)))
}

/// `Gamma + 1` for the second form: `gamma1 * alpha^-n * b^l2`.
pub fn second_form(kind: SequenceKind, n: u32, r: &ConcatRepdigit) -> Result<QuadraticNumber> {
    let g = parameters(kind).second_gamma(r.b, r.d1, r.d2, r.l1);
    let a = QuadraticNumber::alpha().pow(-(n as i32))?;
    Ok(&(&g * &a) * &power_of(r.b, r.l2 as i32))
}

/// Both forms are nonzero, i.e. neither product above equals 1.
pub fn forms_nonvanishing(kind: SequenceKind, n: u32, r: &ConcatRepdigit) -> Result<bool> {
    Ok(!first_form(kind, n, r)?.is_one() && !second_form(kind, n, r)?.is_one())
}
