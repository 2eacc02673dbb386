//! Serde helpers: big integers as decimal strings, intervals as directed
//! decimal bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::Serializer;

use crate::precision::Interval;

pub(crate) const INTERVAL_DIGITS: u32 = 12;

pub(crate) fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn interval<S: Serializer>(x: &Interval, s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("lo", &x.lo_sci(INTERVAL_DIGITS))?;
    m.serialize_entry("hi", &x.hi_sci(INTERVAL_DIGITS))?;
    m.end()
}

pub(crate) fn bigint_map<S: Serializer>(
    x: &std::collections::BTreeMap<u32, BigInt>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(x.len()))?;
    for (k, v) in x {
        m.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    m.end()
}
