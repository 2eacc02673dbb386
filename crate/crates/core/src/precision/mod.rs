//! Certified real arithmetic: dyadic intervals with directed rounding, a
//! small expression language over rationals, square roots and logarithms,
//! and refinement loops that raise precision until a question is decided.

mod dyadic;
mod expr;
mod interval;

pub use dyadic::{format_sci, Dyadic, Rounding};
pub use expr::{certified_floor, eval, nearest_integer_distance, parse_decimal, RealExpr};
pub use interval::Interval;

pub const DEFAULT_START_BITS: u32 = 192;
pub const DEFAULT_MAX_BITS: u32 = 1_000_000;

/// Precision schedule: start at `start_bits`, double on demand, never
/// exceed `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Precision {
    pub fn new(start_bits: u32, max_bits: u32) -> Self {
        assert!(start_bits >= 32, "start precision below 32 bits");
        Precision {
            start_bits,
            max_bits: max_bits.max(start_bits),
        }
    }

    pub fn with_cap(max_bits: u32) -> Self {
        Self::new(DEFAULT_START_BITS.min(max_bits.max(32)), max_bits)
    }

    /// `start, 2*start, 4*start, ...`, ending with `max_bits`.
    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        let mut next = Some(self.start_bits);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(2).min(max))
            };
            Some(cur)
        })
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: DEFAULT_START_BITS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}
