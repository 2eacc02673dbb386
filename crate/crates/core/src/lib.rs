//! Pell and Pell-Lucas numbers that are concatenations of two repdigits in
//! a base `2 <= b <= 10`.
//!
//! The pipeline follows the classical route for exponential Diophantine
//! equations: a lower bound for linear forms in three logarithms gives an
//! astronomically large but finite bound on the index `n`, continued-fraction
//! reductions shrink it below a few hundred, and an exhaustive search over
//! the remaining box finds every solution. All irrational quantities are
//! handled with certified interval arithmetic.

pub mod cli;
pub mod contfrac;
pub mod error;
pub mod linforms;
pub mod precision;
pub mod reduction;
pub mod repdigits;
pub mod sequences;
mod serial;
pub mod solver;

pub use error::{Error, Result};
pub use precision::{Interval, Precision, RealExpr};
pub use repdigits::ConcatRepdigit;
pub use sequences::SequenceKind;
