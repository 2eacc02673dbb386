//! Heights, the Matveev lower bound and the initial bounds on `n` and
//! `l1 + l2`.

mod bounds;
mod forms;
mod matveev;
mod quadratic;

pub use bounds::{
    decimal_value, derive_initial_bounds, head_value, index_bound, l1l2_bound, ledger_bits,
    leading_constant, parameters, BoundLedger, Certificate, SequenceParameters,
};
pub use forms::{first_form, forms_nonvanishing, second_form};
pub use matveev::{leading_constant_expr, matveev_exponent, MatveevBound, MatveevInstance};
pub use quadratic::QuadraticNumber;
