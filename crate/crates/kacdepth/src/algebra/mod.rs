//! Exact arithmetic in `q`: Laurent polynomials, reduced fractions,
//! truncated multivariate series over fractions, and expansions at infinity.

mod laurent;
mod ratfunc;
mod series;
mod tail;

pub use laurent::{LaurentPoly, MAX_DECODE_SPAN};
pub use ratfunc::{ratfunc_normalize, RatFunc};
pub use series::{exponents_up_to, series_exp, series_log, TSeries};
pub use tail::TailSeries;

/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
