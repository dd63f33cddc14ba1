//! The subring of the completed Grothendieck ring of varieties generated by
//! rational powers of the Lefschetz class `L`, with geometric-series
//! denominators `(1 - L^{-d})^{-1}`.
//!
//! Every value produced by this crate lands here: fixed loci of linear
//! actions are affine spaces, so their classes are polynomials in `L`.

mod poly;
mod realize;
mod series;

pub use poly::{Dim, FiltrationIndex, MotPoly};
pub use realize::{exact_root, realize_e, realize_point_count, realize_poincare, EPoly, TPoly};
pub use series::{MotSeries, MotValue};

use num_rational::Rational64;

/// Exponents of `L` are rationals with small denominators.
pub type Exponent = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MotivicError {
    #[error("exponent denominator {den} does not divide root index {r}")]
    BadRootIndex { den: i64, r: u32 },
    #[error("geometric denominator exponent {0} is not positive")]
    NonPositiveDenominator(Exponent),
    #[error("{q} is not an exact {root}-th power")]
    NonIntegralRoot { q: u64, root: i64 },
    #[error("denominator vanishes at q = {0}")]
    DivergentEvaluation(u64),
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}
