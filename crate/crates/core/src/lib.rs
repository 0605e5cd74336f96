//! Exact special values of the cotangent zeta function
//!
//! ```text
//! xi(s, alpha) = sum_{n >= 1} cot(pi n alpha) / n^s
//! ```
//!
//! at odd integers `s = 2m - 1 >= 3` and real quadratic irrationals `alpha`,
//! together with exact and high-precision machinery for checking the finite
//! identities from which the closed form follows.
//!
//! The exact side is generic over the integer type (`num-integer`), so the
//! quadratic field and Bernoulli code run over `i64`/`i128` as well as
//! [`BigInt`]. The aliases at the crate root pin the arbitrary-precision
//! instantiations that the rest of the crate and the CLI use.

pub mod bernoulli;
pub mod closedform;
pub mod error;
pub mod exactnum;
pub mod modular;
pub mod oracle;
pub mod series;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::Ratio;

/// Arbitrary-precision rational in canonical form.
pub type Rational = Ratio<BigInt>;

/// Element of a real quadratic field over arbitrary-precision integers.
pub type QuadElem = exactnum::Quad<BigInt>;

/// Integer matrix of determinant one.
pub type UniMat = modular::Mat2<BigInt>;

/// Exact Bernoulli numbers and polynomials over the rationals.
pub type BernCache = bernoulli::BernoulliTable<Rational>;

pub use closedform::PiValue;
pub use exactnum::HighPrecReal;
