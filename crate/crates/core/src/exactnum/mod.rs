//! Exact arithmetic in real quadratic fields and the high-precision real
//! type used on the numerical side of every comparison.

mod quad;
mod real;

pub use quad::{squarefree_decompose, Quad, QuadInt};
pub use real::{bigint_to_rug, ratio_to_rug, HighPrecReal};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Smallest integer `>= x`.
pub fn ceil_ratio<I: Clone + Integer>(x: &Ratio<I>) -> I {
    x.ceil().to_integer()
}

/// Largest integer `<= x`.
pub fn floor_ratio<I: Clone + Integer>(x: &Ratio<I>) -> I {
    x.floor().to_integer()
}

/// Fractional part `x - floor(x)`, in `[0, 1)`.
pub fn frac_ratio<I: Clone + Integer>(x: &Ratio<I>) -> Ratio<I> {
    x - x.floor()
}

/// The integers in the closed real interval `[lo, hi]`, as an inclusive
/// `(first, last)` pair, or `None` when the interval holds no integer.
///
/// Every summation range of the form `lo <= w <= hi` with rational
/// endpoints goes through here.
pub fn integer_range(lo: &Ratio<BigInt>, hi: &Ratio<BigInt>) -> Option<(BigInt, BigInt)> {
    let first = ceil_ratio(lo);
    let last = floor_ratio(hi);
    (first <= last).then_some((first, last))
}


/// `1 / n^e` as an exact rational.
pub(crate) fn inv_int_pow(n: &BigInt, e: u32) -> Ratio<BigInt> {
    debug_assert!(!n.is_zero());
    let p = num_traits::pow(n.clone(), e as usize);
    if p.is_negative() {
        Ratio::new_raw(-BigInt::one(), -p)
    } else {
        Ratio::new_raw(BigInt::one(), p)
    }
}
