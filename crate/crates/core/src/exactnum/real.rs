use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign, ToBigInt};
use num_integer::Integer;
use num_rational::Ratio;
use rug::float::{Constant, Round};
use rug::integer::Order;
use rug::ops::Pow;
use rug::Float;

use super::quad::{Quad, QuadInt};

/// Guard bits used inside conversions before the final rounding.
const CONVERSION_GUARD: u32 = 16;

pub fn bigint_to_rug(n: &BigInt) -> rug::Integer {
    let (sign, digits) = n.to_u64_digits();
    let mag = rug::Integer::from_digits(&digits, Order::Lsf);
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn ratio_to_rug<I: Clone + Integer + ToBigInt>(x: &Ratio<I>) -> rug::Rational {
    let n = bigint_to_rug(&x.numer().to_bigint().expect("integer converts"));
    let d = bigint_to_rug(&x.denom().to_bigint().expect("integer converts"));
    rug::Rational::from((n, d))
}

/// Binary floating-point real with an explicit significand width.
///
/// Backed by MPFR; every operation rounds to nearest, ties to even, at the
/// larger of the operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct HighPrecReal {
    value: Float,
}

impl HighPrecReal {
    pub fn zero(prec: u32) -> Self {
        Self {
            value: Float::new(prec),
        }
    }

    pub fn from_float(value: Float) -> Self {
        Self { value }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, x),
        }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, x),
        }
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, bigint_to_rug(x)),
        }
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_ratio<I: Clone + Integer + ToBigInt>(x: &Ratio<I>, prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, ratio_to_rug(x)),
        }
    }

    /// `a + b*sqrt(d)` with relative error at most `2^(1 - prec)`.
    ///
    /// When `a` and `b` have opposite signs the value is computed as
    /// `norm / (a - b*sqrt(d))`, which involves no cancellation.
    pub fn from_quad<I: QuadInt>(x: &Quad<I>, prec: u32) -> Self {
        let work = prec + CONVERSION_GUARD;
        let a = Float::with_val(work, ratio_to_rug(x.a()));
        if x.is_rational() {
            return Self::from_ratio(x.a(), prec);
        }
        let b = Float::with_val(work, ratio_to_rug(x.b()));
        let d = bigint_to_rug(&x.d().to_bigint().expect("integer converts"));
        let root = Float::with_val(work, d).sqrt();
        let b_root = Float::with_val(work, &b * &root);
        let opposite = (a.is_sign_negative() != b.is_sign_negative()) && !a.is_zero();
        let value = if opposite {
            let norm = Float::with_val(work, ratio_to_rug(&x.norm()));
            let den = Float::with_val(work, &a - &b_root);
            Float::with_val(prec, &norm / &den)
        } else {
            Float::with_val(prec, &a + &b_root)
        };
        Self { value }
    }

    pub fn pi(prec: u32) -> Self {
        Self {
            value: Float::with_val(prec, Constant::Pi),
        }
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    /// Rounds (or widens) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut value = self.value.clone();
        value.set_prec_round(prec, Round::Nearest);
        Self { value }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.clone().abs(),
        }
    }

    pub fn sqrt(&self) -> Self {
        Self {
            value: self.value.clone().sqrt(),
        }
    }

    /// `self^n` for an integer exponent.
    pub fn powi(&self, n: i32) -> Self {
        Self {
            value: self.value.clone().pow(n),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.value >= other.value {
            self
        } else {
            other
        }
    }

    /// `log2 |self|` as an `f64`, for magnitude bookkeeping.
    pub fn log2_abs(&self) -> f64 {
        Float::with_val(64, self.value.abs_ref()).log2().to_f64()
    }

    /// Positional decimal with `digits` significant digits, switching to
    /// scientific notation for very large or very small magnitudes.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.value.is_zero() {
            return "0".to_string();
        }
        if !self.value.is_finite() {
            return self.value.to_string();
        }
        let (neg, mantissa, exp) = self.value.to_sign_string_exp(10, Some(digits));
        let exp = exp.unwrap_or(0);
        let sign = if neg { "-" } else { "" };
        let mantissa = mantissa.trim_end_matches('0');
        let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
        // value = 0.mantissa * 10^exp
        if (-30..=40).contains(&exp) {
            let len = mantissa.len() as i32;
            if exp <= 0 {
                format!("{sign}0.{}{}", "0".repeat((-exp) as usize), mantissa)
            } else if exp >= len {
                format!("{sign}{}{}", mantissa, "0".repeat((exp - len) as usize))
            } else {
                let (int, frac) = mantissa.split_at(exp as usize);
                format!("{sign}{int}.{frac}")
            }
        } else {
            let (first, rest) = mantissa.split_at(1);
            let rest = if rest.is_empty() { "0" } else { rest };
            format!("{sign}{first}.{rest}e{}", exp - 1)
        }
    }

    /// Number of decimal digits carried by a `prec`-bit significand.
    pub fn decimal_digits(prec: u32) -> usize {
        ((prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(Self::decimal_digits(self.prec())))
    }
}

impl fmt::Debug for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HighPrecReal({}, {} bits)", self, self.prec())
    }
}

impl PartialEq<f64> for HighPrecReal {
    fn eq(&self, other: &f64) -> bool {
        self.value == *other
    }
}

impl PartialOrd<f64> for HighPrecReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.value.partial_cmp(other)
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&HighPrecReal> for &HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: &HighPrecReal) -> HighPrecReal {
                let prec = self.prec().max(rhs.prec());
                HighPrecReal {
                    value: Float::with_val(prec, &self.value $op &rhs.value),
                }
            }
        }
        impl $tr<HighPrecReal> for HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: HighPrecReal) -> HighPrecReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HighPrecReal> for HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: &HighPrecReal) -> HighPrecReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<HighPrecReal> for &HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: HighPrecReal) -> HighPrecReal {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        HighPrecReal { value: -self.value }
    }
}

impl Neg for &HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        -self.clone()
    }
}
