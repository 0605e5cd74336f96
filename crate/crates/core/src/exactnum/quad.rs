use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::ToBigInt;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::real::HighPrecReal;
use crate::error::{input, Error, Result};

/// Integer types the quadratic field can be built over.
pub trait QuadInt:
    Clone + Integer + Signed + Roots + FromPrimitive + ToBigInt + fmt::Debug + fmt::Display
{
}

impl<T> QuadInt for T where
    T: Clone + Integer + Signed + Roots + FromPrimitive + ToBigInt + fmt::Debug + fmt::Display
{
}

/// Splits `n > 0` as `core * root^2` with `core` squarefree.
pub fn squarefree_decompose<I: QuadInt>(n: &I) -> (I, I) {
    assert!(n.is_positive(), "squarefree_decompose needs n > 0");
    let mut rest = n.clone();
    let mut core = I::one();
    let mut root = I::one();
    let mut p = I::from_u8(2).unwrap();
    while p.clone() * p.clone() <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(&p) {
            rest = rest / p.clone();
            count += 1;
        }
        for _ in 0..count / 2 {
            root = root * p.clone();
        }
        if count % 2 == 1 {
            core = core * p.clone();
        }
        p = p + I::one();
    }
    (core * rest, root)
}

fn is_perfect_square<I: QuadInt>(n: &I) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    s.clone() * s == *n
}

/// `a + b*sqrt(d)` with rational `a`, `b` and squarefree `d >= 2`, read
/// through the embedding with `sqrt(d) > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad<I: QuadInt> {
    d: I,
    a: Ratio<I>,
    b: Ratio<I>,
}

impl<I: QuadInt> Quad<I> {
    /// `(p + q*sqrt(disc)) / r`, with square factors of `disc` folded into `q`.
    pub fn make(p: I, q: I, r: I, disc: I) -> Result<Self> {
        if r.is_zero() {
            return input("zero denominator");
        }
        if disc <= I::one() {
            return input(format!("radicand {disc} must exceed 1"));
        }
        if is_perfect_square(&disc) {
            return input(format!("radicand {disc} is a perfect square"));
        }
        let (core, root) = squarefree_decompose(&disc);
        Ok(Self {
            d: core,
            a: Ratio::new(p, r.clone()),
            b: Ratio::new(q * root, r),
        })
    }

    /// Builds `a + b*sqrt(d)`; `d` must already be squarefree and `>= 2`.
    pub fn new(a: Ratio<I>, b: Ratio<I>, d: I) -> Result<Self> {
        if d < I::from_u8(2).unwrap() {
            return input(format!("radicand {d} must be at least 2"));
        }
        let (core, _) = squarefree_decompose(&d);
        if core != d {
            return input(format!("radicand {d} is not squarefree"));
        }
        Ok(Self { d, a, b })
    }

    /// `sqrt(disc)` for a positive non-square `disc`.
    pub fn sqrt(disc: I) -> Result<Self> {
        Self::make(I::zero(), I::one(), I::one(), disc)
    }

    pub fn from_rational(a: Ratio<I>, d: I) -> Self {
        Self {
            d,
            a,
            b: Ratio::zero(),
        }
    }

    pub fn from_integer(n: I, d: I) -> Self {
        Self::from_rational(Ratio::from_integer(n), d)
    }

    pub fn zero(d: I) -> Self {
        Self::from_integer(I::zero(), d)
    }

    pub fn one(d: I) -> Self {
        Self::from_integer(I::one(), d)
    }

    /// A rational in the same field as `self`.
    pub fn lift(&self, a: Ratio<I>) -> Self {
        Self::from_rational(a, self.d.clone())
    }

    /// An integer in the same field as `self`.
    pub fn lift_int(&self, n: I) -> Self {
        Self::from_integer(n, self.d.clone())
    }

    pub fn d(&self) -> &I {
        &self.d
    }

    pub fn a(&self) -> &Ratio<I> {
        &self.a
    }

    pub fn b(&self) -> &Ratio<I> {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            input(format!(
                "mismatched fields Q(sqrt({})) and Q(sqrt({}))",
                self.d, other.d
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            d: self.d.clone(),
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            d: self.d.clone(),
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = Ratio::from_integer(self.d.clone());
        Ok(Self {
            d: self.d.clone(),
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self * &other.inverse()?)
    }

    /// `(a - b*sqrt(d)) / (a^2 - b^2 d)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        let n = self.norm();
        Ok(Self {
            d: self.d.clone(),
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, s: &Ratio<I>) -> Self {
        Self {
            d: self.d.clone(),
            a: &self.a * s,
            b: &self.b * s,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            d: self.d.clone(),
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `x * conj(x) = a^2 - b^2 d`.
    pub fn norm(&self) -> Ratio<I> {
        &self.a * &self.a - &self.b * &self.b * Ratio::from_integer(self.d.clone())
    }

    /// Trace `x + conj(x) = 2a`.
    pub fn trace(&self) -> Ratio<I> {
        &self.a + &self.a
    }

    /// Exact sign under the real embedding: -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        let sa = ratio_sign(&self.a);
        let sb = ratio_sign(&self.b);
        if sb == 0 || sa == sb {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: the larger of a^2 and b^2 d wins (never equal, d is not a square)
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Ratio::from_integer(self.d.clone());
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// `(p, q, r)` with `self = (p + q*sqrt(d)) / r` and `r > 0`.
    fn integral_parts(&self) -> (I, I, I) {
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer().clone() * (r.clone() / self.a.denom().clone());
        let q = self.b.numer().clone() * (r.clone() / self.b.denom().clone());
        (p, q, r)
    }

    /// The unique integer `n` with `n <= self < n + 1`.
    pub fn floor(&self) -> I {
        let (p, q, r) = self.integral_parts();
        if q.is_zero() {
            return p.div_floor(&r);
        }
        // |q| sqrt(d) lies strictly between s and s + 1
        let s = (q.clone() * q.clone() * self.d.clone()).sqrt();
        if q.is_positive() {
            (p + s).div_floor(&r)
        } else {
            (p - s - I::one()).div_floor(&r)
        }
    }

    pub fn ceil(&self) -> I {
        -(-self.clone()).floor()
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let n = self.floor();
        Self {
            d: self.d.clone(),
            a: &self.a - Ratio::from_integer(n),
            b: self.b.clone(),
        }
    }

    /// Distance to the nearest integer, `min(frac, 1 - frac)`.
    pub fn dist_nearest_int(&self) -> Self {
        let f = self.frac();
        let g = self.lift_int(I::one()) - &f;
        if f.partial_cmp(&g) == Some(Ordering::Greater) {
            g
        } else {
            f
        }
    }

    /// Exact power; negative exponents go through the exact inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = self.lift_int(I::one());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Conversion with relative error at most `2^(1 - prec)`.
    pub fn to_real(&self, prec: u32) -> HighPrecReal {
        HighPrecReal::from_quad(self, prec)
    }

    /// Same element over another integer type.
    pub fn convert<J: QuadInt>(&self) -> Quad<J>
    where
        I: Into<J>,
    {
        let r = |x: &Ratio<I>| {
            Ratio::new_raw(x.numer().clone().into(), x.denom().clone().into())
        };
        Quad {
            d: self.d.clone().into(),
            a: r(&self.a),
            b: r(&self.b),
        }
    }
}

fn ratio_sign<I: QuadInt>(x: &Ratio<I>) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl<I: QuadInt> PartialOrd for Quad<I> {
    /// `None` when the operands live in different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.sign().cmp(&0))
    }
}

impl<I: QuadInt> fmt::Display for Quad<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = |x: &Ratio<I>| {
            if x.is_integer() {
                if x.is_one() {
                    String::new()
                } else {
                    format!("{x}")
                }
            } else {
                format!("({x})")
            }
        };
        let mag = coeff(&self.b.abs());
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{mag}√{}", self.d)
        } else {
            write!(f, "{} {sign} {mag}√{}", self.a, self.d)
        }
    }
}

impl<I: QuadInt> fmt::Debug for Quad<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quad({self})")
    }
}

impl<I: QuadInt> Neg for Quad<I> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            d: self.d,
            a: -self.a,
            b: -self.b,
        }
    }
}

impl<I: QuadInt> Neg for &Quad<I> {
    type Output = Quad<I>;
    fn neg(self) -> Quad<I> {
        -self.clone()
    }
}

// Operator forms panic on mismatched fields or division by zero; the
// `checked_*` methods report those as errors instead.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<I: QuadInt> $tr<&Quad<I>> for &Quad<I> {
            type Output = Quad<I>;
            fn $method(self, rhs: &Quad<I>) -> Quad<I> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<I: QuadInt> $tr<Quad<I>> for Quad<I> {
            type Output = Quad<I>;
            fn $method(self, rhs: Quad<I>) -> Quad<I> {
                (&self).$method(&rhs)
            }
        }
        impl<I: QuadInt> $tr<&Quad<I>> for Quad<I> {
            type Output = Quad<I>;
            fn $method(self, rhs: &Quad<I>) -> Quad<I> {
                (&self).$method(rhs)
            }
        }
        impl<I: QuadInt> $tr<Quad<I>> for &Quad<I> {
            type Output = Quad<I>;
            fn $method(self, rhs: Quad<I>) -> Quad<I> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);
