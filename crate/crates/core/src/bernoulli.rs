//! Bernoulli numbers and polynomials from the generating function
//! `t e^{tx} / (e^t - 1) = sum B_n(x) t^n / n!`, so `B_1 = B_1(0) = -1/2`.

use std::sync::OnceLock;

use num_traits::{FromPrimitive, Num};

use crate::Rational;

/// `B_0 .. B_N` and the coefficient lists of `B_0(x) .. B_N(x)`.
///
/// Generic over any field-like scalar; exact over [`Rational`], approximate
/// over `f64`.
#[derive(Debug, Clone)]
pub struct BernoulliTable<T> {
    numbers: Vec<T>,
    /// `polys[n][k]` is the coefficient of `x^k` in `B_n(x)`.
    polys: Vec<Vec<T>>,
}

impl<T: Clone + Num + FromPrimitive> BernoulliTable<T> {
    pub const DEFAULT_MAX: usize = 64;

    /// Table covering indices `0..=max_n`.
    pub fn new(max_n: usize) -> Self {
        // Pascal rows up to n = max_n + 1, kept in T so nothing overflows
        let mut binom: Vec<Vec<T>> = vec![vec![T::one()]];
        for n in 1..=max_n + 1 {
            let prev = &binom[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(T::one());
            for k in 1..n {
                row.push(prev[k - 1].clone() + prev[k].clone());
            }
            row.push(T::one());
            binom.push(row);
        }

        // sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1
        let mut numbers: Vec<T> = Vec::with_capacity(max_n + 1);
        numbers.push(T::one());
        for n in 1..=max_n {
            let mut acc = T::zero();
            for (j, b) in numbers.iter().enumerate() {
                acc = acc + binom[n + 1][j].clone() * b.clone();
            }
            let n1 = T::from_usize(n + 1).expect("index fits the scalar");
            numbers.push(T::zero() - acc / n1);
        }

        // B_n(x) = sum_k C(n, k) B_{n-k} x^k
        let polys = (0..=max_n)
            .map(|n| {
                (0..=n)
                    .map(|k| binom[n][k].clone() * numbers[n - k].clone())
                    .collect()
            })
            .collect();

        Self { numbers, polys }
    }

    pub fn max_n(&self) -> usize {
        self.numbers.len() - 1
    }

    pub fn number(&self, n: usize) -> Option<&T> {
        self.numbers.get(n)
    }

    pub fn numbers(&self) -> &[T] {
        &self.numbers
    }

    /// Coefficients of `B_n(x)`, constant term first.
    pub fn poly(&self, n: usize) -> Option<&[T]> {
        self.polys.get(n).map(Vec::as_slice)
    }

    /// `B_n(x)` by Horner's rule.
    pub fn eval(&self, n: usize, x: &T) -> Option<T> {
        let coeffs = self.polys.get(n)?;
        Some(
            coeffs
                .iter()
                .rev()
                .fold(T::zero(), |acc, c| acc * x.clone() + c.clone()),
        )
    }
}

impl<T: Clone + Num + FromPrimitive> Default for BernoulliTable<T> {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX)
    }
}

/// Shared exact table up to [`BernoulliTable::DEFAULT_MAX`], built on first use.
pub fn default_table() -> &'static BernoulliTable<Rational> {
    static TABLE: OnceLock<BernoulliTable<Rational>> = OnceLock::new();
    TABLE.get_or_init(BernoulliTable::default)
}

fn with_table<R>(n: usize, f: impl FnOnce(&BernoulliTable<Rational>) -> R) -> R {
    let shared = default_table();
    if n <= shared.max_n() {
        f(shared)
    } else {
        f(&BernoulliTable::new(n))
    }
}

/// The Bernoulli number `B_n`.
pub fn bern_number(n: usize) -> Rational {
    with_table(n, |t| t.numbers[n].clone())
}

/// Coefficients of `B_n(x)`, constant term first.
pub fn bern_poly(n: usize) -> Vec<Rational> {
    with_table(n, |t| t.polys[n].clone())
}

/// `B_n(x)` at a rational point.
pub fn bern_poly_eval(n: usize, x: &Rational) -> Rational {
    with_table(n, |t| t.eval(n, x).expect("index is covered"))
}
