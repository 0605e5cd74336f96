//! Partial sums `xi_k(2m-1, alpha) = sum_{n<=k} cot(pi n alpha) / n^(2m-1)`
//! and the exponential sums `A_{n,q}(x) = sum_{0<|u|<=n} e(ux) u^-q`.
//!
//! Fractional parts are reduced exactly before anything is rounded: `{n alpha}`
//! can sit within `O(1/n)` of an integer, which is exactly where the
//! cotangent is largest.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::bernoulli::bern_poly_eval;
use crate::closedform::ba_value;
use crate::error::{input, Error, Result};
use crate::exactnum::{frac_ratio, HighPrecReal};
use crate::{QuadElem, Rational};

/// Terms per block in [`xi_partial_par`].
pub const BLOCK: u64 = 4096;

/// Default output precision in bits.
pub const DEFAULT_PREC: u32 = 96;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub k: u64,
    pub m: u32,
    pub value: HighPrecReal,
    pub prec: u32,
    pub alpha: String,
}

/// `{n alpha}`, exactly. Fails only when `n alpha` is an integer.
pub fn frac_n_alpha(n: u64, alpha: &QuadElem) -> Result<QuadElem> {
    let f = alpha.scale(&Rational::from_integer(BigInt::from(n))).frac();
    if f.is_zero() {
        return Err(Error::Pole(format!("{n} * ({alpha}) is an integer")));
    }
    Ok(f)
}

fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `cot(pi f)` for `0 < f < 1`.
///
/// Reduces to `g = min(f, 1 - f)` and, for `g > 1/4`, to
/// `tan(pi (1/2 - g))`, all exactly, so the float step never sees a
/// cancelled argument.
pub fn cot_pi_frac(f: &QuadElem, prec: u32) -> Result<HighPrecReal> {
    let half = f.lift(Ratio::new(BigInt::one(), BigInt::from(2)));
    let one = f.lift_int(BigInt::one());
    if f.sign() <= 0 || f >= &one {
        return input(format!("{f} is not in (0, 1)"));
    }
    let (negate, g) = if f > &half {
        (true, &one - f)
    } else {
        (false, f.clone())
    };
    if g == half {
        return Ok(HighPrecReal::zero(prec));
    }
    let g_approx = g.to_real(64).log2_abs().floor();
    let guard = 2 * (-g_approx).max(0.0) as u32 + 32;
    let work = prec + guard;
    let quarter = f.lift(Ratio::new(BigInt::one(), BigInt::from(4)));
    let pi = HighPrecReal::pi(work);
    let value = if g > quarter {
        let delta = (&half - &g).to_real(work);
        Float::with_val(work, pi.as_float() * delta.as_float()).tan()
    } else {
        let x = g.to_real(work);
        Float::with_val(work, pi.as_float() * x.as_float()).cot()
    };
    let value = HighPrecReal::from_float(value).with_prec(prec);
    Ok(if negate { -value } else { value })
}

/// Working precision for a `k`-term sum returned at `prec` bits.
pub fn working_prec(k: u64, prec: u32) -> u32 {
    prec + 2 * ceil_log2(k) + 32
}

fn check_alpha(alpha: &QuadElem) -> Result<()> {
    if alpha.is_rational() {
        return Err(Error::Pole(format!(
            "{alpha} is rational, so cot(pi n alpha) has poles"
        )));
    }
    Ok(())
}

fn term(n: u64, m: u32, alpha: &QuadElem, work: u32) -> Result<HighPrecReal> {
    let f = frac_n_alpha(n, alpha)?;
    let cot = cot_pi_frac(&f, work)?;
    let denom = HighPrecReal::from_bigint(&num_traits::pow(BigInt::from(n), 2 * m as usize - 1), work);
    Ok(&cot / &denom)
}

fn block_sum(lo: u64, hi: u64, m: u32, alpha: &QuadElem, work: u32) -> Result<HighPrecReal> {
    let mut acc = HighPrecReal::zero(work);
    for n in lo..=hi {
        acc = &acc + &term(n, m, alpha, work)?;
    }
    Ok(acc)
}

/// `xi_k(2m-1, alpha)` summed in ascending `n` at
/// [`working_prec`]`(k, prec)` bits and rounded to `prec`. `k = 0` gives 0.
pub fn xi_partial(k: u64, m: u32, alpha: &QuadElem, prec: u32) -> Result<SeriesResult> {
    check_alpha(alpha)?;
    let work = working_prec(k, prec);
    let sum = if k == 0 {
        HighPrecReal::zero(work)
    } else {
        block_sum(1, k, m, alpha, work)?
    };
    Ok(SeriesResult {
        k,
        m,
        value: sum.with_prec(prec),
        prec,
        alpha: alpha.to_string(),
    })
}

/// As [`xi_partial`], but with blocks of [`BLOCK`] terms summed in
/// parallel and combined by a fixed pairwise tree, so the result depends
/// only on the inputs.
pub fn xi_partial_par(k: u64, m: u32, alpha: &QuadElem, prec: u32) -> Result<SeriesResult> {
    check_alpha(alpha)?;
    let work = working_prec(k, prec);
    let nblocks = k.div_ceil(BLOCK);
    let mut level: Vec<HighPrecReal> = (0..nblocks)
        .into_par_iter()
        .map(|b| block_sum(b * BLOCK + 1, ((b + 1) * BLOCK).min(k), m, alpha, work))
        .collect::<Result<_>>()?;
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [x, y] => x + y,
                [x] => x.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    let sum = level.pop().unwrap_or_else(|| HighPrecReal::zero(work));
    Ok(SeriesResult {
        k,
        m,
        value: sum.with_prec(prec),
        prec,
        alpha: alpha.to_string(),
    })
}

/// `A_{n,q}(x)` as `(re, im)`: for even `q` the sum is
/// `2 sum cos(2 pi u x) / u^q` (real), for odd `q` it is
/// `2i sum sin(2 pi u x) / u^q` (imaginary).
pub fn a_nq(n: u64, q: u32, x: &Rational, prec: u32) -> Result<(HighPrecReal, HighPrecReal)> {
    if n == 0 || q == 0 {
        return input("A_{n,q} needs n, q >= 1");
    }
    if q == 1 && x.is_integer() {
        return Ok((HighPrecReal::zero(prec), HighPrecReal::zero(prec)));
    }
    let work = prec + ceil_log2(n) + 24;
    let two_pi = Float::with_val(work, HighPrecReal::pi(work).as_float() * 2u32);
    let (p, r) = (x.numer(), x.denom());
    let mut acc = Float::new(work);
    for u in 1..=n {
        // e(ux) = e({ux}) with {ux} = (u p mod r) / r
        let ub = BigInt::from(u);
        let phase = Ratio::new((&ub * p).mod_floor(r), r.clone());
        let angle = Float::with_val(work, &two_pi * crate::exactnum::ratio_to_rug(&phase));
        let trig = if q.is_multiple_of(2) { angle.cos() } else { angle.sin() };
        let upow = Float::with_val(work, u).pow(q);
        acc += Float::with_val(work, &trig / &upow);
    }
    acc *= 2u32;
    let total = HighPrecReal::from_float(acc).with_prec(prec);
    Ok(if q.is_multiple_of(2) {
        (total, HighPrecReal::zero(prec))
    } else {
        (HighPrecReal::zero(prec), total)
    })
}

/// `re + i*im` times `pi^pi_power`, with rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactComplexPi {
    pub re: Rational,
    pub im: Rational,
    pub pi_power: i32,
}

impl ExactComplexPi {
    pub fn to_real(&self, prec: u32) -> (HighPrecReal, HighPrecReal) {
        let pi = HighPrecReal::pi(prec + 16).powi(self.pi_power);
        let part = |x: &Rational| (&HighPrecReal::from_ratio(x, prec + 16) * &pi).with_prec(prec);
        (part(&self.re), part(&self.im))
    }
}

/// `lim_n A_{n,q}(x) = -B_q({x}) (2 pi i)^q / q!`.
///
/// The case `q = 1`, `x` integral is excluded: there every finite sum is 0.
pub fn a_limit(q: u32, x: &Rational) -> Result<ExactComplexPi> {
    if q == 0 {
        return input("q must be at least 1");
    }
    if q == 1 && x.is_integer() {
        return input("limit formula excludes q = 1 with integral x");
    }
    let b = bern_poly_eval(q as usize, &frac_ratio(x));
    let fact = (1..=q as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    let mag = -b * Rational::from_integer(BigInt::one() << q) / Rational::from_integer(fact);
    let (re, im) = match q % 4 {
        0 => (mag, Rational::zero()),
        1 => (Rational::zero(), mag),
        2 => (-mag, Rational::zero()),
        _ => (Rational::zero(), -mag),
    };
    Ok(ExactComplexPi {
        re,
        im,
        pi_power: q as i32,
    })
}

/// `n * |A_{n,q}(x) - lim A|`, the quantity kept bounded by the `O(1/n)` rate.
pub fn lemma1_scaled_deviation(n: u64, q: u32, x: &Rational, prec: u32) -> Result<f64> {
    let (re, im) = a_nq(n, q, x, prec)?;
    let (lre, lim) = a_limit(q, x)?.to_real(prec);
    let dre = &re - &lre;
    let dim = &im - &lim;
    let dist = (&(&dre * &dre) + &(&dim * &dim)).sqrt();
    Ok(dist.to_f64() * n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub k: u64,
    pub xi_k: HighPrecReal,
    pub abs_err: HighPrecReal,
}

/// `(k, xi_k, |xi_k - closed form|)` for each `k` in order.
pub fn convergence_table(alpha: &QuadElem, m: u32, ks: &[u64], prec: u32) -> Result<Vec<TableRow>> {
    let exact = ba_value(alpha, m, None)?.to_real(prec);
    ks.par_iter()
        .map(|&k| {
            let xi = xi_partial_par(k, m, alpha, prec)?.value;
            let err = (&xi - &exact).abs();
            Ok(TableRow {
                k,
                xi_k: xi,
                abs_err: err,
            })
        })
        .collect()
}

/// `true` when `x` is strictly inside `(0, 1)`; used for pole-safety checks.
pub fn in_open_unit(x: &QuadElem) -> bool {
    x.is_positive() && x < &x.lift_int(BigInt::one())
}
