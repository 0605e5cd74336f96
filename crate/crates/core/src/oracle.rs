//! Brute-force exact evaluation of the double sum
//!
//! ```text
//! S_m(k) = -c * sum_{0<|u|<=k, 0<|v|<=K, c | u - dv} f_m(u, v),
//! f_m(u, v) = sum_{l=1}^{2m-1} eta^{2m-1-l} u^{l-2m} v^{-l},
//! ```
//!
//! with `K = floor(k / eta)`, and of the pieces it splits into. Everything
//! here is exact in `Q(sqrt D)` except the cyclotomic form of the first
//! deformation and the finite identity for the partial series, which are
//! evaluated numerically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedform::{big_k, correction_term, theorem1_partial_sum, theorem1_rhs};
use crate::error::{input, Result};
use crate::exactnum::{inv_int_pow, integer_range, HighPrecReal};
use crate::series::{a_nq, xi_partial};
use crate::{QuadElem, Rational, UniMat};

/// Largest `k` the exact sums accept by default.
pub const EXACT_K_MAX: u64 = 64;

/// The quantities attached to an `(alpha, V)` pair: `eta = c alpha + d`,
/// `V alpha`, and `K = floor(k / eta)`.
#[derive(Debug, Clone)]
pub struct Setup {
    pub alpha: QuadElem,
    pub v: UniMat,
    pub eta: QuadElem,
    pub v_alpha: QuadElem,
    pub k: u64,
    pub big_k: u64,
}

impl Setup {
    pub fn new(k: u64, alpha: &QuadElem, v: &UniMat) -> Result<Self> {
        if alpha.is_rational() {
            return input(format!("alpha = {alpha} is rational"));
        }
        if !v.c().is_positive() {
            return input(format!("c = {}, need c > 0", v.c()));
        }
        let eta = v.eta_of(alpha);
        if !eta.is_positive() {
            return input(format!("eta = {eta} is not positive"));
        }
        let v_alpha = v.moebius(alpha)?;
        let big_k = big_k(k, &eta)?
            .to_u64()
            .expect("K <= k / eta fits in u64 for eta > 0");
        Ok(Self {
            alpha: alpha.clone(),
            v: v.clone(),
            eta,
            v_alpha,
            k,
            big_k,
        })
    }

    fn c(&self) -> &BigInt {
        self.v.c()
    }

    fn zero(&self) -> QuadElem {
        QuadElem::zero(self.eta.d().clone())
    }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return input("m must be at least 1");
    }
    Ok(())
}

/// `f_m(u, v)` in polynomial form.
pub fn f_m(u: i64, v: i64, eta: &QuadElem, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    if u == 0 || v == 0 {
        return input("f_m needs u, v != 0");
    }
    let (u, v) = (BigInt::from(u), BigInt::from(v));
    let top = 2 * m - 1;
    let mut acc = QuadElem::zero(eta.d().clone());
    for l in 1..=top {
        let coeff = inv_int_pow(&u, 2 * m - l) * inv_int_pow(&v, l);
        acc = acc + eta.pow((top - l) as i64)?.scale(&coeff);
    }
    Ok(acc)
}

/// `f_m(u, v) = (u^{2m-1} - eta^{2m-1} v^{2m-1}) / (u^{2m-1} v^{2m-1} (u - eta v))`.
pub fn f_m_quotient(u: i64, v: i64, eta: &QuadElem, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    if u == 0 || v == 0 {
        return input("f_m needs u, v != 0");
    }
    let top = 2 * m as usize - 1;
    let up = num_traits::pow(BigInt::from(u), top);
    let vp = num_traits::pow(BigInt::from(v), top);
    let num = eta.lift_int(up.clone()) - eta.pow(top as i64)?.scale(&Ratio::from_integer(vp.clone()));
    let lin = eta.lift_int(BigInt::from(u)) - eta.scale(&Ratio::from_integer(BigInt::from(v)));
    let den = lin.scale(&Ratio::from_integer(up * vp));
    num.checked_div(&den)
}

/// `R_l = sum_{0<|u|<=k, 0<|v|<=K, c | u - dv} u^{l-2m} v^{-l}` for
/// `l = 1 ..= 2m-1` (index 0 unused).
fn pair_sums(setup: &Setup, m: u32) -> Vec<Rational> {
    let c = setup.c().clone();
    let cu = c.to_u64().expect("c fits in u64") as usize;
    let top = 2 * m;
    // g[r][e] = sum over 0 < |u| <= k with u = r (mod c) of u^-e
    let mut g = vec![vec![Rational::zero(); top as usize]; cu];
    for u in 1..=setup.k as i64 {
        for s in [u, -u] {
            let ub = BigInt::from(s);
            let r = ub.mod_floor(&c).to_usize().unwrap();
            for e in 1..top {
                g[r][e as usize] += inv_int_pow(&ub, e);
            }
        }
    }
    let mut sums = vec![Rational::zero(); top as usize];
    for v in 1..=setup.big_k as i64 {
        for s in [v, -v] {
            let vb = BigInt::from(s);
            let r = (setup.v.d() * &vb).mod_floor(&c).to_usize().unwrap();
            for l in 1..top {
                let gu = &g[r][(top - l) as usize];
                if !gu.is_zero() {
                    sums[l as usize] += gu * inv_int_pow(&vb, l);
                }
            }
        }
    }
    sums
}

/// `S_m(k)` exactly.
pub fn s_exact(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    let setup = Setup::new(k, alpha, v)?;
    s_from_setup(&setup, m)
}

fn s_from_setup(setup: &Setup, m: u32) -> Result<QuadElem> {
    let sums = pair_sums(setup, m);
    let top = 2 * m as i64 - 1;
    let mut acc = setup.zero();
    for (l, r) in sums.iter().enumerate().skip(1) {
        if !r.is_zero() {
            acc = acc + setup.eta.pow(top - l as i64)?.scale(r);
        }
    }
    Ok(acc.scale(&Ratio::from_integer(-setup.c().clone())))
}

/// `S_m(k)` summed pair by pair over `u > 0` only and doubled, using the
/// invariance of the summand under `(u, v) -> (-u, -v)`.
pub fn s_exact_by_pairs(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    let setup = Setup::new(k, alpha, v)?;
    let c = setup.c().clone();
    let big_k = setup.big_k as i64;
    let mut acc = setup.zero();
    for u in 1..=k as i64 {
        for w in (-big_k..=big_k).filter(|&w| w != 0) {
            let diff = BigInt::from(u) - setup.v.d() * BigInt::from(w);
            if diff.is_multiple_of(&c) {
                acc = acc + f_m(u, w, &setup.eta, m)?;
            }
        }
    }
    Ok(acc.scale(&Ratio::from_integer(BigInt::from(-2) * c)))
}

/// `sum_x 1/(x - w)` over the integers `w` in `[lo, hi]`.
fn reciprocal_sum(x: &QuadElem, lo: &Rational, hi: &Rational) -> Result<QuadElem> {
    let mut acc = x.lift_int(BigInt::zero());
    if let Some((first, last)) = integer_range(lo, hi) {
        let mut w = first;
        while w <= last {
            acc = acc + (x - &x.lift_int(w.clone())).inverse()?;
            w += 1;
        }
    }
    Ok(acc)
}

/// `T^(1) = sum_{v=1}^{K} v^{1-2m} sum_{-(k+dv)/c <= w <= (k-dv)/c} 1/(alpha v - w)`.
pub fn t1_exact(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    t1_from_setup(&Setup::new(k, alpha, v)?, m)
}

fn t1_from_setup(s: &Setup, m: u32) -> Result<QuadElem> {
    let (c, d) = (s.c(), s.v.d());
    let kb = BigInt::from(s.k);
    let mut acc = s.zero();
    for vv in 1..=s.big_k {
        let vb = BigInt::from(vv);
        let lo = Ratio::new(-(&kb + d * &vb), c.clone());
        let hi = Ratio::new(&kb - d * &vb, c.clone());
        let inner = reciprocal_sum(&s.alpha.scale(&Ratio::from_integer(vb.clone())), &lo, &hi)?;
        acc = acc + inner.scale(&inv_int_pow(&vb, 2 * m - 1));
    }
    Ok(acc)
}

/// `T^(2) = sum_{u=1}^{k} u^{1-2m} sum_{-(K-au)/c <= w <= (K+au)/c} 1/(V(alpha) u - w)`.
pub fn t2_exact(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    t2_from_setup(&Setup::new(k, alpha, v)?, m)
}

fn t2_from_setup(s: &Setup, m: u32) -> Result<QuadElem> {
    let (a, c) = (s.v.a(), s.c());
    let kb = BigInt::from(s.big_k);
    let mut acc = s.zero();
    for u in 1..=s.k {
        let ub = BigInt::from(u);
        let lo = Ratio::new(-(&kb - a * &ub), c.clone());
        let hi = Ratio::new(&kb + a * &ub, c.clone());
        let inner = reciprocal_sum(&s.v_alpha.scale(&Ratio::from_integer(ub.clone())), &lo, &hi)?;
        acc = acc + inner.scale(&inv_int_pow(&ub, 2 * m - 1));
    }
    Ok(acc)
}

/// `sum_{1 <= n <= N, c | n} n^-e`.
fn divisor_power_sum(n_max: u64, c: &BigInt, e: u32) -> Rational {
    let step = c.to_u64().expect("c fits in u64");
    (1..=n_max / step).fold(Rational::zero(), |acc, j| {
        acc + inv_int_pow(&BigInt::from(j * step), e)
    })
}

/// `U = -(2c/eta) sum_{c | v <= K} v^-2m - 2c eta^{2m-1} sum_{c | u <= k} u^-2m`.
pub fn u_exact(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    u_from_setup(&Setup::new(k, alpha, v)?, m)
}

fn u_from_setup(s: &Setup, m: u32) -> Result<QuadElem> {
    let c = s.c();
    let two_c = Ratio::from_integer(BigInt::from(2) * c);
    let first = s.eta.inverse()?.scale(&(divisor_power_sum(s.big_k, c, 2 * m) * &two_c));
    let second = s
        .eta
        .pow(2 * m as i64 - 1)?
        .scale(&(divisor_power_sum(s.k, c, 2 * m) * &two_c));
    Ok(-(first + second))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformReport {
    pub k: u64,
    pub m: u32,
    pub s: QuadElem,
    pub t1: QuadElem,
    pub t2: QuadElem,
    pub u: QuadElem,
    /// `S == 2 T1 - 2 eta^{2m-2} T2 + U`, decided exactly.
    pub second_deformation_holds: bool,
    /// Filled in only when the numeric check was requested.
    pub first_deformation_residual: Option<HighPrecReal>,
}

/// Exact check of `S = 2 T1 - 2 eta^{2m-2} T2 + U`.
pub fn check_second_deformation(k: u64, alpha: &QuadElem, v: &UniMat, m: u32) -> Result<DeformReport> {
    check_m(m)?;
    let setup = Setup::new(k, alpha, v)?;
    let s = s_from_setup(&setup, m)?;
    let t1 = t1_from_setup(&setup, m)?;
    let t2 = t2_from_setup(&setup, m)?;
    let u = u_from_setup(&setup, m)?;
    let two = Ratio::from_integer(BigInt::from(2));
    let rhs = t1.scale(&two) - setup.eta.pow(2 * m as i64 - 2)?.scale(&two) * &t2 + &u;
    Ok(DeformReport {
        k,
        m,
        second_deformation_holds: s == rhs,
        s,
        t1,
        t2,
        u,
        first_deformation_residual: None,
    })
}

/// Both deformations; the numeric residual is stored in the report.
pub fn check_deformations(k: u64, alpha: &QuadElem, v: &UniMat, m: u32, prec: u32) -> Result<DeformReport> {
    let mut report = check_second_deformation(k, alpha, v, m)?;
    report.first_deformation_residual = Some(check_first_deformation(k, alpha, v, m, prec)?.residual);
    Ok(report)
}

/// Numeric comparison of `S_m(k)` with the exponential-sum form
/// `-sum_l eta^{2m-1-l} sum_{j mod c} A_{k,2m-l}(j/c) A_{K,l}(-dj/c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstDeformation {
    pub lhs: HighPrecReal,
    pub rhs_re: HighPrecReal,
    pub rhs_im: HighPrecReal,
    /// `|S - RHS|`, counting the imaginary part of the right side.
    pub residual: HighPrecReal,
    /// `max(|S|, 1)`.
    pub scale: HighPrecReal,
}

impl FirstDeformation {
    /// `residual <= 2^-bits * scale`.
    pub fn within(&self, bits: i32) -> bool {
        let bound = &self.scale * &HighPrecReal::from_i64(2, 64).powi(-bits);
        self.residual <= bound
    }
}

fn a_or_zero(n: u64, q: u32, x: &Rational, prec: u32) -> Result<(HighPrecReal, HighPrecReal)> {
    if n == 0 {
        return Ok((HighPrecReal::zero(prec), HighPrecReal::zero(prec)));
    }
    a_nq(n, q, x, prec)
}

pub fn check_first_deformation(
    k: u64,
    alpha: &QuadElem,
    v: &UniMat,
    m: u32,
    prec: u32,
) -> Result<FirstDeformation> {
    check_m(m)?;
    let setup = Setup::new(k, alpha, v)?;
    let work = prec + 32;
    let c = setup.c().clone();
    let d = setup.v.d().clone();
    let top = 2 * m;
    let mut re = HighPrecReal::zero(work);
    let mut im = HighPrecReal::zero(work);
    for l in 1..top {
        let mut inner_re = HighPrecReal::zero(work);
        let mut inner_im = HighPrecReal::zero(work);
        let mut j = BigInt::zero();
        while j < c {
            let x1 = Ratio::new(j.clone(), c.clone());
            let x2 = Ratio::new(-(&d * &j), c.clone());
            let (r1, i1) = a_or_zero(k, top - l, &x1, work)?;
            let (r2, i2) = a_or_zero(setup.big_k, l, &x2, work)?;
            inner_re = &inner_re + &(&(&r1 * &r2) - &(&i1 * &i2));
            inner_im = &inner_im + &(&(&r1 * &i2) + &(&i1 * &r2));
            j += 1;
        }
        let eta_pow = setup.eta.pow((top - 1 - l) as i64)?.to_real(work);
        re = &re - &(&eta_pow * &inner_re);
        im = &im - &(&eta_pow * &inner_im);
    }
    let lhs = s_from_setup(&setup, m)?.to_real(work);
    let dre = &lhs - &re;
    let residual = (&(&dre * &dre) + &(&im * &im)).sqrt().with_prec(prec);
    let scale = lhs.abs().max(HighPrecReal::from_i64(1, work)).with_prec(prec);
    Ok(FirstDeformation {
        lhs: lhs.with_prec(prec),
        rhs_re: re.with_prec(prec),
        rhs_im: im.with_prec(prec),
        residual,
        scale,
    })
}

/// `S_m(k) - (-1)^{m-1} (2 pi)^{2m} sum_{l=1}^{2m-1} w_l eta^{2m-1-l}`,
/// the gap between the double sum and its Bernoulli limit.
pub fn s_limit_gap(k: u64, alpha: &QuadElem, v: &UniMat, m: u32, prec: u32) -> Result<HighPrecReal> {
    check_m(m)?;
    let setup = Setup::new(k, alpha, v)?;
    let work = prec + 32;
    let s = s_from_setup(&setup, m)?.to_real(work);
    let partial = theorem1_partial_sum(v, &setup.eta, m, 1..(2 * m as usize))?.to_real(work);
    let two_pi = &HighPrecReal::pi(work) * &HighPrecReal::from_i64(2, work);
    let limit = &partial * &two_pi.powi(2 * m as i32);
    let limit = if m % 2 == 1 { limit } else { -limit };
    Ok((&s - &limit).with_prec(prec))
}

/// `xi_K(alpha) - eta^{2m-2} xi_k(V alpha) + correction - closed form`,
/// signed, at `prec` bits.
pub fn theorem1_residual(k: u64, alpha: &QuadElem, v: &UniMat, m: u32, prec: u32) -> Result<HighPrecReal> {
    let setup = Setup::new(k, alpha, v)?;
    if setup.v_alpha.is_rational() {
        return input(format!("V alpha = {} is rational", setup.v_alpha));
    }
    let work = prec + 32;
    let xi_big_k = xi_partial(setup.big_k, m, alpha, work)?.value;
    let xi_k = xi_partial(k, m, &setup.v_alpha, work)?.value;
    let eta_pow = setup.eta.pow(2 * m as i64 - 2)?.to_real(work);
    let corr = correction_term(k, alpha, v, &setup.eta, m)?.to_real(work);
    let rhs = theorem1_rhs(v, &setup.eta, m)?.to_real(work);
    let lhs = &(&xi_big_k - &(&eta_pow * &xi_k)) + &corr;
    Ok((&lhs - &rhs).with_prec(prec))
}

/// `per` distinct pseudorandom integers in each dyadic block
/// `[2^a, 2^{a+1})`, `a` in `exps`, reproducible from `seed`.
pub fn dyadic_sample(seed: u64, exps: std::ops::RangeInclusive<u32>, per: usize) -> Vec<(u32, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    exps.map(|a| {
        let (lo, hi) = (1u64 << a, 1u64 << (a + 1));
        let want = per.min((hi - lo) as usize);
        let mut ks: Vec<u64> = Vec::with_capacity(want);
        while ks.len() < want {
            let k = rng.gen_range(lo..hi);
            if !ks.contains(&k) {
                ks.push(k);
            }
        }
        ks.sort_unstable();
        (a, ks)
    })
    .collect()
}

/// `k |R(k)|` maximised over each dyadic block of [`dyadic_sample`].
pub fn scaled_residual_maxima(
    alpha: &QuadElem,
    v: &UniMat,
    m: u32,
    prec: u32,
    sample: &[(u32, Vec<u64>)],
) -> Result<Vec<(u32, f64)>> {
    sample
        .iter()
        .map(|(a, ks)| {
            let mut best = 0.0f64;
            for &k in ks {
                let r = theorem1_residual(k, alpha, v, m, prec)?;
                best = best.max(r.abs().to_f64() * k as f64);
            }
            Ok((*a, best))
        })
        .collect()
}
