//! Exact right-hand sides: the Bernoulli double sum
//!
//! ```text
//! sum_{l=0}^{2m} sum_{j mod c} B_l(x_j) B_{2m-l}(y_j) / (l! (2m-l)!) * eta^{2m-l-1},
//! x_j = 1 - {dj/c},  y_j = {j/c},
//! ```
//!
//! the closed form of `xi(2m-1, alpha)` built from it, the boundary
//! correction term of the finite identity, and the reciprocity polynomial
//! with Bernoulli-number coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::{default_table, BernoulliTable};
use crate::error::{input, Error, Result};
use crate::exactnum::{frac_ratio, HighPrecReal};
use crate::modular::{stabilizer, validate_pair};
use crate::{QuadElem, Rational, UniMat};

/// Guard bits when turning an exact value into a float.
const GUARD: u32 = 16;

/// `coeff * pi^pi_power`, kept exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiValue {
    pub coeff: QuadElem,
    pub pi_power: i32,
}

impl PiValue {
    pub fn new(coeff: QuadElem, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    pub fn to_real(&self, prec: u32) -> HighPrecReal {
        let work = prec + GUARD;
        let c = self.coeff.to_real(work);
        let pi = HighPrecReal::pi(work).powi(self.pi_power);
        (&c * &pi).with_prec(prec)
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * pi^{}", self.coeff, self.pi_power)
    }
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return input(format!("m = {m}, need m >= 2"));
    }
    Ok(())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn table_for(n: usize) -> std::borrow::Cow<'static, BernoulliTable<Rational>> {
    let t = default_table();
    if n <= t.max_n() {
        std::borrow::Cow::Borrowed(t)
    } else {
        std::borrow::Cow::Owned(BernoulliTable::new(n))
    }
}

/// `(x_j, y_j) = (1 - {dj/c}, {j/c})` for `j = 0 .. c-1`.
pub fn xj_yj(v: &UniMat) -> Result<Vec<(Rational, Rational)>> {
    let c = v.c();
    if !c.is_positive() {
        return input(format!("c = {c}, need c > 0"));
    }
    let mut out = Vec::new();
    let mut j = BigInt::zero();
    while &j < c {
        let x = Rational::one() - frac_ratio(&Ratio::new(v.d() * &j, c.clone()));
        let y = frac_ratio(&Ratio::new(j.clone(), c.clone()));
        out.push((x, y));
        j += 1;
    }
    Ok(out)
}

/// Rational weights `w_l = sum_j B_l(x_j) B_{2m-l}(y_j) / (l! (2m-l)!)`,
/// `l = 0 ..= 2m`.
pub fn theorem1_weights(v: &UniMat, m: u32) -> Result<Vec<Rational>> {
    let n = 2 * m as usize;
    let points = xj_yj(v)?;
    let table = table_for(n);
    Ok((0..=n)
        .map(|l| {
            let fact = Rational::from_integer(factorial(l) * factorial(n - l));
            let s = points.iter().fold(Rational::zero(), |acc, (x, y)| {
                acc + table.eval(l, x).unwrap() * table.eval(n - l, y).unwrap()
            });
            s / fact
        })
        .collect())
}

/// `eta^e`, using `conj(eta)` for the inverse once `norm(eta) = 1`.
fn eta_power(eta: &QuadElem, e: i64) -> Result<QuadElem> {
    if e < 0 && eta.norm().is_one() {
        return eta.conj().pow(-e);
    }
    eta.pow(e)
}

/// `sum_{l in ls} w_l eta^{2m-1-l}` for a subset of indices.
pub fn theorem1_partial_sum(
    v: &UniMat,
    eta: &QuadElem,
    m: u32,
    ls: impl IntoIterator<Item = usize>,
) -> Result<QuadElem> {
    if eta.is_zero() {
        return Err(Error::Arithmetic("eta = 0".into()));
    }
    let w = theorem1_weights(v, m)?;
    let top = 2 * m as i64 - 1;
    let mut acc = QuadElem::zero(eta.d().clone());
    for l in ls {
        if w[l].is_zero() {
            continue;
        }
        acc = acc + eta_power(eta, top - l as i64)?.scale(&w[l]);
    }
    Ok(acc)
}

/// The full double sum over `l = 0 ..= 2m`.
pub fn theorem1_sum(v: &UniMat, eta: &QuadElem, m: u32) -> Result<QuadElem> {
    check_m(m)?;
    theorem1_partial_sum(v, eta, m, 0..=2 * m as usize)
}

/// `(-1)^(m-1) (2 pi)^(2m-1) * theorem1_sum`, the main term of the finite identity.
pub fn theorem1_rhs(v: &UniMat, eta: &QuadElem, m: u32) -> Result<PiValue> {
    let s = theorem1_sum(v, eta, m)?;
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let scale = Rational::from_integer(BigInt::from(sign) << (2 * m - 1));
    Ok(PiValue::new(s.scale(&scale), 2 * m as i32 - 1))
}

/// Closed-form `xi(2m-1, alpha)` as an exact multiple of `pi^(2m-1)`.
///
/// Without `v`, the pair `(V, eta)` comes from [`stabilizer`]. A supplied
/// `v` must fix `alpha` with `eta` a totally positive unit.
pub fn ba_value(alpha: &QuadElem, m: u32, v: Option<&UniMat>) -> Result<PiValue> {
    check_m(m)?;
    if alpha.is_rational() {
        return input(format!("{alpha} is rational"));
    }
    let (v, eta) = match v {
        Some(v) => (v.clone(), v.eta_of(alpha)),
        None => stabilizer(alpha)?,
    };
    let report = validate_pair(alpha, &v, &eta);
    if !report.all_ok() {
        return input(format!(
            "{v} is not a valid stabilizer of {alpha}: {:?}",
            report.failures()
        ));
    }
    let eta_pow = eta.pow(2 * m as i64 - 2)?;
    if eta_pow.is_one() {
        return Err(Error::DegenerateUnit(2 * m - 2));
    }
    let rhs = theorem1_rhs(&v, &eta, m)?;
    let coeff = rhs.coeff.checked_div(&(eta.lift_int(BigInt::one()) - eta_pow))?;
    Ok(PiValue::new(coeff, rhs.pi_power))
}

/// `K = floor(k / eta)`.
pub fn big_k(k: u64, eta: &QuadElem) -> Result<BigInt> {
    Ok(eta.lift_int(BigInt::from(k)).checked_div(eta)?.floor())
}

/// `D_k = 1 - {(K - a k)/c} - {k/eta}/c`, checked positive.
pub fn correction_denominator(k: u64, v: &UniMat, eta: &QuadElem) -> Result<QuadElem> {
    if eta.is_rational() {
        return input(format!("eta = {eta} is rational"));
    }
    if !v.c().is_positive() {
        return input(format!("c = {}, need c > 0", v.c()));
    }
    let kq = eta.lift_int(BigInt::from(k));
    let k_over_eta = kq.checked_div(eta)?;
    let big_k = k_over_eta.floor();
    let c = v.c();
    let first = frac_ratio(&Ratio::new(&big_k - v.a() * BigInt::from(k), c.clone()));
    let second = k_over_eta.frac().scale(&Ratio::new(BigInt::one(), c.clone()));
    let dk = eta.lift(Rational::one() - first) - second;
    if !dk.is_positive() {
        return Err(Error::Internal(format!(
            "correction denominator {dk} is not positive at k = {k}"
        )));
    }
    Ok(dk)
}

/// `eta^(2m-2) / (pi k^(2m-1) D_k)`.
pub fn correction_term(
    k: u64,
    alpha: &QuadElem,
    v: &UniMat,
    eta: &QuadElem,
    m: u32,
) -> Result<PiValue> {
    check_m(m)?;
    if alpha.d() != eta.d() {
        return input("alpha and eta live in different fields");
    }
    let dk = correction_denominator(k, v, eta)?;
    let kpow = Rational::from_integer(num_traits::pow(BigInt::from(k), 2 * m as usize - 1));
    let coeff = eta.pow(2 * m as i64 - 2)?.checked_div(&dk.scale(&kpow))?;
    Ok(PiValue::new(coeff, -1))
}

/// `c_l = B_l B_{2m-l} / (l! (2m-l)!)`, `l = 0 ..= 2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LerchPoly {
    pub m: u32,
    pub coeffs: Vec<Rational>,
}

pub fn lerch_rhs(m: u32) -> Result<LerchPoly> {
    check_m(m)?;
    let n = 2 * m as usize;
    let t = table_for(n);
    let coeffs = (0..=n)
        .map(|l| {
            let num = t.number(l).unwrap() * t.number(n - l).unwrap();
            num / Rational::from_integer(factorial(l) * factorial(n - l))
        })
        .collect();
    Ok(LerchPoly { m, coeffs })
}

impl LerchPoly {
    fn prefactor_sign(&self) -> i32 {
        if self.m % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// `(-1)^(m-1) (2 pi)^(2m-1) sum_l c_l alpha^(2m-l-1)` at a real `alpha != 0`.
    pub fn eval(&self, alpha: &HighPrecReal, prec: u32) -> Result<HighPrecReal> {
        if alpha.is_zero() {
            return Err(Error::Arithmetic("alpha = 0".into()));
        }
        let work = prec + GUARD;
        let alpha = alpha.with_prec(work);
        let top = 2 * self.m as i32 - 1;
        let mut acc = HighPrecReal::zero(work);
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &HighPrecReal::from_ratio(c, work) * &alpha.powi(top - l as i32);
            acc = &acc + &term;
        }
        let two_pi = &HighPrecReal::pi(work) * &HighPrecReal::from_i64(2, work);
        let scale = two_pi.powi(top);
        let out = &acc * &scale;
        let out = if self.prefactor_sign() < 0 { -out } else { out };
        Ok(out.with_prec(prec))
    }

    /// Exact value at a quadratic `alpha` as a multiple of `pi^(2m-1)`.
    pub fn exact_at(&self, alpha: &QuadElem) -> Result<PiValue> {
        let top = 2 * self.m as i64 - 1;
        let mut acc = QuadElem::zero(alpha.d().clone());
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + alpha.pow(top - l as i64)?.scale(c);
        }
        let scale =
            Rational::from_integer(BigInt::from(self.prefactor_sign()) << (2 * self.m - 1));
        Ok(PiValue::new(acc.scale(&scale), top as i32))
    }
}

/// Evaluates a [`LerchPoly`]; see [`LerchPoly::eval`].
pub fn lerch_eval(poly: &LerchPoly, alpha: &HighPrecReal, prec: u32) -> Result<HighPrecReal> {
    poly.eval(alpha, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Mat2;

    fn mk(p: i64, q: i64, r: i64, d: i64) -> QuadElem {
        QuadElem::make(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    fn mat(a: i64, b: i64, c: i64, d: i64) -> UniMat {
        Mat2::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(n.into(), d.into())
    }

    #[test]
    fn sample_points() {
        assert_eq!(xj_yj(&mat(1, 6, 1, 7)).unwrap(), vec![(q(1, 1), q(0, 1))]);
        assert_eq!(
            xj_yj(&mat(3, 4, 2, 3)).unwrap(),
            vec![(q(1, 1), q(0, 1)), (q(1, 2), q(1, 2))]
        );
        assert_eq!(xj_yj(&mat(2, 1, 1, 1)).unwrap(), vec![(q(1, 1), q(0, 1))]);
        assert!(matches!(xj_yj(&Mat2::identity()), Err(Error::Input(_))));
    }

    /// Straight double loop over (l, j) with powers by repeated multiplication.
    fn naive_sum(v: &UniMat, eta: &QuadElem, m: u32) -> QuadElem {
        let n = 2 * m as usize;
        let c = v.c().try_into().unwrap();
        let d: i64 = v.d().try_into().unwrap();
        let bern = |k: usize, x: &Rational| crate::bernoulli::bern_poly_eval(k, x);
        let fact = |k: usize| (1..=k as i64).product::<i64>();
        let mut acc = QuadElem::zero(eta.d().clone());
        for l in 0..=n {
            let e = n as i64 - 1 - l as i64;
            let mut p = QuadElem::one(eta.d().clone());
            let base = if e < 0 { eta.inverse().unwrap() } else { eta.clone() };
            for _ in 0..e.abs() {
                p = &p * &base;
            }
            for j in 0..c {
                let x = Rational::one() - frac_ratio(&q(d * j, c));
                let y = frac_ratio(&q(j, c));
                let w = bern(l, &x) * bern(n - l, &y) / q(fact(l) * fact(n - l), 1);
                acc = acc + p.scale(&w);
            }
        }
        acc
    }

    #[test]
    fn theorem1_sum_matches_naive_loop() {
        for (v, alpha) in [
            (mat(3, 4, 2, 3), mk(0, 1, 1, 2)),
            (mat(1, 0, 1, 1), mk(0, 1, 1, 2)),
            (mat(2, 1, 1, 1), mk(1, 1, 2, 5)),
            (mat(5, 2, 7, 3), mk(1, 2, 3, 3)),
        ] {
            let eta = v.eta_of(&alpha);
            for m in 2..=4 {
                assert_eq!(theorem1_sum(&v, &eta, m).unwrap(), naive_sum(&v, &eta, m));
            }
        }
    }

    #[test]
    fn c_one_case_by_hand() {
        // x_0 = 1, y_0 = 0: B_l(1) B_{4-l}(0) / (l! (4-l)!) eta^(3-l)
        // l=0: -1/720 eta^3, l=1: 0, l=2: 1/144 eta, l=3: 0, l=4: -1/720 eta^-1
        let v = mat(1, 0, 1, 1);
        let eta = mk(1, 1, 1, 2);
        let expected = eta.pow(3).unwrap().scale(&q(-1, 720))
            + eta.scale(&q(1, 144))
            + eta.inverse().unwrap().scale(&q(-1, 720));
        assert_eq!(theorem1_sum(&v, &eta, 2).unwrap(), expected);
    }

    #[test]
    fn conjugation_equivariance() {
        let v = mat(3, 4, 2, 3);
        let eta = mk(3, 2, 1, 2);
        for m in 2..=5 {
            let s = theorem1_sum(&v, &eta, m).unwrap();
            assert_eq!(theorem1_sum(&v, &eta.conj(), m).unwrap(), s.conj());
        }
    }

    #[test]
    fn ba_value_structure() {
        let s2 = mk(0, 1, 1, 2);
        let val = ba_value(&s2, 2, None).unwrap();
        assert_eq!(val.pi_power, 3);
        assert_eq!(ba_value(&s2, 3, None).unwrap().pi_power, 5);
        let x = val.to_real(128).to_f64();
        assert!((x - 0.121_804_158_333_257_3).abs() < 1e-15, "{x}");

        // (1 - eta^2) * value = -2^3 * theorem1_sum
        let (v, eta) = stabilizer(&s2).unwrap();
        for m in 2..=4 {
            let val = ba_value(&s2, m, Some(&v)).unwrap();
            let lhs = &val.coeff * &(QuadElem::one(2.into()) - eta.pow(2 * m as i64 - 2).unwrap());
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let rhs = theorem1_sum(&v, &eta, m)
                .unwrap()
                .scale(&Rational::from_integer(BigInt::from(sign) << (2 * m - 1)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ba_value_errors() {
        let s2 = mk(0, 1, 1, 2);
        assert!(matches!(ba_value(&s2, 1, None), Err(Error::Input(_))));
        assert!(matches!(
            ba_value(&QuadElem::one(2.into()), 2, None),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            ba_value(&s2, 2, Some(&mat(1, 0, 1, 1))),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn ba_value_from_powered_pair() {
        let s2 = mk(0, 1, 1, 2);
        let v = mat(3, 4, 2, 3);
        for m in [2, 3] {
            let a = ba_value(&s2, m, Some(&v)).unwrap().to_real(192);
            let b = ba_value(&s2, m, Some(&v.pow(2))).unwrap().to_real(192);
            let diff = (&a - &b).abs();
            assert!(diff.is_zero() || diff.log2_abs() <= -172.0);
        }
    }

    #[test]
    fn correction_examples() {
        let s2 = mk(0, 1, 1, 2);
        let v = mat(3, 4, 2, 3);
        let eta = mk(3, 2, 1, 2);
        assert_eq!(big_k(6, &eta).unwrap(), BigInt::from(1));
        assert_eq!(big_k(1, &eta).unwrap(), BigInt::from(0));
        // k = 6: K = 1, (K - 3*6)/2 = -17/2 -> {.} = 1/2; {6/eta} = 6(3-2√2) - 1 = 17 - 12√2
        let dk = correction_denominator(6, &v, &eta).unwrap();
        let expected = mk(1, 0, 2, 2) - mk(17, -12, 2, 2);
        assert_eq!(dk, expected);
        let term = correction_term(6, &s2, &v, &eta, 2).unwrap();
        assert_eq!(term.pi_power, -1);
        let numeric = term.to_real(128).to_f64();
        let e = 3.0 + 2.0 * 2f64.sqrt();
        let k_over = 6.0 / e;
        let d = 1.0 - 0.5 - (k_over - k_over.floor()) / 2.0;
        let want = e * e / (std::f64::consts::PI * 216.0 * d);
        assert!((numeric - want).abs() < 1e-12 * want);
    }

    #[test]
    fn correction_zero_first_fraction() {
        // c = 1 makes {(K - ak)/c} vanish
        let v = mat(1, 0, 1, 1);
        let eta = mk(1, 1, 1, 2);
        for k in 1..50u64 {
            let dk = correction_denominator(k, &v, &eta).unwrap();
            let k_over = eta.lift_int(BigInt::from(k)).checked_div(&eta).unwrap();
            assert_eq!(dk, eta.lift_int(BigInt::one()) - k_over.frac());
        }
    }

    #[test]
    fn correction_denominator_bound() {
        let v = mat(3, 4, 2, 3);
        let eta = mk(3, 2, 1, 2);
        for k in 1..400u64 {
            let dk = correction_denominator(k, &v, &eta).unwrap();
            let k_over = eta.lift_int(BigInt::from(k)).checked_div(&eta).unwrap();
            let bound = k_over.dist_nearest_int().scale(&q(1, 2));
            assert!(dk >= bound, "k = {k}");
        }
        assert!(matches!(
            correction_denominator(3, &v, &QuadElem::from_integer(2.into(), 2.into())),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn lerch_coefficients() {
        let l = lerch_rhs(2).unwrap();
        assert_eq!(
            l.coeffs,
            vec![q(-1, 720), q(0, 1), q(1, 144), q(0, 1), q(-1, 720)]
        );
        for m in 2..=6 {
            let l = lerch_rhs(m).unwrap();
            let n = 2 * m as usize;
            for i in 0..=n {
                assert_eq!(l.coeffs[i], l.coeffs[n - i]);
                if i % 2 == 1 {
                    assert!(l.coeffs[i].is_zero());
                }
            }
        }
        assert!(lerch_rhs(1).is_err());
    }

    #[test]
    fn lerch_exact_and_float_agree() {
        let s2 = mk(0, 1, 1, 2);
        for m in 2..=4 {
            let l = lerch_rhs(m).unwrap();
            let a = l.exact_at(&s2).unwrap().to_real(160);
            let b = l.eval(&s2.to_real(200), 160).unwrap();
            let rel = ((&a - &b) / &a).abs();
            assert!(rel.log2_abs() < -150.0);
        }
        assert!(matches!(
            lerch_rhs(2).unwrap().eval(&HighPrecReal::zero(64), 64),
            Err(Error::Arithmetic(_))
        ));
    }
}
