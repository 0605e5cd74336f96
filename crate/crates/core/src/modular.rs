//! SL(2, Z) matrices acting by Moebius transformations, and the search for
//! a matrix fixing a quadratic irrational `alpha` whose automorphy factor
//! `eta = c*alpha + d` is a totally positive unit.
//!
//! The stabilizer comes from the primitive minimal polynomial
//! `A x^2 + B x + C` of `alpha` and the smallest solution of
//! `t^2 - disc * u^2 = 4`:
//!
//! ```text
//! V = ( (t - B u)/2    -C u      )
//!     (  A u           (t + B u)/2 )
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Error, Result};
use crate::exactnum::{Quad, QuadInt};
use crate::QuadElem;

/// Integer 2x2 matrix `(a b; c d)` of determinant one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2<I: QuadInt> {
    a: I,
    b: I,
    c: I,
    d: I,
}

impl<I: QuadInt> Mat2<I> {
    pub fn new(a: I, b: I, c: I, d: I) -> Result<Self> {
        let m = Self { a, b, c, d };
        if !m.det().is_one() {
            return input(format!("matrix {m} has determinant {}, not 1", m.det()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: I::one(),
            b: I::zero(),
            c: I::zero(),
            d: I::one(),
        }
    }

    /// `(0 -1; 1 0)`, i.e. `alpha -> -1/alpha`.
    pub fn inversion() -> Self {
        Self {
            a: I::zero(),
            b: -I::one(),
            c: I::one(),
            d: I::zero(),
        }
    }

    pub fn a(&self) -> &I {
        &self.a
    }
    pub fn b(&self) -> &I {
        &self.b
    }
    pub fn c(&self) -> &I {
        &self.c
    }
    pub fn d(&self) -> &I {
        &self.d
    }

    pub fn det(&self) -> I {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        Self {
            a: a.clone() * o.a.clone() + b.clone() * o.c.clone(),
            b: a.clone() * o.b.clone() + b.clone() * o.d.clone(),
            c: c.clone() * o.a.clone() + d.clone() * o.c.clone(),
            d: c.clone() * o.b.clone() + d.clone() * o.d.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// `c*alpha + d`.
    pub fn eta_of(&self, alpha: &Quad<I>) -> Quad<I> {
        alpha.scale(&Ratio::from_integer(self.c.clone())) + alpha.lift_int(self.d.clone())
    }

    /// `(a*alpha + b) / (c*alpha + d)`.
    pub fn moebius(&self, alpha: &Quad<I>) -> Result<Quad<I>> {
        let den = self.eta_of(alpha);
        if den.is_zero() {
            return Err(Error::Arithmetic(format!(
                "c*alpha + d vanishes for {self} at {alpha}"
            )));
        }
        let num = alpha.scale(&Ratio::from_integer(self.a.clone())) + alpha.lift_int(self.b.clone());
        num.checked_div(&den)
    }
}

impl<I: QuadInt> fmt::Display for Mat2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl<I: QuadInt> fmt::Debug for Mat2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat2{self}")
    }
}

/// Primitive `A x^2 + B x + C` with `A > 0` vanishing at a quadratic
/// irrational, and its discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPoly {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub disc: BigInt,
}

impl MinPoly {
    /// `A x^2 + B x + C` at `x`, exactly.
    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        let lift = |n: &BigInt| x.lift_int(n.clone());
        &(&lift(&self.a) * x + lift(&self.b)) * x + lift(&self.c)
    }
}

pub fn minimal_polynomial(alpha: &QuadElem) -> Result<MinPoly> {
    if alpha.is_rational() {
        return input(format!("{alpha} is rational"));
    }
    // x^2 - 2a x + (a^2 - b^2 d)
    let lin = -alpha.trace();
    let cst = alpha.norm();
    let scale = lin.denom().lcm(cst.denom());
    let mut a = scale.clone();
    let mut b = lin.numer() * (&scale / lin.denom());
    let mut c = cst.numer() * (&scale / cst.denom());
    let g = a.gcd(&b).gcd(&c);
    a /= &g;
    b /= &g;
    c /= &g;
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    Ok(MinPoly { a, b, c, disc })
}

fn check_disc(disc: &BigInt) -> Result<()> {
    if !disc.is_positive() {
        return input(format!("discriminant {disc} is not positive"));
    }
    let s = disc.sqrt();
    if &(&s * &s) == disc {
        return input(format!("discriminant {disc} is a perfect square"));
    }
    Ok(())
}

/// Smallest `u > 0` (with its `t > 0`) such that `t^2 - disc * u^2 = 4`.
///
/// For `disc > 16` every solution has `t/u` equal to a convergent of
/// `sqrt(disc)`, either in lowest terms or as twice a solution of the
/// `= 1` equation, so walking the convergents finds the minimum. Small
/// discriminants are searched directly.
pub fn pell4(disc: &BigInt) -> Result<(BigInt, BigInt)> {
    check_disc(disc)?;
    let four = BigInt::from(4);
    if disc <= &BigInt::from(16) {
        let mut u = BigInt::one();
        loop {
            let t2 = &four + disc * &u * &u;
            let t = t2.sqrt();
            if &t * &t == t2 {
                return Ok((t, u));
            }
            u += 1;
        }
    }

    let a0 = disc.sqrt();
    let (mut m, mut q_cf, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut best: Option<(BigInt, BigInt)> = None;
    loop {
        if let Some((_, bu)) = &best {
            if &q > bu {
                break;
            }
        }
        let val = &p * &p - disc * &q * &q;
        let cand = if val == four {
            Some((p.clone(), q.clone()))
        } else if val.is_one() {
            Some((&p * 2, &q * 2))
        } else {
            None
        };
        if let Some((t, u)) = cand {
            if best.as_ref().is_none_or(|(_, bu)| &u < bu) {
                best = Some((t, u));
            }
        }
        m = &q_cf * &a - &m;
        q_cf = (disc - &m * &m) / &q_cf;
        a = (&a0 + &m) / &q_cf;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok(best.expect("loop exits only with a solution"))
}

/// A matrix fixing `alpha` together with its totally positive unit
/// `eta = c*alpha + d`, `eta != 1`.
pub fn stabilizer(alpha: &QuadElem) -> Result<(Mat2<BigInt>, QuadElem)> {
    let poly = minimal_polynomial(alpha)?;
    let (t, u) = pell4(&poly.disc)?;
    let two = BigInt::from(2);
    // t and B*u share parity since t^2 = disc u^2 + 4 = B^2 u^2 (mod 4)
    let v = Mat2::new(
        (&t - &poly.b * &u) / &two,
        -&poly.c * &u,
        &poly.a * &u,
        (&t + &poly.b * &u) / &two,
    )?;
    let eta = v.eta_of(alpha);
    Ok((v, eta))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Per-check outcome of [`validate_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub checks: Vec<Check>,
}

/// Checks needed for the finite asymptotic identity (any `V`).
const FINITE_CHECKS: [&str; 4] = ["det_one", "c_positive", "eta_matches", "eta_positive"];

impl PairReport {
    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.pass)
    }

    /// `det V = 1`, `c > 0`, `eta = c*alpha + d > 0`.
    pub fn finite_ok(&self) -> bool {
        FINITE_CHECKS.iter().all(|n| self.get(n) == Some(true))
    }

    /// Everything, including `V alpha = alpha` and total positivity.
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }
}

/// Exact report on whether `(V, eta)` is usable for `alpha`.
pub fn validate_pair(alpha: &QuadElem, v: &Mat2<BigInt>, eta: &QuadElem) -> PairReport {
    let mut checks = Vec::new();
    let mut push = |name, pass, detail: String| checks.push(Check { name, pass, detail });
    push("det_one", v.det().is_one(), format!("det = {}", v.det()));
    push("c_positive", v.c().is_positive(), format!("c = {}", v.c()));
    let expected = v.eta_of(alpha);
    let same_field = eta.d() == alpha.d();
    push(
        "eta_matches",
        same_field && &expected == eta,
        format!("c*alpha + d = {expected}"),
    );
    push("eta_positive", eta.is_positive(), format!("eta = {eta}"));
    let fixed = v.moebius(alpha).ok();
    push(
        "fixes_alpha",
        fixed.as_ref() == Some(alpha),
        match &fixed {
            Some(x) => format!("V alpha = {x}"),
            None => "V alpha undefined".into(),
        },
    );
    let norm = eta.norm();
    push("norm_one", norm.is_one(), format!("norm = {norm}"));
    push(
        "conj_positive",
        eta.conj().is_positive(),
        format!("conj(eta) = {}", eta.conj()),
    );
    push("eta_not_one", !eta.is_one(), String::new());
    PairReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mk(p: i64, q: i64, r: i64, d: i64) -> QuadElem {
        QuadElem::make(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    fn mat(a: i64, b: i64, c: i64, d: i64) -> Mat2<BigInt> {
        Mat2::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn rejects_bad_det() {
        assert!(matches!(
            Mat2::new(bi(2), bi(0), bi(0), bi(1)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn minimal_polynomials() {
        let mp = minimal_polynomial(&mk(0, 1, 1, 2)).unwrap();
        assert_eq!((mp.a, mp.b, mp.c, mp.disc), (bi(1), bi(0), bi(-2), bi(8)));
        let mp = minimal_polynomial(&mk(1, 1, 2, 5)).unwrap();
        assert_eq!((mp.a, mp.b, mp.c, mp.disc), (bi(1), bi(-1), bi(-1), bi(5)));
        let mp = minimal_polynomial(&mk(0, 2, 1, 2)).unwrap();
        assert_eq!((mp.a, mp.b, mp.c, mp.disc), (bi(1), bi(0), bi(-8), bi(32)));
        let x = mk(3, -1, 7, 11);
        let mp = minimal_polynomial(&x).unwrap();
        assert!(mp.eval(&x).is_zero());
        assert!(mp.a.is_positive());
        assert!(minimal_polynomial(&QuadElem::one(bi(2))).is_err());
    }

    #[test]
    fn pell_examples() {
        assert_eq!(pell4(&bi(8)).unwrap(), (bi(6), bi(2)));
        assert_eq!(pell4(&bi(5)).unwrap(), (bi(3), bi(1)));
        assert_eq!(pell4(&bi(12)).unwrap(), (bi(4), bi(1)));
        assert_eq!(pell4(&bi(32)).unwrap(), (bi(6), bi(1)));
        // 61: x^2 - 61 y^2 = 1 needs y = 226153980; the = 4 form is much smaller
        assert_eq!(pell4(&bi(61)).unwrap(), (bi(1523), bi(195)));
        let (t, u) = pell4(&bi(94)).unwrap();
        assert_eq!(&t * &t - bi(94) * &u * &u, bi(4));
        assert_eq!(u, bi(2 * 221064));
        assert!(pell4(&bi(16)).is_err());
        assert!(pell4(&bi(0)).is_err());
        assert!(pell4(&bi(-5)).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let s2 = mk(0, 1, 1, 2);
        let (v, eta) = stabilizer(&s2).unwrap();
        assert_eq!(v, mat(3, 4, 2, 3));
        assert_eq!(eta, mk(3, 2, 1, 2));
        assert!(validate_pair(&s2, &v, &eta).all_ok());

        let phi = mk(1, 1, 2, 5);
        let (v, eta) = stabilizer(&phi).unwrap();
        assert_eq!(v, mat(2, 1, 1, 1));
        assert_eq!(eta, mk(3, 1, 2, 5));

        let x = mk(0, 2, 1, 2);
        let (v, eta) = stabilizer(&x).unwrap();
        assert!(validate_pair(&x, &v, &eta).all_ok());
    }

    #[test]
    fn moebius_examples() {
        let s2 = mk(0, 1, 1, 2);
        assert_eq!(mat(3, 4, 2, 3).moebius(&s2).unwrap(), s2);
        assert_eq!(Mat2::inversion().moebius(&s2).unwrap(), mk(0, -1, 2, 2));
        assert_eq!(mat(1, 0, 1, 1).moebius(&s2).unwrap(), mk(2, -1, 1, 2));
    }

    #[test]
    fn validation_reports() {
        let s2 = mk(0, 1, 1, 2);
        let v = mat(1, 0, 1, 1);
        let eta = v.eta_of(&s2);
        assert_eq!(eta, mk(1, 1, 1, 2));
        let r = validate_pair(&s2, &v, &eta);
        assert!(r.finite_ok());
        assert_eq!(r.get("fixes_alpha"), Some(false));
        assert!(!r.all_ok());

        let r = validate_pair(&s2, &mat(3, 4, 2, 3), &mk(3, -2, 1, 2));
        assert_eq!(r.get("eta_matches"), Some(false));
        assert_eq!(r.get("norm_one"), Some(true));
    }

    #[test]
    fn minus_root_gives_small_unit() {
        let alpha = mk(0, -1, 1, 2);
        let (v, eta) = stabilizer(&alpha).unwrap();
        assert!(validate_pair(&alpha, &v, &eta).all_ok());
        assert!(eta < QuadElem::one(bi(2)));
        assert_eq!(eta, mk(3, -2, 1, 2));
    }

    #[test]
    fn seeded_family_validates() {
        for d in [2, 3, 5, 6, 7, 10] {
            for p in -3..=3 {
                for q in [-2, -1, 1, 3] {
                    for r in [1, 2, 5] {
                        let alpha = mk(p, q, r, d);
                        let (v, eta) = stabilizer(&alpha).unwrap();
                        let rep = validate_pair(&alpha, &v, &eta);
                        assert!(rep.all_ok(), "{alpha}: {:?}", rep.failures());
                        let one = QuadElem::one(bi(d));
                        assert_eq!(eta > one, alpha.b().is_positive(), "{alpha}");
                    }
                }
            }
        }
    }

    fn arb_mat() -> impl Strategy<Value = Mat2<BigInt>> {
        // products of the generators T = (1 1; 0 1) and S = (0 -1; 1 0)
        proptest::collection::vec(0u8..3, 0..8).prop_map(|word| {
            word.into_iter().fold(Mat2::identity(), |m, g| match g {
                0 => m.mul(&mat(1, 1, 0, 1)),
                1 => m.mul(&Mat2::inversion()),
                _ => m.mul(&mat(1, -1, 0, 1)),
            })
        })
    }

    proptest! {
        #[test]
        fn moebius_is_group_action(v1 in arb_mat(), v2 in arb_mat(), p in -5i64..5, q in 1i64..4) {
            let alpha = mk(p, q, 3, 7);
            let lhs = v1.mul(&v2).moebius(&alpha).unwrap();
            let rhs = v1.moebius(&v2.moebius(&alpha).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(v1.mul(&v2).det().is_one());
        }
    }
}
