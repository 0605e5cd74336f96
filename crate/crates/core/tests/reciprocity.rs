//! The reciprocity identity obtained from the finite identity with
//! `V = (0, -1; 1, 0)`, which maps `alpha` to `-1/alpha` with `eta = alpha`:
//!
//! ```text
//! xi(2m-1, alpha) - alpha^(2m-2) xi(2m-1, -1/alpha)
//!     = (-1)^(m-1) (2 pi)^(2m-1) sum_l B_l B_{2m-l} / (l! (2m-l)!) alpha^(2m-l-1)
//! ```

use cotzeta::closedform::{lerch_eval, lerch_rhs, theorem1_rhs};
use cotzeta::modular::Mat2;
use cotzeta::series::xi_partial;
use cotzeta::{HighPrecReal, QuadElem};

fn quad(p: i64, q: i64, r: i64, d: i64) -> QuadElem {
    QuadElem::make(p.into(), q.into(), r.into(), d.into()).unwrap()
}

fn reciprocity_gap(alpha: &QuadElem, m: u32, k: u64, prec: u32) -> f64 {
    let v = Mat2::inversion();
    let image = v.moebius(alpha).unwrap();
    let xi_a = xi_partial(k, m, alpha, prec).unwrap().value;
    let xi_b = xi_partial(k, m, &image, prec).unwrap().value;
    let weight = alpha.pow(2 * m as i64 - 2).unwrap().to_real(prec);
    let lhs = &xi_a - &(&weight * &xi_b);
    let rhs = lerch_eval(&lerch_rhs(m).unwrap(), &alpha.to_real(prec), prec).unwrap();
    (&lhs - &rhs).abs().to_f64()
}

#[test]
fn sqrt2_cubic() {
    assert!(reciprocity_gap(&quad(0, 1, 1, 2), 2, 20_000, 128) <= 1e-3);
}

#[test]
fn golden_quintic() {
    assert!(reciprocity_gap(&quad(1, 1, 2, 5), 3, 5_000, 128) <= 1e-3);
}

#[test]
fn sqrt3_cubic() {
    assert!(reciprocity_gap(&quad(0, 1, 1, 3), 2, 20_000, 128) <= 1e-3);
}

#[test]
fn polynomial_matches_inversion_weights() {
    // the Bernoulli double sum for V = (0,-1;1,0) has a single sample point
    // (x, y) = (1, 0), which reproduces the Bernoulli-number coefficients
    let alpha = quad(0, 1, 1, 7);
    for m in 2..=5 {
        let from_matrix = theorem1_rhs(&Mat2::inversion(), &alpha, m).unwrap();
        let from_numbers = lerch_rhs(m).unwrap().exact_at(&alpha).unwrap();
        assert_eq!(from_matrix, from_numbers, "m = {m}");
    }
}

#[test]
fn numeric_and_exact_polynomial_agree() {
    let alpha = quad(1, 1, 2, 5);
    let poly = lerch_rhs(3).unwrap();
    let numeric = poly.eval(&alpha.to_real(160), 160).unwrap();
    let exact = poly.exact_at(&alpha).unwrap().to_real(160);
    let diff = (&numeric - &exact).abs();
    assert!(diff <= HighPrecReal::from_i64(2, 64).powi(-140));
}
