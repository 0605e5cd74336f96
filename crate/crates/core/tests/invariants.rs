use cotzeta::closedform::{ba_value, theorem1_sum};
use cotzeta::modular::{stabilizer, validate_pair};
use cotzeta::oracle::{s_exact, s_exact_by_pairs};
use cotzeta::series::xi_partial;
use cotzeta::{HighPrecReal, QuadElem, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

const DISCS: [i64; 6] = [2, 3, 5, 6, 7, 10];

/// Quadratic irrationals whose stabilizer has `c <= 2000`, which keeps the
/// sums over `j mod c` small.
fn quad_irrational() -> impl Strategy<Value = QuadElem> {
    (-6i64..=6, prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=5, 0..DISCS.len())
        .prop_map(|(p, q, r, i)| QuadElem::make(p.into(), q.into(), r.into(), DISCS[i].into()).unwrap())
        .prop_filter("stabilizer too large", |alpha| {
            stabilizer(alpha).is_ok_and(|(v, _)| v.c() <= &BigInt::from(2000))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stabilizer_pairs_validate(alpha in quad_irrational()) {
        let (v, eta) = stabilizer(&alpha).unwrap();
        let report = validate_pair(&alpha, &v, &eta);
        prop_assert!(report.all_ok(), "{alpha}: {:?}", report.failures());
        prop_assert!(eta.is_positive() && eta.conj().is_positive());
        // b > 0 picks the larger root, and only then does the unit exceed 1
        let one = eta.lift_int(1.into());
        prop_assert_eq!(eta > one, alpha.b().is_positive());
    }

    #[test]
    fn closed_form_consistency(alpha in quad_irrational(), m in 2u32..=4) {
        let (v, eta) = stabilizer(&alpha).unwrap();
        let value = ba_value(&alpha, m, Some(&v)).unwrap();
        let lhs = &value.coeff * &(eta.lift_int(1.into()) - eta.pow(2 * m as i64 - 2).unwrap());
        let sign: i64 = if m % 2 == 1 { 1 } else { -1 };
        let scale = Rational::from_integer(BigInt::from(sign) << (2 * m - 1));
        let rhs = theorem1_sum(&v, &eta, m).unwrap().scale(&scale);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(value.pi_power, 2 * m as i32 - 1);
    }

    #[test]
    fn bernoulli_sum_commutes_with_conjugation(alpha in quad_irrational(), m in 2u32..=4) {
        let (v, eta) = stabilizer(&alpha).unwrap();
        let direct = theorem1_sum(&v, &eta, m).unwrap();
        let swapped = theorem1_sum(&v, &eta.conj(), m).unwrap();
        prop_assert_eq!(swapped, direct.conj());
    }

    #[test]
    fn squared_pair_gives_same_value(alpha in quad_irrational()) {
        let (v, _) = stabilizer(&alpha).unwrap();
        prop_assume!(v.pow(2).c() <= &BigInt::from(5000));
        let a = ba_value(&alpha, 2, Some(&v)).unwrap();
        let b = ba_value(&alpha, 2, Some(&v.pow(2))).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn partial_sums_are_odd(alpha in quad_irrational(), k in 1u64..400, m in 2u32..=3) {
        let a = xi_partial(k, m, &alpha, 96).unwrap().value;
        let b = xi_partial(k, m, &(-alpha.clone()), 96).unwrap().value;
        let s = (&a + &b).abs();
        prop_assert!(s <= &a.abs().max(HighPrecReal::from_i64(1, 64)) * &HighPrecReal::from_i64(2, 64).powi(-88));
    }

    #[test]
    fn double_sum_symmetric_under_sign_flip(alpha in quad_irrational(), k in 1u64..16, m in 1u32..=3) {
        let (v, eta) = stabilizer(&alpha).unwrap();
        // eta < 1 for the smaller root would make K = floor(k / eta) large
        prop_assume!(eta > eta.lift_int(1.into()));
        prop_assert_eq!(s_exact(k, &alpha, &v, m).unwrap(), s_exact_by_pairs(k, &alpha, &v, m).unwrap());
    }
}

#[test]
fn pair_independence_for_higher_m() {
    let alpha = QuadElem::sqrt(2.into()).unwrap();
    let (v, _) = stabilizer(&alpha).unwrap();
    for m in [2, 3, 4] {
        assert_eq!(ba_value(&alpha, m, Some(&v)).unwrap(), ba_value(&alpha, m, Some(&v.pow(2))).unwrap());
        assert_eq!(ba_value(&alpha, m, Some(&v)).unwrap(), ba_value(&alpha, m, Some(&v.pow(3))).unwrap());
    }
}
