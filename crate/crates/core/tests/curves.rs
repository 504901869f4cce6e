use fpcoh::curves::{
    cup_matrix, frobenius_matrix, numerator_from_counts, point_count, render_integer_poly, to_geometry_package, validate_curve,
};
use fpcoh::linalg::{bilinear, Matrix};
use fpcoh::padic::BaseField;
use fpcoh::phin::{purity_weights, purity_weights_poly, weil_bound_holds, Purity};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const CURVES: [[i64; 4]; 3] = [[0, 1, 0, 1], [1, 2, 0, 1], [1, -1, 0, 1]];

#[test]
fn kedlaya_matches_counts() {
    for p in [5u64, 7] {
        for f in CURVES {
            let k = BaseField::new(p, 10).unwrap();
            let c = validate_curve(&f, &k).unwrap();
            let num = frobenius_matrix(&c, 10).unwrap().numerator().unwrap();
            assert_eq!(num, numerator_from_counts(&f, p).unwrap(), "f = {f:?}, p = {p}");
        }
    }
}

#[test]
fn named_zeta_numerators() {
    let z5 = frobenius_matrix(&validate_curve(&[0, 1, 0, 1], &BaseField::new(5, 10).unwrap()).unwrap(), 10).unwrap();
    assert_eq!(render_integer_poly(&z5.numerator().unwrap()), "1 - 2*T + 5*T^2");
    let z7 = frobenius_matrix(&validate_curve(&[0, 1, 0, 1], &BaseField::new(7, 10).unwrap()).unwrap(), 10).unwrap();
    assert_eq!(render_integer_poly(&z7.numerator().unwrap()), "1 + 7*T^2");
}

#[test]
fn genus_two_curve() {
    let f = [1, -1, 0, 0, 0, 1];
    for p in [5u64, 7] {
        let k = BaseField::new(p, 8).unwrap();
        let c = validate_curve(&f, &k).unwrap();
        let data = frobenius_matrix(&c, 8).unwrap();
        let num = data.numerator().unwrap();
        assert_eq!(num, numerator_from_counts(&f, p).unwrap());
        assert!(weil_bound_holds(&-num[1].clone(), 2, p));
        let cup = cup_matrix(&c);
        let m = &data.matrix;
        assert!(m.transpose().mul(&cup).mul(m).sub(&cup.scale(&k.int(p as i64))).is_zero_at_precision());
        // the holomorphic span dx/y, x dx/y is isotropic
        for i in 0..2 {
            for j in 0..2 {
                assert!(cup.get(i, j).is_exact_zero());
            }
        }
        assert!(cup.add(&cup.transpose()).is_exact_zero());
    }
}

#[test]
fn purity_and_weil_bound() {
    for p in [5u64, 7] {
        for f in CURVES {
            let num = numerator_from_counts(&f, p).unwrap();
            let chi: Vec<BigRational> = num.iter().rev().cloned().map(BigRational::from_integer).collect();
            assert_eq!(purity_weights_poly(&chi, p), Purity::Pure(1), "f = {f:?}");
            let n1 = point_count(&f, p, 1).unwrap() as i64;
            assert!(weil_bound_holds(&BigInt::from(p as i64 + 1 - n1), 1, p));
        }
    }
}

#[test]
fn package_export() {
    let k = BaseField::new(5, 10).unwrap();
    let c = validate_curve(&[0, 1, 0, 1], &k).unwrap();
    let pkg = to_geometry_package(&c, &frobenius_matrix(&c, 10).unwrap()).unwrap();
    pkg.validate().unwrap();
    let phi2 = pkg.frobenius_on_cohomology(2).unwrap();
    assert!(phi2.get(0, 0).eq_at_precision(&k.int(5)));
    for (deg, w) in [(0, 0), (1, 1), (2, 2)] {
        let phi = pkg.frobenius_on_cohomology(deg).unwrap();
        let exact = Matrix::from_fn(phi.rows(), phi.cols(), &k, |i, j| phi.get(i, j).clone());
        if deg == 1 {
            // the p-adic matrix is not exact; purity comes from its certified charpoly
            let num = numerator_from_counts(&[0, 1, 0, 1], 5).unwrap();
            let chi: Vec<BigRational> = num.iter().rev().cloned().map(BigRational::from_integer).collect();
            assert_eq!(purity_weights_poly(&chi, 5), Purity::Pure(w));
        } else {
            assert_eq!(purity_weights(&exact, 5).unwrap(), Purity::Pure(w));
        }
    }
}

#[test]
fn validation_failures() {
    let k5 = BaseField::new(5, 10).unwrap();
    assert!(validate_curve(&[2, -3, 0, 1], &k5).is_err());
    assert!(validate_curve(&[0, 1, 1], &k5).is_err());
    assert!(validate_curve(&[0, 1, 0, 2], &k5).is_err());
    // disc(x^3 + x + 1) = -31: bad at 31
    assert!(validate_curve(&[1, 1, 0, 1], &BaseField::new(31, 10).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn frobenius_respects_cup_product(u in proptest::collection::vec(-20i64..20, 2), v in proptest::collection::vec(-20i64..20, 2)) {
        let k = BaseField::new(7, 10).unwrap();
        let c = validate_curve(&[1, 2, 0, 1], &k).unwrap();
        let m = frobenius_matrix(&c, 10).unwrap().matrix;
        let cup = cup_matrix(&c);
        let uu: Vec<_> = u.iter().map(|&a| k.int(a)).collect();
        let vv: Vec<_> = v.iter().map(|&a| k.int(a)).collect();
        let lhs = bilinear(&m.mul_vec(&uu), &cup, &m.mul_vec(&vv));
        let rhs = bilinear(&uu, &cup, &vv).mul(&k.int(7));
        prop_assert!(lhs.sub(&rhs).is_zero_at_precision() || lhs.agrees_to(&rhs, 8));
    }

    #[test]
    fn counts_obey_weil(a in 0i64..7, b in 0i64..7) {
        let f = [b, a, 0, 1];
        let k = BaseField::new(7, 6).unwrap();
        prop_assume!(validate_curve(&f, &k).is_ok());
        let n = point_count(&f, 7, 1).unwrap() as i64;
        prop_assert!(weil_bound_holds(&BigInt::from(8 - n), 1, 7));
    }
}
