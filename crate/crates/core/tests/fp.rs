use fpcoh::coleman::{random_ordinary_point, ColemanPrimitive};
use fpcoh::curves::{frobenius_matrix, to_geometry_package, validate_curve};
use fpcoh::fp::*;
use fpcoh::linalg::bilinear;
use fpcoh::padic::{BaseField, PadicPoly};
use fpcoh::syntomic::{de_rham_gram, GeometryPackage};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CURVES: [[i64; 4]; 3] = [[0, 1, 0, 1], [1, 2, 0, 1], [1, -1, 0, 1]];

fn elliptic(f: &[i64], p: u64, n: u32) -> GeometryPackage {
    let k = BaseField::new(p, n).unwrap();
    let c = validate_curve(f, &k).unwrap();
    to_geometry_package(&c, &frobenius_matrix(&c, n).unwrap()).unwrap()
}

#[test]
fn cofinal_polynomials() {
    let g5 = elliptic(&[0, 1, 0, 1], 5, 10);
    let k5 = g5.field.clone();
    let p5 = cofinal_poly(&g5, 1).unwrap();
    assert_eq!(p5.weight, 1);
    assert!(p5.reciprocal().eq_at_precision(&PadicPoly::from_ints(&[1, -2, 5], &k5)));
    // roots are the Frobenius eigenvalues, so P(Φ) = 0 on H^1
    let g7 = elliptic(&[0, 1, 0, 1], 7, 10);
    let p7 = cofinal_poly(&g7, 1).unwrap();
    assert!(p7.reciprocal().eq_at_precision(&PadicPoly::from_ints(&[1, 0, 7], &g7.field)));
    let pt = GeometryPackage::point(&k5);
    let p0 = cofinal_poly(&pt, 0).unwrap();
    assert!(p0.poly.eq_at_precision(&PadicPoly::from_ints(&[1, -1], &k5)));
    assert_eq!(cofinal_poly(&g5, 2).unwrap().weight, 2);
}

#[test]
fn admissible_polynomials_are_checked() {
    let k = BaseField::new(5, 10).unwrap();
    assert!(AdmissiblePolynomial::new(PadicPoly::from_ints(&[2, -1], &k), 0).is_err());
    assert!(AdmissiblePolynomial::new(PadicPoly::from_ints(&[1, -1], &k), 1).is_err());
    // roots 1 and 1/5 have different moduli
    assert!(AdmissiblePolynomial::new(PadicPoly::from_ints(&[1, -6, 5], &k), 0).is_err());
    // weight is read off the roots: the zeta form 1 - 2T + 5T^2 has roots of modulus 5^(-1/2)
    assert!(AdmissiblePolynomial::new(PadicPoly::from_ints(&[1, -2, 5], &k), 1).is_err());
    let p = PadicPoly::new(vec![k.one(), k.rational(-2, 5), k.rational(1, 5)], &k);
    assert!(AdmissiblePolynomial::new(p, 1).unwrap().reciprocal().eq_at_precision(&PadicPoly::from_ints(&[1, -2, 5], &k)));
}

#[test]
fn fundamental_sequences() {
    for p in [5u64, 7] {
        for f in CURVES {
            let g = elliptic(&f, p, 10);
            let s = fp_cohomology(&g, 1, 1).unwrap();
            assert_eq!(s.dim(), 2);
            let check = s.check().unwrap();
            assert!(check.holds(), "{f:?} at {p}: {check:?}");
            assert_eq!((check.source_dim, check.target_dim), (1, 1));
            for j in 0..=2 {
                for n in -1..=3 {
                    assert!(fp_cohomology(&g, j, n).unwrap().check().unwrap().holds());
                }
            }
        }
    }
    let pt = GeometryPackage::point(&BaseField::new(5, 10).unwrap());
    let s = fp_cohomology(&pt, 1, 1).unwrap();
    assert_eq!(s.dim(), 1);
    assert_eq!(s.ses.i_fp.rank().unwrap(), 1);
}

#[test]
fn perfect_pairing_on_curves() {
    for p in [5u64, 7] {
        for f in CURVES {
            let vals: Vec<Option<i64>> = [10u32, 20]
                .iter()
                .map(|&n| {
                    let g = elliptic(&f, p, n);
                    let a = fp_cohomology(&g, 1, 1).unwrap();
                    let b = fp_cohomology(&g, 2, 1).unwrap();
                    let r = fp_gram(&g, &a, &b).unwrap();
                    assert_eq!(r.rank, 2);
                    r.det_valuation
                })
                .collect();
            assert_eq!(vals[0], vals[1]);
        }
    }
}

#[test]
fn pairing_is_compatible_with_the_sequence() {
    let g = elliptic(&[1, 2, 0, 1], 5, 10);
    for (ia, ib) in [(1, 2), (2, 1)] {
        let a = fp_cohomology(&g, ia, 1).unwrap();
        let b = fp_cohomology(&g, ib, 1).unwrap();
        let gram = de_rham_gram(&g, ia - 1).unwrap();
        for s in 0..a.ses.i_fp.cols() {
            for t in 0..b.dim() {
                let mut ey = vec![g.field.zero(); b.dim()];
                ey[t] = g.field.one();
                let lhs = fp_pairing(&g, &a, &a.ses.i_fp.column(s), &b, &ey).unwrap();
                let pr = b.ses.target_basis.mul_vec(&b.ses.pr_fp.mul_vec(&ey));
                let rhs = bilinear(&a.ses.source_basis.column(s), &gram, &pr);
                assert!(lhs.sub(&rhs).is_zero_at_precision());
            }
        }
    }
}

#[test]
fn change_of_polynomial_commutes_with_the_sequence() {
    let g = elliptic(&[1, 2, 0, 1], 5, 10);
    let k = g.field.clone();
    let space = fp_cohomology(&g, 1, 1).unwrap();
    let q = AdmissiblePolynomial::new(PadicPoly::new(vec![k.one(), k.zero(), k.rational(-1, 5)], &k), 1).unwrap();
    let (bigger, m) = change_fp_poly(&g, &space, &q).unwrap();
    assert!(m.mul(&space.ses.i_fp).sub(&bigger.ses.i_fp).is_zero_at_precision());
    assert!(bigger.ses.pr_fp.mul(&m).sub(&space.ses.pr_fp).is_zero_at_precision());
    assert_eq!(m.rank().unwrap(), 2);
}

#[test]
fn lifts_project_back() {
    let g = elliptic(&[1, -1, 0, 1], 7, 10);
    let s = fp_cohomology(&g, 1, 1).unwrap();
    let cls = s.ses.target_basis.column(0);
    let c = s.lift(&g, &cls).unwrap();
    assert!(s.is_lift_of(&g, &c, &cls).unwrap());
    let bad = vec![g.field.zero(), g.field.one()];
    assert!(s.lift(&g, &bad).is_err());
}

#[test]
fn diagonal_and_isogeny_formulas() {
    let k = BaseField::new(5, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let weights = diagonal_weights();
    for i in 0..8 {
        let r = weights[i % weights.len()];
        let inst = DiagonalInstance::random(&mut rng, &k, r, false).unwrap();
        inst.validate().unwrap();
        let v = evaluate_diagonal(&inst).unwrap();
        assert!(v.agree_to(8), "{r:?}: {} vs {}", v.lhs.render(true), v.rhs.render(true));
    }
    for i in 0..8 {
        let inst = IsogenyInstance::random(&mut rng, &k, i % 5).unwrap();
        inst.package.validate().unwrap();
        let v = evaluate_isogeny(&inst).unwrap();
        assert!(v.agree_to(8), "r = {}: {} vs {}", inst.r, v.lhs.render(true), v.rhs.render(true));
    }
}

#[test]
fn zero_projection_gives_zero() {
    let k = BaseField::new(5, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = DiagonalInstance::random(&mut rng, &k, [1, 1, 2], false).unwrap().with_zero_projection();
    let v = evaluate_diagonal(&inst).unwrap();
    assert!(v.lhs.is_zero_at_precision() && v.rhs.is_zero_at_precision());
}

#[test]
fn xi_is_independent_of_the_polynomial() {
    let k = BaseField::new(5, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for [r1, r2, r3] in [[0, 1, 1], [1, 1, 2], [0, 2, 2], [2, 2, 2], [1, 2, 3]] {
        let inst = DiagonalInstance::random(&mut rng, &k, [r1, r2, r3], false).unwrap();
        let w = inst.poly.weight;
        let pw = k.int(5).pow(w as u32);
        let extra = AdmissiblePolynomial::new(PadicPoly::new(vec![k.one(), k.zero(), k.one().div(&pw).unwrap().neg()], &k), w).unwrap();
        let a = xi_class(&inst, &inst.poly).unwrap();
        let b = xi_class(&inst, &inst.poly.times(&extra).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.sub(y).is_zero_at_precision());
        }
    }
}

#[test]
fn aj_on_a_curve_ignores_the_lift_choice() {
    let k = BaseField::new(5, 10).unwrap();
    let c = validate_curve(&[1, 2, 0, 1], &k).unwrap();
    let frob = frobenius_matrix(&c, 10).unwrap();
    let g = to_geometry_package(&c, &frob).unwrap();
    let wf = frob.matrix.field().clone();
    let cw = c.with_field(&wf);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let y = random_ordinary_point(&mut rng, &cw, &wf).unwrap();
    let o = random_ordinary_point(&mut rng, &cw, &wf).unwrap();
    let prim = ColemanPrimitive::new(&cw, &frob, &[wf.one(), wf.zero()], &o, &[("y", y), ("o", o.clone())]).unwrap();
    let attached = prim.attach(&g).unwrap();
    let space = fp_cohomology(&g, 1, 1).unwrap();
    let cycle = CoefficientCycle::divisor(&k, &[("y", 1), ("o", -1)]);
    let base = aj_fp(&g, &space, &ColemanLiftHandle::Curve(prim.clone()), &cycle).unwrap();
    let mut shifted = ColemanLiftHandle::Curve(prim).cochain(&space).unwrap();
    let extra = space.representative(&space.ses.i_fp.column(0));
    shifted.x = shifted.x.iter().zip(&extra.x).map(|(a, b)| a.add(b)).collect();
    shifted.y = shifted.y.iter().zip(&extra.y).map(|(a, b)| a.add(b)).collect();
    shifted.z = shifted.z.iter().zip(&extra.z).map(|(a, b)| a.add(b)).collect();
    let moved = aj_fp(&attached, &space, &ColemanLiftHandle::Synthetic(shifted), &cycle).unwrap();
    assert!(base.sub(&moved).is_zero_at_precision() || base.agrees_to(&moved, 8));

    let single = CoefficientCycle::divisor(&k, &[("y", 1)]);
    let err = aj_fp(&attached, &space, &ColemanLiftHandle::Synthetic(extra), &single).unwrap_err();
    assert!(matches!(err, fpcoh::Error::Domain(_)));
    assert!(err.to_string().contains("not null-homologous"));
}

#[test]
fn semistable_value_matches_good_value_without_monodromy() {
    let k = BaseField::new(5, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let inst = IsogenyInstance::random(&mut rng, &k, 2).unwrap();
    let space = fp_cohomology(&inst.package, 1, 1).unwrap();
    let mut c = space.syn.zero_cochain(1);
    c.x = inst.form();
    let good = aj_fp(&inst.package, &space, &ColemanLiftHandle::Synthetic(c.clone()), &inst.cycle).unwrap();
    let ss = c;
    let semi = aj_syn_semistable(&inst.package, &space.poly, 1, &inst.cycle, &ss);
    match semi {
        Ok(v) => {
            assert!(v.value.sub(&good).is_zero_at_precision());
            assert!(v.caveat.contains("lift"));
        }
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fp_pairing_is_bilinear(a in -5i64..5, b in -5i64..5) {
        let g = elliptic(&[1, 2, 0, 1], 7, 8);
        let k = g.field.clone();
        let x = fp_cohomology(&g, 1, 1).unwrap();
        let y = fp_cohomology(&g, 2, 1).unwrap();
        let u = vec![k.int(a), k.int(1)];
        let v = vec![k.int(2), k.int(b)];
        let base = fp_pairing(&g, &x, &u, &y, &v).unwrap();
        let su: Vec<_> = u.iter().map(|c| c.mul(&k.int(3))).collect();
        let scaled = fp_pairing(&g, &x, &su, &y, &v).unwrap();
        prop_assert!(scaled.sub(&base.mul(&k.int(3))).is_zero_at_precision());
        let gram = fp_gram(&g, &x, &y).unwrap().matrix;
        prop_assert!(bilinear(&u, &gram, &v).sub(&base).is_zero_at_precision());
    }
}

