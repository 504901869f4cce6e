use fpcoh::coleman::random_ordinary_point;
use fpcoh::curves::{frobenius_matrix, to_geometry_package, validate_curve};
use fpcoh::fp::CoefficientCycle;
use fpcoh::padic::BaseField;
use fpcoh::random::random_package;
use fpcoh_cli::doc::{self, Envelope, Kind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn envelope_of(v: &Value, kind: Kind) -> Envelope {
    doc::read_envelope(&doc::to_text(v), kind, "memory").unwrap()
}

#[test]
fn package_files_round_trip() {
    for name in ["pt.json", "ss.json", "amb.json"] {
        let env = doc::read_envelope(&data(name), Kind::Package, name).unwrap();
        let field = BaseField::new(env.prime, env.precision.unwrap_or(10)).unwrap();
        let g = doc::package_from(&env, &field, name).unwrap();
        let once = doc::package_to(&g);
        let again = doc::package_to(&doc::package_from(&envelope_of(&once, Kind::Package), &field, "memory").unwrap());
        assert_eq!(once, again, "{name}");
    }
}

#[test]
fn curve_package_keeps_its_certificate() {
    let field = BaseField::new(5, 10).unwrap();
    let c = validate_curve(&[0, 1, 0, 1], &field).unwrap();
    let g = to_geometry_package(&c, &frobenius_matrix(&c, 10).unwrap()).unwrap();
    let once = doc::package_to(&g);
    let back = doc::package_from(&envelope_of(&once, Kind::Package), &field, "memory").unwrap();
    assert!(back.certificates[1].as_ref().unwrap().eq_at_precision(g.certificates[1].as_ref().unwrap()));
    assert_eq!(doc::package_to(&back), once);
}

#[test]
fn other_kinds_round_trip() {
    let field = BaseField::new(7, 8).unwrap();
    let env = doc::read_envelope(&data("e2.json"), Kind::Curve, "e2").unwrap();
    let cd = doc::curve_from(&env, &field, "e2").unwrap();
    let once = doc::curve_to(&cd, &field);
    assert_eq!(doc::curve_to(&doc::curve_from(&envelope_of(&once, Kind::Curve), &field, "m").unwrap(), &field), once);

    let denv = doc::read_envelope(&data("d1.json"), Kind::Divisor, "d1").unwrap();
    let d = doc::divisor_from(&denv, &cd.curve, "d1").unwrap();
    let once = doc::divisor_to(&d, &field);
    let back = doc::divisor_from(&envelope_of(&once, Kind::Divisor), &cd.curve, "m").unwrap();
    assert_eq!(doc::divisor_to(&back, &field), once);

    let f5 = BaseField::new(5, 10).unwrap();
    let cenv = doc::read_envelope(&data("cyc.json"), Kind::Cycle, "cyc").unwrap();
    let cyc = doc::cycle_from(&cenv, &f5, "cyc").unwrap();
    let once = doc::cycle_to(&cyc, &f5);
    assert_eq!(doc::cycle_to(&doc::cycle_from(&envelope_of(&once, Kind::Cycle), &f5, "m").unwrap(), &f5), once);

    for name in ["diag.json", "isog.json"] {
        let fenv = doc::read_envelope(&data(name), Kind::Formula, name).unwrap();
        let f = doc::formula_from(&fenv, &f5, name).unwrap();
        let back = doc::formula_from(&envelope_of(&doc::formula_to(&f, &f5), Kind::Formula), &f5, "m").unwrap();
        assert_eq!(f, back);
    }
}

#[test]
fn kind_and_version_are_checked_before_the_payload() {
    let text = r#"{"format_version": "fpc-9", "kind": "curve", "prime": 5, "payload": {"nonsense": true}}"#;
    let e = doc::read_envelope(text, Kind::Curve, "t").unwrap_err();
    assert!(e.to_string().contains("format_version"));
    let text = r#"{"format_version": "fpc-1", "kind": "cycle", "prime": 5, "payload": 17}"#;
    let e = doc::read_envelope(text, Kind::Curve, "t").unwrap_err();
    assert!(e.to_string().contains("expected a curve document"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_packages_round_trip(seed in 0u64..10_000, semistable in any::<bool>(), dimension in 0i32..2) {
        let field = BaseField::new(5, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_package(&mut rng, &field, dimension, 3, semistable).unwrap();
        let once = doc::package_to(&g);
        let back = doc::package_from(&envelope_of(&once, Kind::Package), &field, "memory").unwrap();
        prop_assert_eq!(doc::package_to(&back), once);
    }

    #[test]
    fn random_divisors_round_trip(seed in 0u64..10_000, mults in proptest::collection::vec(-3i64..4, 1..4)) {
        let field = BaseField::new(7, 8).unwrap();
        let curve = validate_curve(&[1, 2, 0, 1], &field).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d: Vec<_> = mults.iter().map(|&n| (random_ordinary_point(&mut rng, &curve, &field).unwrap(), n)).collect();
        let once = doc::divisor_to(&d, &field);
        let back = doc::divisor_from(&envelope_of(&once, Kind::Divisor), &curve, "memory").unwrap();
        prop_assert_eq!(doc::divisor_to(&back, &field), once);
    }

    #[test]
    fn random_cycles_round_trip(twist in -3i64..4, thetas in proptest::collection::vec((-50i64..50, 1i64..20), 0..4)) {
        let field = BaseField::new(5, 10).unwrap();
        let mut c = CoefficientCycle::new(twist);
        for (k, (a, b)) in thetas.iter().enumerate() {
            c = c.add(&format!("P{k}"), vec![field.rational(*a, *b)]);
        }
        let once = doc::cycle_to(&c, &field);
        let back = doc::cycle_from(&envelope_of(&once, Kind::Cycle), &field, "memory").unwrap();
        prop_assert_eq!(doc::cycle_to(&back, &field), once);
    }
}
