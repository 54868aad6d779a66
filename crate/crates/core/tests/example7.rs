use hypplane::example7::*;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

fn poly_mul_mod2(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] ^= x & y;
        }
    }
    out
}

#[test]
fn tower_identities_hold() {
    let (_, cert) = build_example();
    assert!(cert.tower_checks.len() >= 12);
    for a in &cert.tower_checks {
        assert!(a.holds, "{}: {}", a.name, a.detail);
    }
}

#[test]
fn sigma_fixes_gamma_by_exponents() {
    let exps = [1u32, 2, 4];
    let mut image: Vec<u32> = exps.iter().map(|e| e * 2 % 7).collect();
    image.sort();
    assert_eq!(image, vec![1, 2, 4]);
    let mut conj: Vec<u32> = exps.iter().map(|e| 7 - e).collect();
    conj.sort();
    assert_eq!(conj, vec![3, 5, 6]);
}

#[test]
fn division_certificate_steps() {
    let (ex, mut cert) = build_example();
    division_certificate(&ex, &mut cert).unwrap();
    assert!(cert.division_checks.iter().all(|a| a.holds));
    let phi = cert.division_checks.iter().find(|a| a.name.starts_with("Phi7")).unwrap();
    assert_eq!(phi.detail, "(x^3 + x^2 + 1)(x^3 + x + 1)");
    assert_eq!(poly_mul_mod2(&[1, 1, 0, 1], &[1, 0, 1, 1]), vec![1; 7]);
    assert_eq!(cert.invariant("(gamma)"), Some(Rational64::new(1, 3)));
    assert_eq!(cert.invariant("(gammabar)"), Some(Rational64::new(0, 1)));
    assert_eq!(cert.conclusions.is_division_algebra, Some(true));
}

#[test]
fn landherr_requires_division_first() {
    let (ex, mut cert) = build_example();
    assert!(matches!(landherr_certificate(&ex, &mut cert), Err(ExampleError::OutOfOrder(_))));
}

#[test]
fn local_invariants_and_involution_criterion() {
    let (_, cert) = full_certificate().unwrap();
    let q = cert.invariant("(sqrt(-7))").unwrap();
    assert_eq!(q, Rational64::new(-1, 3));
    assert_eq!(cert.invariant_sum(), Rational64::new(0, 1));
    let by_name = |n: &str| cert.landherr_checks.iter().find(|a| a.name.starts_with(n)).unwrap().holds;
    assert!(!by_name("inv_p + inv_pbar"));
    assert!(by_name("gamma is a unit"));
    assert!(!by_name("inv at (sqrt(-7))"));
    assert!(by_name("cube test"));
    assert_eq!(cert.conclusions.landherr_involution_exists, Some(false));
    assert_eq!(cert.conclusions.cusp_count, Some(1));
}

#[test]
fn certificate_is_reproducible() {
    let (_, a) = full_certificate().unwrap();
    let (_, b) = full_certificate().unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.reverify());
    let mut tampered = a.clone();
    tampered.local_data[1].invariant = Rational64::new(-1, 3);
    assert!(!tampered.reverify());
}

#[test]
fn cusp_report() {
    let (ex, _) = build_example();
    let r = example_cusp_report(&ex).unwrap();
    assert_eq!(r.count, 1);
    assert_eq!(r.class_number_k, 1);
    assert_eq!(r.reduced_forms, vec![hypplane::cusps::Form::new(1, 1, 2)]);
}

#[test]
fn norm_probe_finds_nothing() {
    let (ex, _) = build_example();
    let p = norm_equation_probe(&ex, 3);
    assert_eq!(p.witness, None);
    assert!(p.two_inert_in_l);
    assert_eq!(p.sample_norms[0].1, "1");
    assert_eq!(p.sample_norms[1].1, "-1");
    // N(t + eta1) = -f(-t) for f = x^3 + x^2 - 2x - 1, the minimal polynomial of eta1
    let f = |x: i64| x.pow(3) + x.pow(2) - 2 * x - 1;
    assert_eq!(p.sample_norms[0].1, (-f(0)).to_string());
    assert_eq!(p.sample_norms[1].1, (-f(-1)).to_string());
}

#[test]
fn valuations_in_k() {
    let (ex, _) = build_example();
    let g = ex.tower.gamma();
    let gbar = ex.tower.k.conj(&g);
    let two = hypplane::exactfield::FieldElement::from_int(&ex.tower.k.field, 2);
    assert_eq!(valuation(&two, &g), 1);
    assert_eq!(valuation(&(&two * &two), &gbar), 2);
    assert_eq!(valuation(&(&g * &g), &g), 2);
}

proptest! {
    #[test]
    fn norms_from_l_have_valuation_divisible_by_three(a in -6i64..6, b in -6i64..6, c in -6i64..6) {
        prop_assume!((a, b, c) != (0, 0, 0));
        let (ex, _) = build_example();
        let x = hypplane::exactfield::FieldElement::from_ints(&ex.tower.ell, &[a, b, c]);
        let n: BigRational = x.abs_norm();
        prop_assert!(two_adic_norm_compatible(&n));
    }

    #[test]
    fn mod_one_range(n in -50i64..50, d in 1i64..20) {
        let r = mod_one(Rational64::new(n, d));
        prop_assert!(r > Rational64::new(-1, 2) && r <= Rational64::new(1, 2));
        prop_assert!((Rational64::new(n, d) - r).is_integer());
    }
}
