use hypplane::catalog::{CyclotomicSeven, QuadraticField};
use hypplane::cycalg::standard;
use hypplane::exactfield::{FieldElement, NumberField, TowerMap};
use hypplane::hermplane::{GroupMatrix, HyperbolicPlane};
use hypplane::sampling;
use hypplane::tubedomain::*;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn d1(disc: i64) -> HyperbolicPlane {
    HyperbolicPlane::new(standard::quadratic(&QuadraticField::new(disc).unwrap())).unwrap()
}

fn d2(a: i64, b: i64) -> HyperbolicPlane {
    HyperbolicPlane::new(standard::quaternion(a, b).unwrap()).unwrap()
}

fn d3() -> (CyclotomicSeven, HyperbolicPlane) {
    let t = CyclotomicSeven::new();
    let p = HyperbolicPlane::new(standard::seventh_companion(&t)).unwrap();
    (t, p)
}

fn rationals_into(p: &HyperbolicPlane) -> TowerMap {
    TowerMap::from_rationals(p.algebra().l())
}

fn q_sl2(m: [[i64; 2]; 2]) -> [[FieldElement; 2]; 2] {
    let q = NumberField::rationals();
    m.map(|r| r.map(|x| FieldElement::from_int(&q, x)))
}

#[test]
fn signatures_are_split() {
    assert_eq!(signature_of_form(&d1(-7)).unwrap(), vec![(1, 1)]);
    assert_eq!(signature_of_form(&d1(-20)).unwrap(), vec![(1, 1)]);
    assert_eq!(signature_of_form(&d2(2, 3)).unwrap(), vec![(2, 2)]);
    assert_eq!(signature_of_form(&d3().1).unwrap(), vec![(3, 3)]);
    let h1 = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]));
    assert_eq!(signature_of_hermitian(&h1, TOL).unwrap(), (1, 1));
    let degenerate = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]));
    assert!(matches!(signature_of_hermitian(&degenerate, TOL), Err(TubeError::Degenerate(_))));
}

#[test]
fn intertwiners() {
    let r = Realization::new(&d1(-7)).unwrap();
    assert!((r.psi()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < TOL);
    let r = Realization::new(&d3().1).unwrap();
    assert!(r.psi_residual() < TOL);
    for (i, want) in [1.0, 0.5, 0.25].iter().enumerate() {
        for j in 0..3 {
            let expect = if i == j { *want } else { 0.0 };
            assert!((r.psi()[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-9, "{}", r.psi());
        }
    }
    let r = Realization::new(&d2(2, 3)).unwrap();
    assert!(r.psi()[(0, 0)].norm() < TOL && r.psi()[(0, 1)].re.abs() < TOL);
}

#[test]
fn identity_and_inversion() {
    let i = Complex64::new(0.0, 1.0);
    let tau = TubePoint::diagonal(&[i], false, TOL).unwrap();
    assert!(act(&NumericGroupElement::identity(2), &tau).unwrap().distance(&tau) < TOL);
    let s = CMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    let image = act(&NumericGroupElement::from_blocks(vec![s]), &tau).unwrap();
    assert!(image.distance(&tau) < TOL);
    let outside = TubePoint::diagonal(&[-i], false, TOL);
    assert!(matches!(outside, Err(TubeError::NotInDomain { .. })));
    let singular = CMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    assert!(matches!(act(&NumericGroupElement::from_blocks(vec![singular]), &tau), Err(TubeError::NearSingular(_))));
}

#[test]
fn embedded_elements_preserve_the_frame_form() {
    let mut rng = sampling::rng(3);
    for p in [d1(-7), d2(2, 3), d3().1] {
        let r = Realization::new(&p).unwrap();
        for _ in 0..20 {
            let g = r.embed(&p.random_unitary(&mut rng, 3));
            assert!(r.form_residual(&g) < TOL);
        }
    }
}

#[test]
fn group_action_and_domain() {
    let mut rng = sampling::rng(11);
    for (p, n) in [(d1(-7), 100), (d2(2, 3), 100), (d3().1, 40)] {
        let r = Realization::new(&p).unwrap();
        let rep = action_check(&r, n, &mut rng, TOL);
        assert!(rep.pass, "{rep:?}");
        let rep = domain_preservation_check(&r, n, &mut rng, TOL);
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn diagonal_formula_matches_moebius() {
    let mut rng = sampling::rng(5);
    let p = d1(-7);
    let r = Realization::new(&p).unwrap();
    assert!(formula_check(&r, &rationals_into(&p), 100, &mut rng, TOL).pass);
    let p = d2(2, 3);
    let r = Realization::new(&p).unwrap();
    assert!(formula_check(&r, &rationals_into(&p), 100, &mut rng, TOL).pass);
    let (t, p) = d3();
    let r = Realization::new(&p).unwrap();
    let rep = formula_check(&r, &t.ell_in_l, 100, &mut rng, TOL);
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn translation_by_a_real_element() {
    let (t, p) = d3();
    let r = Realization::new(&p).unwrap();
    let beta = FieldElement::from_ints(&t.ell, &[1, 2, 0]);
    let m = [
        [FieldElement::one(&t.ell), beta.clone()],
        [FieldElement::zero(&t.ell), FieldElement::one(&t.ell)],
    ];
    let mut rng = sampling::rng(1);
    let tau = diagonal_sample(&r, &mut rng);
    let image = diagonal_action_formula(&r, &m, &t.ell_in_l, &tau).unwrap();
    let s = p.imaginary_unit().coords()[0].embed(0);
    let b_l = t.ell_in_l.apply(&beta);
    for i in 0..3 {
        // in the domain frame τ = iτ₀ for diagonal τ₀
        let shift = Complex64::new(0.0, 1.0) * p.algebra().sigma_pow(i as i64).apply(&b_l).embed(0) * 2.0 / s;
        assert!((image.blocks[0][(i, i)] - tau.blocks[0][(i, i)] - shift).norm() < TOL);
        assert!(shift.im.abs() < TOL);
    }
    let identity = [[FieldElement::one(&t.ell), FieldElement::zero(&t.ell)], [FieldElement::zero(&t.ell), FieldElement::one(&t.ell)]];
    assert!(diagonal_action_formula(&r, &identity, &t.ell_in_l, &tau).unwrap().distance(&tau) < TOL);
}

#[test]
fn subdomains_are_preserved() {
    let mut rng = sampling::rng(8);
    let (t, p) = d3();
    let r = Realization::new(&p).unwrap();
    let rep = subdomain_preserved(&r, &t.ell_in_l, 200, &mut rng, TOL).unwrap();
    assert!(rep.pass, "{rep:?}");
    for p in [d2(2, 3), d2(3, 2)] {
        let r = Realization::new(&p).unwrap();
        assert!(subdomain_residual(&r, &r.base_point()) < TOL);
        let rep = subdomain_preserved(&r, &rationals_into(&p), 200, &mut rng, TOL).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let r = Realization::new(&d1(-7)).unwrap();
    assert!(subdomain_preserved(&r, &rationals_into(r.plane()), 1, &mut rng, TOL).is_err());
}

#[test]
fn symplectic_conjugation() {
    let mut rng = sampling::rng(9);
    let p = d2(2, 3);
    let r = Realization::new(&p).unwrap();
    let id = r.embed(&GroupMatrix::identity(p.algebra()));
    assert!(symplectic_residual(&id.blocks[0]) < TOL);
    let rep = symplectic_conjugation_check(&r, 200, &mut rng, TOL).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(conjugated_subgroup_shape(&r, &q_sl2([[2, 3], [1, 2]])).unwrap() < TOL);
    assert!(conjugated_subgroup_shape(&r, &q_sl2([[1, 0], [-4, 1]])).unwrap() < TOL);
    assert!(symplectic_conjugation_check(&Realization::new(&d1(-7)).unwrap(), 1, &mut rng, TOL).is_err());
}

#[test]
fn compact_group_fixes_base_point() {
    let mut rng = sampling::rng(4);
    for p in [d1(-7), d1(-20), d3().1] {
        let r = Realization::new(&p).unwrap();
        let rep = stabilizer_check(&r, 30, &mut rng, TOL).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    assert!(stabilizer_check(&Realization::new(&d2(2, 3)).unwrap(), 1, &mut rng, TOL).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_subgroup_formula(seed in any::<u64>(), x in -3.0f64..3.0, y in 0.1f64..4.0) {
        let p = d1(-7);
        let r = Realization::new(&p).unwrap();
        let mut rng = sampling::rng(seed);
        let m = sampling::sl2_field(&mut rng, &NumberField::rationals(), 3, 3, 2);
        let into = rationals_into(&p);
        let tau = TubePoint::diagonal(&[Complex64::new(x, y)], false, TOL).unwrap();
        let g = r.embed(&p.embed_subgroup(&m, &into).unwrap());
        let lhs = diagonal_action_formula(&r, &m, &into, &tau).unwrap();
        prop_assert!(lhs.distance(&act(&g, &tau).unwrap()) < TOL);
    }
}
