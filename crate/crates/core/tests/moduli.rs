use hypplane::catalog::{CyclotomicSeven, QuadraticField};
use hypplane::cycalg::standard;
use hypplane::exactfield::FieldElement;
use hypplane::hermplane::{HyperbolicPlane, PlaneVector};
use hypplane::moduli::*;
use hypplane::sampling;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn d1(disc: i64) -> HyperbolicPlane {
    HyperbolicPlane::new(standard::quadratic(&QuadraticField::new(disc).unwrap())).unwrap()
}

fn quat(a: i64, b: i64) -> HyperbolicPlane {
    HyperbolicPlane::new(standard::quaternion(a, b).unwrap()).unwrap()
}

fn d3() -> HyperbolicPlane {
    HyperbolicPlane::new(standard::seventh_companion(&CyclotomicSeven::new())).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn planes_and_cases() -> Vec<(HyperbolicPlane, TCase)> {
    vec![(d1(-7), TCase::D1), (d1(-20), TCase::D1), (quat(2, 3), TCase::D2a), (quat(2, 3), TCase::D2b), (d3(), TCase::D3)]
}

#[test]
fn skew_forms() {
    for (p, c) in planes_and_cases() {
        let t = make_t(&p, c).unwrap();
        let s = t.t.star();
        assert_eq!(s.b, -&t.t.b);
        assert_eq!(s.c, -&t.t.c);
        assert!(s.a.is_zero() && s.d.is_zero());
    }
    assert!(matches!(make_t(&d1(-7), TCase::D2b), Err(ModuliError::CaseMismatch(_))));
    let alg = d1(-7).algebra().clone();
    assert!(matches!(scaled_form(&alg, &alg.one(), TCase::D1), Err(ModuliError::NotSkew)));
    let p = quat(2, 3);
    let alg = p.algebra().clone();
    let ec = &alg.e() * &alg.from_l(&FieldElement::generator(alg.l()));
    assert!(scaled_form(&alg, &ec, TCase::D2b).is_ok());
}

#[test]
fn riemann_form_example() {
    let kf = QuadraticField::new(-7).unwrap();
    let p = d1(-7);
    let alg = p.algebra();
    // gamma = theta - 1 satisfies gamma^2 + gamma + 2 = 0
    let gamma = alg.from_l(&kf.elt(-1, 1));
    assert!((&(&(&gamma * &gamma) + &gamma) + &alg.from_int(2)).is_zero());
    let t = make_t(&p, TCase::D1).unwrap();
    let alpha = PlaneVector::new(alg.one(), alg.zero());
    let beta = PlaneVector::new(alg.zero(), gamma);
    assert_eq!(riemann_form(&alpha, &beta, &t).unwrap(), q(7));
    assert_eq!(riemann_form(&beta, &alpha, &t).unwrap(), q(-7));
}

#[test]
fn riemann_form_is_alternating_and_bilinear() {
    let mut rng = sampling::rng(21);
    for (p, c) in planes_and_cases() {
        let t = make_t(&p, c).unwrap();
        let alg = p.algebra();
        let n = if p.algebra().degree() == 3 { 40 } else { 200 };
        let v = |rng: &mut sampling::Rng64| {
            PlaneVector::new(sampling::algebra_element(rng, alg, 3, 2), sampling::algebra_element(rng, alg, 3, 2))
        };
        for _ in 0..n {
            let (x, y, z) = (v(&mut rng), v(&mut rng), v(&mut rng));
            assert!(riemann_form(&x, &x, &t).unwrap().is_zero());
            assert_eq!(riemann_form(&x, &y, &t).unwrap(), -riemann_form(&y, &x, &t).unwrap());
            let r = sampling::rational(&mut rng, 5, 3);
            let comb = PlaneVector::new(&x.x1 + &y.x1.scale(&r), &x.x2 + &y.x2.scale(&r));
            let lhs = riemann_form(&comb, &z, &t).unwrap();
            let rhs = riemann_form(&x, &z, &t).unwrap() + &r * riemann_form(&y, &z, &t).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

fn pfaffian4(m: &[Vec<BigInt>]) -> BigInt {
    &m[0][1] * &m[2][3] - &m[0][2] * &m[1][3] + &m[0][3] * &m[1][2]
}

#[test]
fn principal_polarization_for_minus_seven() {
    let p = d1(-7);
    let t = make_t(&p, TCase::D1).unwrap();
    let lat = LatticeSpec::natural(&p).unwrap();
    let rep = polarization_type(&lat, &t).unwrap();
    assert_eq!(rep.elementary_divisors, vec![BigInt::one(); 4]);
    assert!(rep.principal && rep.antisymmetric);
    assert_eq!(rep.scale, BigRational::new(1.into(), 7.into()));
    assert_eq!(rep.determinant, BigInt::one());
    // independent oracle: an alternating 4x4 matrix with coprime entries and |Pf| = 1 is unimodular
    assert_eq!(pfaffian4(&rep.gram).magnitude(), &num_bigint::BigUint::one());
    let g = rep.gram.iter().flatten().fold(BigInt::zero(), |a, x| num_integer::Integer::gcd(&a, x));
    assert_eq!(g, BigInt::one());
}

#[test]
fn polarization_reports_for_other_cases() {
    for (p, c) in [(d1(-20), TCase::D1), (quat(2, 3), TCase::D2b), (quat(2, 3), TCase::D2a)] {
        let t = make_t(&p, c).unwrap();
        let rep = polarization_type(&LatticeSpec::natural(&p).unwrap(), &t).unwrap();
        assert!(rep.antisymmetric);
        let prod = rep.elementary_divisors.iter().fold(BigInt::one(), |a, d| a * d);
        assert_eq!(prod.magnitude(), rep.determinant.magnitude());
    }
}

#[test]
fn lattice_spec_validation() {
    let p = quat(2, 3);
    let alg = p.algebra();
    let c = alg.from_l(&FieldElement::generator(alg.l()));
    assert!(matches!(LatticeSpec::new(&p, vec![alg.one(), alg.one()], None), Err(ModuliError::BadOrder(_))));
    assert!(matches!(LatticeSpec::new(&p, vec![alg.one(), c.scale(&BigRational::new(1.into(), 2.into()))], None), Err(ModuliError::BadOrder(_))));
}

#[test]
fn phi_is_a_representation() {
    let mut rng = sampling::rng(2);
    let t = CyclotomicSeven::new();
    let cases = vec![
        (d1(-7).algebra().clone(), 2usize),
        (quat(2, 3).algebra().clone(), 4),
        (d3().algebra().clone(), 18),
        (standard::seventh_algebra(&t), 18),
    ];
    for (alg, n) in cases {
        let one = phi_numeric(&alg.one());
        assert_eq!(one.nrows(), n);
        assert!((one - nalgebra::DMatrix::<Complex64>::identity(n, n)).norm() < 1e-12);
        let samples = if n > 4 { 60 } else { 200 };
        for _ in 0..samples {
            let a = sampling::algebra_element(&mut rng, &alg, 3, 2);
            let b = sampling::algebra_element(&mut rng, &alg, 3, 2);
            let lhs = phi_numeric(&(&a * &b));
            let rhs = phi_numeric(&a) * phi_numeric(&b);
            assert!((&lhs - &rhs).norm() / rhs.norm().max(1.0) < 1e-9);
            let v = numeric_vector(&(&a * &b));
            assert!((&v - phi_numeric(&a) * numeric_vector(&b)).norm() / v.norm().max(1.0) < 1e-9);
        }
    }
    assert_eq!(expected_dimension(&d1(-7)), 2);
    assert_eq!(expected_dimension(&quat(2, 3)), 4);
    assert_eq!(expected_dimension(&d3()), 18);
}

#[test]
fn quaternion_split() {
    let s = split_quaternion_basis(&quat(2, 3)).unwrap();
    assert_eq!(s.ec_squared, q(-6));
    assert!(s.relation_holds && s.direct_sum);
    assert_eq!(s.dimension, 4);
    assert!(split_quaternion_basis(&d1(-7)).is_err());
}

fn unit_pair(alg: &std::sync::Arc<hypplane::cycalg::CyclicAlgebra>) -> (PlaneVector, PlaneVector) {
    (PlaneVector::new(alg.one(), alg.zero()), PlaneVector::new(alg.zero(), alg.one()))
}

#[test]
fn quaternion_lattice_splits() {
    let p = quat(2, 3);
    let alg = p.algebra();
    let (x1, x2) = unit_pair(alg);
    let t = make_t(&p, TCase::D2b).unwrap();
    let r = lattice_splitting(alg, (&x1, &x2), Some(&t)).unwrap();
    assert_eq!(r.summands, 2);
    assert_eq!(r.summand_ranks, vec![4, 4]);
    assert!(r.direct_sum && r.order_stable && r.stable.iter().all(|s| *s));
    assert_eq!(r.order_index, vec![BigInt::from(2)]);
    assert!(r.cross_pairing_max.is_some());
    let s = split_quaternion_basis(&p).unwrap();
    let y = PlaneVector::new(&alg.from_int(2) + &s.ec, alg.from_int(-1));
    let r = lattice_splitting(alg, (&y, &x2), None).unwrap();
    assert!(r.direct_sum && r.stable.iter().all(|s| *s));
    let bad = PlaneVector::new(s.c.clone(), alg.zero());
    assert!(matches!(lattice_splitting(alg, (&bad, &x2), None), Err(ModuliError::NotInSubfield(_))));
}

#[test]
fn degree_three_lattice_splits() {
    let t = CyclotomicSeven::new();
    let mut rng = sampling::rng(17);
    for alg in [standard::seventh_algebra(&t), standard::seventh_companion(&t)] {
        let (x1, x2) = unit_pair(&alg);
        let r = lattice_splitting(&alg, (&x1, &x2), None).unwrap();
        assert_eq!(r.summands, 3);
        assert_eq!(r.summand_ranks, vec![12, 12, 12]);
        assert!(r.direct_sum && r.order_stable && r.stable.iter().all(|s| *s));
        assert_eq!(r.order_index, vec![BigInt::one()]);
        let y1 = PlaneVector::new(alg.from_l(&sampling::integral_element(&mut rng, &t.l, 2)), alg.from_l(&t.zeta(3)));
        let y2 = PlaneVector::new(alg.zero(), alg.from_l(&sampling::integral_element(&mut rng, &t.l, 2)));
        let r = lattice_splitting(&alg, (&y1, &y2), None).unwrap();
        assert!(r.direct_sum && r.stable.iter().all(|s| *s));
        assert!(matches!(lattice_splitting(&alg, (&PlaneVector::new(alg.e(), alg.zero()), &x2), None), Err(ModuliError::NotInSubfield(_))));
    }
    let p = d3();
    let tt = make_t(&p, TCase::D3).unwrap();
    let (x1, x2) = unit_pair(p.algebra());
    assert!(lattice_splitting(p.algebra(), (&x1, &x2), Some(&tt)).unwrap().cross_pairing_max.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn alternating_on_integral_vectors(seed in any::<u64>()) {
        let p = d1(-20);
        let t = make_t(&p, TCase::D1).unwrap();
        let mut rng = sampling::rng(seed);
        let alg = p.algebra();
        let x = PlaneVector::new(sampling::integral_algebra_element(&mut rng, alg, 5), sampling::integral_algebra_element(&mut rng, alg, 5));
        let y = PlaneVector::new(sampling::integral_algebra_element(&mut rng, alg, 5), sampling::integral_algebra_element(&mut rng, alg, 5));
        prop_assert!(riemann_form(&x, &x, &t).unwrap().is_zero());
        let e = riemann_form(&x, &y, &t).unwrap();
        prop_assert!(e.is_integer());
        prop_assert_eq!(e, -riemann_form(&y, &x, &t).unwrap());
    }
}
