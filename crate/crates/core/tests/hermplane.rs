use std::sync::{Arc, OnceLock};

use hypplane::catalog::{CyclotomicSeven, QuadraticField};
use hypplane::cycalg::{standard, CyclicAlgebra};
use hypplane::exactfield::{FieldElement, NumberField, TowerMap};
use hypplane::hermplane::{
    congruence_membership, GroupMatrix, HyperbolicPlane, Membership, Order, PlaneCase, PlaneError, PlaneVector,
    Stabilizer,
};
use hypplane::linalg::{q, qf};
use hypplane::sampling::{self, SeedableRng};
use proptest::prelude::*;

struct Fixture {
    t: CyclotomicSeven,
    k7: HyperbolicPlane,
    k20: HyperbolicPlane,
    quat: HyperbolicPlane,
    d7c: HyperbolicPlane,
    d7: Arc<CyclicAlgebra>,
}

fn fx() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let t = CyclotomicSeven::new();
        let plane = |a| HyperbolicPlane::new(a).unwrap();
        Fixture {
            k7: plane(standard::quadratic(&QuadraticField::new(-7).unwrap())),
            k20: plane(standard::quadratic(&QuadraticField::new(-20).unwrap())),
            quat: plane(standard::quaternion(2, 3).unwrap()),
            d7c: plane(standard::seventh_companion(&t)),
            d7: standard::seventh_algebra(&t),
            t,
        }
    })
}

fn planes() -> [&'static HyperbolicPlane; 4] {
    let f = fx();
    [&f.k7, &f.k20, &f.quat, &f.d7c]
}

fn random_vector(p: &HyperbolicPlane, rng: &mut sampling::Rng64) -> PlaneVector {
    let a = p.algebra();
    PlaneVector::new(sampling::algebra_element(rng, a, 4, 3), sampling::algebra_element(rng, a, 4, 3))
}

#[test]
fn cases_and_missing_involution() {
    let f = fx();
    assert_eq!(f.k7.case(), PlaneCase::D1);
    assert_eq!(f.quat.case(), PlaneCase::D2);
    assert_eq!(f.d7c.case(), PlaneCase::D3);
    assert!(matches!(HyperbolicPlane::new(f.d7.clone()), Err(PlaneError::NoInvolution(_))));
}

#[test]
fn imaginary_units() {
    let f = fx();
    assert_eq!(f.k7.imaginary_square(), q(-7));
    assert_eq!(f.k20.imaginary_square(), q(-5));
    assert_eq!(f.quat.imaginary_square(), q(-6));
    assert_eq!(f.d7c.imaginary_square(), q(-7));
    for p in planes() {
        let s = p.imaginary_unit();
        assert_eq!(s.bar(), -&s);
    }
}

#[test]
fn form_is_hermitian_and_left_linear() {
    let mut rng = sampling::rng(11);
    for p in planes() {
        for _ in 0..6 {
            let x = random_vector(p, &mut rng);
            let y = random_vector(p, &mut rng);
            let l = sampling::algebra_element(&mut rng, p.algebra(), 3, 2);
            assert_eq!(p.herm_form(&y, &x), p.herm_form(&x, &y).bar());
            assert_eq!(p.herm_form(&x.left_scale(&l), &y), &l * &p.herm_form(&x, &y));
            assert_eq!(p.herm_form(&x, &y.left_scale(&l)), &p.herm_form(&x, &y) * &l.bar());
        }
    }
}

#[test]
fn unitary_samples_preserve_the_form() {
    let mut rng = sampling::rng(12);
    for p in planes() {
        for _ in 0..4 {
            let g = p.random_unitary(&mut rng, 4);
            assert!(p.is_unitary(&g));
            assert_eq!(p.unitary_relations(&g), [true; 3]);
            assert!(p.is_unitary(&g.unitary_inverse()));
            assert!(g.mul(&g.unitary_inverse()).is_identity());
            let x = random_vector(p, &mut rng);
            let y = random_vector(p, &mut rng);
            assert_eq!(p.herm_form(&x.times(&g), &y.times(&g)), p.herm_form(&x, &y));
        }
    }
}

#[test]
fn special_unitary_samples_have_determinant_one() {
    let mut rng = sampling::rng(13);
    for p in planes() {
        for _ in 0..3 {
            let g = p.random_special_unitary(&mut rng, 4);
            assert!(p.is_unitary(&g));
            assert!(p.is_special(&g).unwrap());
        }
    }
    // the swap has block determinant (−1)^d
    for p in planes() {
        let w = GroupMatrix::form_matrix(p.algebra());
        let sign = if p.algebra().degree() % 2 == 1 { -1 } else { 1 };
        assert_eq!(p.block_det(&w).unwrap(), FieldElement::from_int(p.algebra().k_map().source(), sign));
    }
}

#[test]
fn levi_determinant_is_norm_ratio() {
    let mut rng = sampling::rng(14);
    let p = &fx().d7c;
    let a = sampling::nonzero_algebra_element(&mut rng, p.algebra(), 3, 1);
    let g = p.levi(&a).unwrap();
    let n = a.reduced_norm().unwrap();
    let nbar = a.bar().reduced_norm().unwrap();
    assert_eq!(p.block_det(&g).unwrap(), n.try_div(&nbar).unwrap());
}

#[test]
fn su_sl2_isomorphism_round_trips() {
    let mut rng = sampling::rng(15);
    for p in [&fx().k7, &fx().k20] {
        for _ in 0..10 {
            let m1 = sampling::sl2_rational(&mut rng, 3, 4, 3);
            let m2 = sampling::sl2_rational(&mut rng, 3, 4, 3);
            let g1 = p.sl2_to_su(&m1).unwrap();
            let g2 = p.sl2_to_su(&m2).unwrap();
            assert!(p.is_unitary(&g1) && p.is_special(&g1).unwrap());
            assert_eq!(p.su_to_sl2(&g1).unwrap(), m1);
            let prod = sampling::mat2_mul(&m1, &m2);
            assert_eq!(p.sl2_to_su(&prod).unwrap(), g1.mul(&g2));
        }
    }
    assert!(matches!(fx().quat.sl2_to_su(&sampling::sl2_rational(&mut rng, 1, 1, 1)), Err(PlaneError::Unsupported(_))));
}

#[test]
fn completion_of_standard_vectors() {
    let p = &fx().k7;
    let a = p.algebra();
    let order = Order::natural(a);
    let (zero, one) = (a.zero(), a.one());
    let e1 = PlaneVector::new(one.clone(), zero.clone());
    let e2 = PlaneVector::new(zero.clone(), one.clone());
    let m = p.integral_complete(&e1, (&one, &zero), &order).unwrap();
    assert_eq!(m, GroupMatrix::form_matrix(a));
    let m = p.integral_complete(&e2, (&zero, &one), &order).unwrap();
    assert!(m.is_identity());
    assert_eq!(p.complete_isotropic(&e2).unwrap().rows()[1], e2);
}

#[test]
fn integral_completion_needs_the_correction_term() {
    let f = fx();
    let p = &f.k7;
    let a = p.algebra();
    let theta = a.from_l(&FieldElement::generator(a.l()));
    let s = p.imaginary_unit();
    // (√−7, 2) with θ = (1+√−7)/2 and √−7·1 + 2·(1−θ) = 1
    let xi = PlaneVector::new(s.clone(), a.from_int(2));
    assert!(p.is_isotropic(&xi));
    let (x, y) = (a.one(), &a.one() - &theta);
    let delta = &y.bar() * &x.bar().bar();
    assert!(!(&delta + &delta.bar()).is_zero());
    let m = p.integral_complete(&xi, (&x, &y), &Order::natural(a)).unwrap();
    assert!(p.is_unitary(&m));
    assert_eq!(m.rows()[1], xi);
    assert_eq!(p.gamma_membership(&m, &Order::natural(a)), Membership::GammaOL);
    assert!(matches!(p.integral_complete(&xi, (&x, &x), &Order::natural(a)), Err(PlaneError::NotBezout(_))));
}

#[test]
fn rational_completion_of_random_isotropic_vectors() {
    let mut rng = sampling::rng(16);
    for p in planes() {
        for _ in 0..4 {
            let xi = p.random_isotropic(&mut rng);
            assert!(p.is_isotropic(&xi));
            let m = p.complete_isotropic(&xi).unwrap();
            assert!(p.is_unitary(&m));
            assert_eq!(m.rows()[1], xi);
        }
        let a = p.algebra();
        let bad = PlaneVector::new(a.one(), a.one());
        assert_eq!(p.complete_isotropic(&bad), Err(PlaneError::NotIsotropic));
    }
}

#[test]
fn embedded_subgroup_is_special_unitary() {
    let f = fx();
    let mut rng = sampling::rng(17);
    let qf_ = NumberField::rationals();
    for p in planes() {
        let to_l = TowerMap::new(&qf_, p.algebra().l(), FieldElement::zero(p.algebra().l())).unwrap();
        for _ in 0..3 {
            let m1 = sampling::sl2_rational(&mut rng, 3, 3, 2);
            let m2 = sampling::sl2_rational(&mut rng, 3, 3, 2);
            let lift = |m: &[[num_rational::BigRational; 2]; 2]| {
                [0, 1].map(|i| [0, 1].map(|j| FieldElement::from_rational(&qf_, m[i][j].clone())))
            };
            let g1 = p.embed_subgroup(&lift(&m1), &to_l).unwrap();
            let g2 = p.embed_subgroup(&lift(&m2), &to_l).unwrap();
            assert!(p.is_unitary(&g1) && p.is_special(&g1).unwrap());
            let g12 = p.embed_subgroup(&lift(&sampling::mat2_mul(&m1, &m2)), &to_l).unwrap();
            assert_eq!(g12, g1.mul(&g2));
        }
    }
    // entries from the real cubic subfield for d = 3
    let ell = &f.t.ell;
    let eta = FieldElement::generator(ell);
    let one = FieldElement::one(ell);
    let zero = FieldElement::zero(ell);
    let m = [[one.clone(), eta.clone()], [zero.clone(), one.clone()]];
    let g = f.d7c.embed_subgroup(&m, &f.t.ell_in_l).unwrap();
    assert!(f.d7c.is_unitary(&g) && f.d7c.is_special(&g).unwrap());
    assert!(g.entries().iter().all(|x| x.in_l()));
}

#[test]
fn gamma_membership_classes() {
    let p = &fx().quat;
    let a = p.algebra();
    let nat = Order::natural(a);
    assert_eq!(p.gamma_membership(&GroupMatrix::identity(a), &nat), Membership::GammaOL);
    let half = GroupMatrix::new(a.one(), a.from_rational(qf(1, 2)) * p.imaginary_unit(), a.zero(), a.one());
    assert!(p.is_unitary(&half));
    assert_eq!(p.gamma_membership(&half, &nat), Membership::Neither);
    let u = p.upper_unipotent(&a.e());
    assert_eq!(p.gamma_membership(&u, &nat), Membership::GammaDelta);
    let not_unitary = GroupMatrix::new(a.from_int(2), a.zero(), a.zero(), a.one());
    assert_eq!(p.gamma_membership(&not_unitary, &nat), Membership::Neither);
}

#[test]
fn stabilizers() {
    let mut rng = sampling::rng(18);
    for p in planes() {
        let x = p.random_skew(&mut rng, 2, 1);
        let y = p.random_skew(&mut rng, 2, 1);
        let (u, v) = (p.cayley(&x).unwrap(), p.cayley(&y).unwrap());
        assert!((&u * &u.bar()).is_one());
        let k = p.compact_element(&u, &v);
        assert!(p.in_stabilizer(&k, Stabilizer::Compact));
        let a = sampling::nonzero_algebra_element(&mut rng, p.algebra(), 2, 1);
        let par = p.levi(&a).unwrap().mul(&p.upper_unipotent(&x));
        assert!(p.in_stabilizer(&par, Stabilizer::Parabolic));
        assert!(!p.in_stabilizer(&p.lower_unipotent(&x), Stabilizer::Parabolic) || x.is_zero());
    }
}

#[test]
fn unipotent_dimensions() {
    let f = fx();
    assert_eq!(f.k7.unipotent_dimension().unwrap(), 1);
    assert_eq!(f.quat.unipotent_dimension().unwrap(), 3);
    assert_eq!(f.d7c.unipotent_dimension().unwrap(), 9);
    assert_eq!(f.d7c.tits_data().real_form, "SU(3,3)");
}

#[test]
fn congruence_subgroup_membership() {
    let kq = NumberField::rationals();
    let r = |n: i64, d: i64| FieldElement::from_rational(&kq, qf(n, d));
    let seven = [r(7, 1)];
    let inside = [[r(1, 1), r(1, 7)], [r(0, 1), r(1, 1)]];
    assert!(congruence_membership(&inside, &seven));
    let lower = [[r(1, 1), r(0, 1)], [r(7, 1), r(1, 1)]];
    assert!(congruence_membership(&lower, &seven));
    let outside = [[r(1, 1), r(0, 1)], [r(1, 1), r(1, 1)]];
    assert!(!congruence_membership(&outside, &seven));
}

fn perturb(g: &GroupMatrix, z: hypplane::cycalg::AlgebraElement, slot: usize) -> GroupMatrix {
    let mut h = g.clone();
    match slot {
        0 => h.a = &h.a + &z,
        1 => h.b = &h.b + &z,
        2 => h.c = &h.c + &z,
        _ => h.d = &h.d + &z,
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, .. ProptestConfig::default() })]

    #[test]
    fn unitary_iff_relations(seed in any::<u64>(), which in 0usize..4, slot in 0usize..4, perturbed in any::<bool>()) {
        let p = planes()[which];
        let mut rng = sampling::Rng64::seed_from_u64(seed);
        let mut g = p.random_unitary(&mut rng, 3);
        if perturbed {
            let z = sampling::algebra_element(&mut rng, p.algebra(), 2, 2);
            g = perturb(&g, z, slot);
        }
        let rel = p.unitary_relations(&g);
        prop_assert_eq!(p.is_unitary(&g), rel.iter().all(|&b| b));
    }

    #[test]
    fn block_and_schur_determinants_agree(seed in any::<u64>(), which in 0usize..4) {
        let p = planes()[which];
        let mut rng = sampling::Rng64::seed_from_u64(seed);
        let a = p.algebra();
        let g = GroupMatrix::new(
            sampling::algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
            sampling::algebra_element(&mut rng, a, 3, 2),
        );
        prop_assert_eq!(p.block_det(&g).unwrap(), p.dieudonne_det(&g).unwrap());
    }
}
