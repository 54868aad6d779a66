use std::sync::{Arc, OnceLock};

use hypplane::catalog::{CyclotomicSeven, QuadraticField};
use hypplane::cycalg::{standard, AlgebraError, CyclicAlgebra, InvolutionSpec};
use hypplane::exactfield::FieldElement;
use hypplane::linalg::{self, q};
use hypplane::sampling::{self, Rng64};
use num_rational::BigRational;

struct Fixture {
    t: CyclotomicSeven,
    d7: Arc<CyclicAlgebra>,
    d7c: Arc<CyclicAlgebra>,
    quat: Arc<CyclicAlgebra>,
    k7: Arc<CyclicAlgebra>,
}

fn fx() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let t = CyclotomicSeven::new();
        let d7 = standard::seventh_algebra(&t);
        let d7c = standard::seventh_companion(&t);
        let quat = standard::quaternion(2, 3).unwrap();
        let k7 = standard::quadratic(&QuadraticField::new(-7).unwrap());
        Fixture { t, d7, d7c, quat, k7 }
    })
}

fn sample(rng: &mut Rng64, a: &Arc<CyclicAlgebra>) -> hypplane::cycalg::AlgebraElement {
    sampling::algebra_element(rng, a, 5, 3)
}

#[test]
fn defining_relations() {
    let f = fx();
    let mut rng = sampling::rng(1);
    for a in [&f.d7, &f.d7c, &f.quat] {
        let e = a.e();
        let d = a.degree() as u32;
        assert_eq!(e.pow(d), a.from_k(a.gamma()));
        assert_eq!(&e.pow(d - 1) * &e, a.from_k(a.gamma()));
        for _ in 0..100 {
            let z = sampling::field_element(&mut rng, a.l(), 9, 5);
            let lhs = &e * &a.from_l(&z);
            let rhs = &a.from_l(&a.sigma().apply(&z)) * &e;
            assert_eq!(lhs, rhs);
            // e·z is the coordinate vector (0, z, 0, …) in the Σ eⁱzᵢ convention
            let mut want = vec![FieldElement::zero(a.l()); a.degree()];
            want[1] = z.clone();
            assert_eq!(lhs.coords(), &want[..]);
        }
    }
}

#[test]
fn matrix_of_e_is_the_twisted_shift() {
    let f = fx();
    let m = f.d7.matrix_rep(&f.d7.e());
    let one = FieldElement::one(f.d7.l());
    let zero = FieldElement::zero(f.d7.l());
    let g = f.d7.gamma_in_l().clone();
    assert_eq!(m, vec![vec![zero.clone(), one.clone(), zero.clone()], vec![zero.clone(), zero.clone(), one.clone()], vec![g, zero.clone(), zero]]);
    let id = f.d7.matrix_rep(&f.d7.one());
    assert_eq!(id, (0..3).map(|i| (0..3).map(|j| if i == j { one.clone() } else { FieldElement::zero(f.d7.l()) }).collect()).collect::<Vec<Vec<_>>>());
}

#[test]
fn matrix_rep_is_a_homomorphism() {
    let f = fx();
    let mut rng = sampling::rng(2);
    for a in [&f.d7, &f.quat] {
        for _ in 0..500 {
            let (x, y) = (sample(&mut rng, a), sample(&mut rng, a));
            let lhs = a.matrix_rep(&(&x * &y));
            let rhs = linalg::matmul(&a.matrix_rep(&x), &a.matrix_rep(&y));
            assert_eq!(lhs, rhs);
            assert_eq!(a.from_matrix(&a.matrix_rep(&x)).unwrap(), x);
        }
    }
}

/// 2×2 matrices over ℚ(√2) with entries (u, v) meaning u + v√2.
type R2 = (BigRational, BigRational);
fn r2mul(x: &R2, y: &R2) -> R2 {
    (&x.0 * &y.0 + q(2) * &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}
fn r2add(x: &R2, y: &R2) -> R2 {
    (&x.0 + &y.0, &x.1 + &y.1)
}
fn m2mul(a: &[[R2; 2]; 2], b: &[[R2; 2]; 2]) -> [[R2; 2]; 2] {
    let e = |i: usize, j: usize| r2add(&r2mul(&a[i][0], &b[0][j]), &r2mul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

#[test]
fn quaternion_ec_squares_to_minus_ab() {
    let f = fx();
    let z = (q(0), q(0));
    let e_m = [[z.clone(), (q(1), q(0))], [(q(3), q(0)), z.clone()]];
    let c_m = [[(q(0), q(1)), z.clone()], [z.clone(), (q(0), q(-1))]];
    let ec = m2mul(&e_m, &c_m);
    let sq = m2mul(&ec, &ec);
    assert_eq!(sq, [[(q(-6), q(0)), z.clone()], [z.clone(), (q(-6), q(0))]]);

    let a = &f.quat;
    let c = a.from_l(&FieldElement::generator(a.l()));
    let ec = &a.e() * &c;
    assert_eq!(&ec * &ec, a.from_int(-6));
}

#[test]
fn quaternion_norm_formula() {
    let f = fx();
    let a = &f.quat;
    let mut rng = sampling::rng(3);
    let c = a.from_l(&FieldElement::generator(a.l()));
    let e = a.e();
    let ec = &e * &c;
    for _ in 0..100 {
        let v: Vec<BigRational> = (0..4).map(|_| sampling::rational(&mut rng, 9, 4)).collect();
        let x = &(&(&a.from_rational(v[0].clone()) + &(&c * &a.from_rational(v[1].clone())))
            + &(&e * &a.from_rational(v[2].clone())))
            + &(&ec * &a.from_rational(v[3].clone()));
        let want = &v[0] * &v[0] - q(2) * &v[1] * &v[1] - q(3) * &v[2] * &v[2] + q(6) * &v[3] * &v[3];
        assert_eq!(x.reduced_norm().unwrap().as_rational(), Some(want));
    }
    assert_eq!(a.one().reduced_norm().unwrap().as_rational(), Some(q(1)));
    assert_eq!(a.one().reduced_trace().unwrap().as_rational(), Some(q(2)));
    assert_eq!(f.d7.one().reduced_trace().unwrap().as_rational(), Some(q(3)));
}

#[test]
fn inverses() {
    let f = fx();
    for a in [&f.d7, &f.quat] {
        assert_eq!(a.one().inverse().unwrap(), a.one());
        let d = a.degree();
        let inv = a.e().inverse().unwrap();
        let mut want = vec![FieldElement::zero(a.l()); d];
        want[d - 1] = a.gamma_in_l().inv().unwrap();
        assert_eq!(inv.coords(), &want[..]);
    }
    assert!(matches!(f.d7.zero().inverse(), Err(AlgebraError::ZeroDivisor { .. })));
    let mut rng = sampling::rng(4);
    for _ in 0..200 {
        let x = sampling::nonzero_algebra_element(&mut rng, &f.d7, 5, 3);
        assert!((&x * &x.inverse().unwrap()).is_one());
    }
}

#[test]
fn reduced_norm_and_trace_laws() {
    let f = fx();
    let mut rng = sampling::rng(5);
    for a in [&f.d7, &f.quat] {
        for _ in 0..300 {
            let (x, y) = (sample(&mut rng, a), sample(&mut rng, a));
            let n = |z: &hypplane::cycalg::AlgebraElement| z.reduced_norm().unwrap();
            let t = |z: &hypplane::cycalg::AlgebraElement| z.reduced_trace().unwrap();
            assert_eq!(n(&(&x * &y)), &n(&x) * &n(&y));
            assert_eq!(t(&(&x * &y)), t(&(&y * &x)));
            let r = sampling::rational(&mut rng, 7, 3);
            assert_eq!(t(&(&x.scale(&r) + &y)), &t(&x).scale(&r) + &t(&y));
        }
    }
}

#[test]
fn involution_on_l_is_conjugation() {
    let f = fx();
    let mut rng = sampling::rng(6);
    for _ in 0..50 {
        let z = sampling::field_element(&mut rng, &f.t.l, 9, 3);
        assert_eq!(f.d7c.from_l(&z).bar(), f.d7c.from_l(&f.t.rho.apply(&z)));
    }
    let w = f.t.ell_in_l.apply(&FieldElement::generator(&f.t.ell));
    assert_eq!(f.d7c.from_l(&w).bar(), f.d7c.from_l(&w));
}

#[test]
fn quaternion_involution_is_the_adjugate() {
    let f = fx();
    let a = &f.quat;
    let mut rng = sampling::rng(7);
    for _ in 0..100 {
        let x = sample(&mut rng, a);
        let m = a.matrix_rep(&x);
        let adj = vec![vec![m[1][1].clone(), -&m[0][1]], vec![-&m[1][0], m[0][0].clone()]];
        assert_eq!(a.matrix_rep(&x.bar()), adj);
    }
}

#[test]
fn involution_axioms() {
    let f = fx();
    let mut rng = sampling::rng(8);
    for a in [&f.d7c, &f.quat, &f.k7] {
        for _ in 0..300 {
            let (x, y) = (sample(&mut rng, a), sample(&mut rng, a));
            assert_eq!(x.bar().bar(), x);
            assert_eq!((&x * &y).bar(), &y.bar() * &x.bar());
            let rho = &a.involution().unwrap().rho;
            let conj_n = a.k_map().descend(&rho.apply(&a.k_map().apply(&x.reduced_norm().unwrap()))).unwrap();
            assert_eq!(x.bar().reduced_norm().unwrap(), conj_n);
        }
    }
    let a = &f.quat;
    for _ in 0..300 {
        let x = sample(&mut rng, a);
        assert_eq!(&x + &x.bar(), a.from_k(&x.reduced_trace().unwrap()));
        assert_eq!(&x * &x.bar(), a.from_k(&x.reduced_norm().unwrap()));
    }
}

#[test]
fn plus_minus_dimensions() {
    let f = fx();
    let s = f.d7c.plus_minus_split().unwrap();
    assert_eq!((s.dim_plus, s.dim_minus), (9, 9));
    assert!(s.direct_sum && s.q_squared_central);
    for b in &s.plus {
        assert_eq!(&b.bar(), b);
    }
    for b in &s.minus {
        assert_eq!(b.bar(), -b);
    }
    for i in 0..3u32 {
        let ei = f.d7c.e().pow(i);
        let big_e = &ei + &ei.bar();
        assert_eq!(big_e.bar(), big_e);
    }
    let s1 = f.k7.plus_minus_split().unwrap();
    assert_eq!((s1.dim_plus, s1.dim_minus), (1, 1));
    assert_eq!(f.d7c.skew_dimension().unwrap(), 9);
    assert!(f.quat.plus_minus_split().is_err());
}

#[test]
fn omega_two_fails_the_norm_condition_for_gamma() {
    let f = fx();
    assert!(f.d7.involution().is_none());
    // ω = 2 fails the norm condition for γ itself: N(2) = 8 but γγ̄ = 2
    let r = CyclicAlgebra::new(
        "D7try",
        f.t.k_in_l.clone(),
        f.t.sigma.clone(),
        f.t.gamma(),
        Some(InvolutionSpec::Second { rho: f.t.rho.clone(), omega: FieldElement::from_int(&f.t.l, 2) }),
    );
    assert!(matches!(r, Err(AlgebraError::InvalidInvolution(_))));
}

#[test]
fn involution_spec_validation() {
    let f = fx();
    let r = CyclicAlgebra::new("bad", f.t.k_in_l.clone(), f.t.sigma.clone(), f.t.gamma(), Some(InvolutionSpec::First));
    assert!(matches!(r, Err(AlgebraError::InvalidInvolution(_))));
    let r = CyclicAlgebra::new(
        "bad",
        f.t.k_in_l.clone(),
        f.t.sigma.clone(),
        f.t.gamma().scale(&q(0)),
        None,
    );
    assert_eq!(r.unwrap_err(), AlgebraError::ZeroGamma);
}
