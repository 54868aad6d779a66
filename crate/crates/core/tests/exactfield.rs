use hypplane::catalog::{CyclotomicSeven, QuadraticField};
use hypplane::exactfield::modp::{self, factor_poly_mod_p};
use hypplane::exactfield::{
    apply_automorphism, field_arith, numeric_embed, relative_trace_norm, ArithOp, Automorphism, FieldElement,
    FieldError, NumberField, TowerMap, TraceOrNorm,
};
use hypplane::linalg::q;
use num_bigint::BigInt;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Squares a sum of powers of ζ in the group ring ℤ[C₇] and rewrites it in the basis 1..ζ⁵.
fn group_ring_square(exps: &[usize]) -> Vec<i64> {
    let mut counts = [0i64; 7];
    for &a in exps {
        for &b in exps {
            counts[(a + b) % 7] += 1;
        }
    }
    (0..6).map(|j| counts[j] - counts[6]).collect()
}

#[test]
fn gamma_satisfies_its_quadratic_in_both_models() {
    let t = CyclotomicSeven::new();
    let g = t.gamma();
    let val = &(&(&g * &g) + &g) + &FieldElement::from_int(&t.k.field, 2);
    assert!(val.is_zero());

    let sq = group_ring_square(&[1, 2, 4]);
    let gl = t.k_in_l.apply(&g);
    assert_eq!(&gl * &gl, FieldElement::from_ints(&t.l, &sq));
    let lhs = &(&(&gl * &gl) + &gl) + &FieldElement::from_int(&t.l, 2);
    assert!(lhs.is_zero());
}

#[test]
fn sigma_examples() {
    let t = CyclotomicSeven::new();
    assert_eq!(t.sigma.apply(&t.zeta(1)), t.zeta(2));
    let gl = t.k_in_l.image().clone();
    assert_eq!(t.sigma.apply(&gl), gl);
    assert_eq!(t.sigma.order(), 3);
    assert_eq!(apply_automorphism(&t.sigma, &t.zeta(3)).unwrap(), t.zeta(6));
    assert!(apply_automorphism(&t.sigma, &t.gamma()).is_err());
}

#[test]
fn trace_and_norm_examples() {
    let t = CyclotomicSeven::new();
    let n = relative_trace_norm(&t.gamma(), &t.k.over_q, TraceOrNorm::Norm).unwrap();
    assert_eq!(n.as_rational(), Some(q(2)));
    let tr = relative_trace_norm(&t.zeta(1), &t.l_over_ell, TraceOrNorm::Trace).unwrap();
    assert_eq!(tr, FieldElement::generator(&t.ell));
    let one = FieldElement::one(&t.k.field);
    assert_eq!(t.k.over_q.trace(&one).unwrap().as_rational(), Some(q(2)));
}

#[test]
fn arithmetic_errors() {
    let t = CyclotomicSeven::new();
    let a = FieldElement::one(&t.l);
    let b = FieldElement::one(&t.k.field);
    assert!(matches!(field_arith(&a, &b, ArithOp::Add), Err(FieldError::Mismatch(..))));
    let z = FieldElement::zero(&t.l);
    assert_eq!(field_arith(&a, &z, ArithOp::Div), Err(FieldError::DivisionByZero));
}

#[test]
fn construction_rejects_bad_polynomials() {
    assert!(matches!(NumberField::from_ints("r", &[-1, 0, 1]), Err(FieldError::Reducible(_))));
    assert!(matches!(NumberField::from_ints("r", &[6, -5, 1]), Err(FieldError::Reducible(_))));
    // x^4 + 4 = (x^2+2x+2)(x^2-2x+2) has no rational root
    assert!(matches!(NumberField::from_ints("r", &[4, 0, 0, 0, 1]), Err(FieldError::Reducible(_))));
    assert_eq!(NumberField::from_ints("r", &[1, 2]).unwrap_err(), FieldError::NotMonic);
    assert!(NumberField::from_ints("biquad", &[9, 0, -2, 0, 1]).is_ok());
    let f = NumberField::from_ints("Q(i)", &[1, 0, 1]).unwrap();
    let i = FieldElement::generator(&f);
    assert!(Automorphism::new(&f, &i + &FieldElement::one(&f)).is_err());
    let other = NumberField::from_ints("Q(sqrt2)", &[-2, 0, 1]).unwrap();
    assert!(TowerMap::new(&other, &f, i).is_err());
}

#[test]
fn factor_examples() {
    // over F2 a cubic is irreducible iff it has no root: constant term 1 and an odd number of terms
    let irreducible: Vec<Vec<u64>> = (0..8u64)
        .map(|m| vec![m & 1, (m >> 1) & 1, (m >> 2) & 1, 1])
        .filter(|c| c[0] == 1 && (c.iter().sum::<u64>() % 2 == 1))
        .collect();
    assert_eq!(irreducible, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1]]);
    let f = factor_poly_mod_p(&ints(&[1, 1, 1, 1, 1, 1, 1]), 2).unwrap();
    assert_eq!(f.factors, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
    assert_eq!(f.product(), vec![1; 7]);

    let f = factor_poly_mod_p(&ints(&[1, 0, 1]), 2).unwrap();
    assert_eq!(f.factors, vec![vec![1, 1], vec![1, 1]]);

    let roots: Vec<u64> = (0..5).filter(|x| (x * x + 1) % 5 == 0).collect();
    assert_eq!(roots, vec![2, 3]);
    let f = factor_poly_mod_p(&ints(&[1, 0, 1]), 5).unwrap();
    assert_eq!(f.factors, vec![vec![2, 1], vec![3, 1]]);

    assert_eq!(factor_poly_mod_p(&ints(&[1, 0, 1]), 1009).unwrap_err(), modp::ModpError::PrimeTooLarge(1009));
    assert_eq!(factor_poly_mod_p(&ints(&[2, 4]), 2).unwrap_err(), modp::ModpError::ZeroModP(2));
    assert_eq!(factor_poly_mod_p(&ints(&[1, 1]), 9).unwrap_err(), modp::ModpError::NotPrime(9));
}

#[test]
fn embedding_examples() {
    let k = QuadraticField::new(-7).unwrap();
    let s = numeric_embed(&k.sqrt_disc(), 0);
    assert!(s.re.abs() < 1e-12 && (s.im - 7f64.sqrt()).abs() < 1e-12);
    let t = CyclotomicSeven::new();
    for i in 0..3 {
        assert!((numeric_embed(&FieldElement::one(&t.ell), i).re - 1.0).abs() < 1e-15);
    }
    let e1 = FieldElement::generator(&t.ell);
    let got: Vec<f64> = (0..3).map(|i| numeric_embed(&e1, i).re).collect();
    let pi = std::f64::consts::PI;
    let want: Vec<f64> = (1..=3).map(|j| 2.0 * (2.0 * pi * j as f64 / 7.0).cos()).collect();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
    }
    let z = numeric_embed(&t.zeta(1), 0);
    assert!((z - num_complex::Complex64::from_polar(1.0, 2.0 * pi / 7.0)).norm() < 1e-12);
    assert!((numeric_embed(&t.k_in_l.image().clone(), 0) - numeric_embed(&t.gamma(), 0)).norm() < 1e-12);
}

#[test]
fn ell_basis_identities() {
    let t = CyclotomicSeven::new();
    assert_eq!(t.eta(3), &(&-&t.eta(1) - &t.eta(2)) - &FieldElement::one(&t.l));
    let e1 = FieldElement::generator(&t.ell);
    assert_eq!(t.sigma_ell.apply(&e1), &(&e1 * &e1) - &FieldElement::from_int(&t.ell, 2));
    assert_eq!(t.ell_in_l.apply(&t.sigma_ell.apply(&e1)), t.sigma.apply(&t.eta(1)));
    assert_eq!(t.ell_over_q.norm(&e1).unwrap().as_rational(), Some(q(1)));
}

fn towers() -> Vec<TowerMap> {
    let t = CyclotomicSeven::new();
    let quartic = NumberField::from_ints("Q(sqrt2,i)", &[9, 0, -2, 0, 1]).unwrap();
    let r2 = NumberField::from_ints("Q(sqrt2)", &[-2, 0, 1]).unwrap();
    // θ = √2 + i gives θ³ = −√2 + 5i, so √2 = (5θ − θ³)/6
    let th = FieldElement::generator(&quartic);
    let sqrt2 = (&th.scale(&q(5)) - &th.pow(3)).scale(&hypplane::linalg::qf(1, 6));
    vec![t.k_in_l.clone(), t.ell_in_l.clone(), TowerMap::new(&r2, &quartic, sqrt2).unwrap()]
}

#[test]
fn tower_embeddings_commute_numerically() {
    let mut rng = hypplane::sampling::rng(7);
    for m in towers() {
        for _ in 0..20 {
            let x = hypplane::sampling::field_element(&mut rng, m.source(), 9, 4);
            let y = m.apply(&x);
            for i in 0..m.target().degree() {
                let v = y.embed(i);
                let best = (0..m.source().degree()).map(|j| (x.embed(j) - v).norm()).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9);
            }
        }
    }
}

fn field_strategy() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0usize..3, prop::collection::vec(-9i64..=9, 6), prop::collection::vec(-9i64..=9, 6), prop::collection::vec(-9i64..=9, 6))
}

fn tower() -> &'static CyclotomicSeven {
    static T: std::sync::OnceLock<CyclotomicSeven> = std::sync::OnceLock::new();
    T.get_or_init(CyclotomicSeven::new)
}

fn pick(i: usize) -> std::sync::Arc<NumberField> {
    let t = tower();
    [t.l.clone(), t.k.field.clone(), t.ell.clone()][i].clone()
}

fn elt(f: &std::sync::Arc<NumberField>, v: &[i64]) -> FieldElement {
    FieldElement::from_ints(f, &v[..f.degree()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn ring_axioms((i, a, b, c) in field_strategy()) {
        let f = pick(i);
        let (x, y, z) = (elt(&f, &a), elt(&f, &b), elt(&f, &c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &FieldElement::zero(&f), x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn automorphisms_are_homomorphisms(a in prop::collection::vec(-9i64..=9, 6), b in prop::collection::vec(-9i64..=9, 6)) {
        let t = tower();
        let (x, y) = (elt(&t.l, &a), elt(&t.l, &b));
        for s in [&t.sigma, &t.rho] {
            prop_assert_eq!(s.apply(&(&x * &y)), &s.apply(&x) * &s.apply(&y));
            prop_assert_eq!(s.apply(&(&x + &y)), &s.apply(&x) + &s.apply(&y));
        }
        prop_assert_eq!(t.sigma.pow(3).apply(&x), x.clone());
    }

    #[test]
    fn trace_and_norm_laws(a in prop::collection::vec(-9i64..=9, 6), b in prop::collection::vec(-9i64..=9, 6)) {
        let t = tower();
        let (x, y) = (elt(&t.l, &a), elt(&t.l, &b));
        for ext in [&t.l_over_k, &t.l_over_ell, &t.l_over_q] {
            prop_assert_eq!(ext.trace(&(&x + &y)).unwrap(), &ext.trace(&x).unwrap() + &ext.trace(&y).unwrap());
            let g = ext.group().last().unwrap();
            prop_assert_eq!(ext.trace(&g.apply(&x)).unwrap(), ext.trace(&x).unwrap());
            prop_assert_eq!(ext.norm(&(&x * &y)).unwrap(), &ext.norm(&x).unwrap() * &ext.norm(&y).unwrap());
        }
        prop_assert_eq!(t.l_over_q.norm(&x).unwrap().as_rational().unwrap(), x.abs_norm());
    }

    #[test]
    fn factorization_reconstructs(c in prop::collection::vec(-20i64..=20, 2..8), pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 11][pi];
        let mut c = c;
        *c.last_mut().unwrap() = 1;
        let f = factor_poly_mod_p(&ints(&c), p).unwrap();
        prop_assert_eq!(f.product(), modp::reduce(&ints(&c), p));
        for g in &f.factors {
            prop_assert!(modp::is_irreducible_mod_p(g, p));
        }
    }
}
