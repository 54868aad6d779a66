//! Seeded random generators for fields, algebras and group elements.
//!
//! All randomized checks draw from a [`ChaCha8Rng`] so that a seed fixes every
//! sample, both in tests and in command-line reports.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cycalg::{AlgebraElement, CyclicAlgebra};
use crate::exactfield::{FieldElement, NumberField};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational with numerator in [−h, h] and denominator in [1, den].
pub fn rational(rng: &mut Rng64, h: i64, den: i64) -> BigRational {
    let n = rng.gen_range(-h..=h);
    let d = rng.gen_range(1..=den.max(1));
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random element with integer coordinates in [−h, h].
pub fn integral_element(rng: &mut Rng64, f: &Arc<NumberField>, h: i64) -> FieldElement {
    let c: Vec<i64> = (0..f.degree()).map(|_| rng.gen_range(-h..=h)).collect();
    FieldElement::from_ints(f, &c)
}

/// Random element with small rational coordinates.
pub fn field_element(rng: &mut Rng64, f: &Arc<NumberField>, h: i64, den: i64) -> FieldElement {
    FieldElement::new(f, (0..f.degree()).map(|_| rational(rng, h, den)).collect()).expect("length")
}

pub fn nonzero_field_element(rng: &mut Rng64, f: &Arc<NumberField>, h: i64, den: i64) -> FieldElement {
    loop {
        let x = field_element(rng, f, h, den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random algebra element with rational coordinates.
pub fn algebra_element(rng: &mut Rng64, a: &Arc<CyclicAlgebra>, h: i64, den: i64) -> AlgebraElement {
    let coords = (0..a.degree()).map(|_| field_element(rng, a.l(), h, den)).collect();
    a.element(coords).expect("coordinates in L")
}

pub fn nonzero_algebra_element(rng: &mut Rng64, a: &Arc<CyclicAlgebra>, h: i64, den: i64) -> AlgebraElement {
    loop {
        let x = algebra_element(rng, a, h, den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random element of the natural order ⊕ eⁱ ℤ[θ].
pub fn integral_algebra_element(rng: &mut Rng64, a: &Arc<CyclicAlgebra>, h: i64) -> AlgebraElement {
    let coords = (0..a.degree()).map(|_| integral_element(rng, a.l(), h)).collect();
    a.element(coords).expect("coordinates in L")
}

/// Random element of `SL₂(ℚ)` with small entries: a product of elementary matrices.
pub fn sl2_rational(rng: &mut Rng64, steps: usize, h: i64, den: i64) -> [[BigRational; 2]; 2] {
    let one = BigRational::from_integer(1.into());
    let zero = BigRational::from_integer(0.into());
    let mut m = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    for _ in 0..steps {
        let t = rational(rng, h, den);
        let e = if rng.gen_bool(0.5) {
            [[one.clone(), t], [zero.clone(), one.clone()]]
        } else {
            [[one.clone(), zero.clone()], [t, one.clone()]]
        };
        m = mat2_mul(&m, &e);
    }
    m
}

pub fn mat2_mul(a: &[[BigRational; 2]; 2], b: &[[BigRational; 2]; 2]) -> [[BigRational; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Random unimodular element of `SL₂(ℤ)` as a product of elementary matrices.
pub fn sl2_integer(rng: &mut Rng64, steps: usize, h: i64) -> [[i64; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..steps {
        let t = rng.gen_range(-h..=h);
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        m = if rng.gen_bool(0.5) { [[a, a * t + b], [c, c * t + d]] } else { [[a + b * t, b], [c + d * t, d]] };
    }
    m
}

/// Random element of `SL₂(F)` as a product of elementary matrices and a diagonal [[u, 0], [0, u⁻¹]].
pub fn sl2_field(rng: &mut Rng64, f: &Arc<NumberField>, steps: usize, h: i64, den: i64) -> [[FieldElement; 2]; 2] {
    let one = FieldElement::one(f);
    let zero = FieldElement::zero(f);
    let u = nonzero_field_element(rng, f, h, den);
    let mut m = [[u.clone(), zero.clone()], [zero.clone(), u.inv().expect("nonzero")]];
    for _ in 0..steps {
        let t = field_element(rng, f, h, den);
        let e = if rng.gen_bool(0.5) {
            [[one.clone(), t], [zero.clone(), one.clone()]]
        } else {
            [[one.clone(), zero.clone()], [t, one.clone()]]
        };
        let p = |i: usize, j: usize| &(&m[i][0] * &e[0][j]) + &(&m[i][1] * &e[1][j]);
        m = [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]];
    }
    m
}
