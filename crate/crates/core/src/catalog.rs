//! Standard fields and towers used throughout: quadratic fields, the seventh
//! cyclotomic tower and real quadratic splitting fields of quaternion algebras.

use std::sync::Arc;

use crate::exactfield::{Automorphism, Extension, FieldElement, FieldError, NumberField, TowerMap};

/// A quadratic field with its conjugation and the maximal order ℤ[θ].
#[derive(Clone, Debug)]
pub struct QuadraticField {
    pub field: Arc<NumberField>,
    /// Fundamental discriminant.
    pub disc: i64,
    pub conj: Automorphism,
    pub over_q: Extension,
}

/// True for fundamental discriminants.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: i64| {
        let n = n.abs();
        (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

impl QuadraticField {
    /// ℚ(√D) with generator (1+√D)/2 when D ≡ 1 (mod 4) and √(D/4) otherwise,
    /// so the power basis is an integral basis.
    pub fn new(disc: i64) -> Result<Self, FieldError> {
        if !is_fundamental_discriminant(disc) {
            return Err(FieldError::BadExtension(format!("{disc} is not a fundamental discriminant")));
        }
        let label = format!("Q(sqrt({disc}))");
        let field = if disc.rem_euclid(4) == 1 {
            NumberField::from_ints(&label, &[(1 - disc) / 4, -1, 1])?
        } else {
            NumberField::from_ints(&label, &[-disc / 4, 0, 1])?
        };
        Self::from_field(field, disc)
    }

    /// Wraps a quadratic field whose power basis is already integral.
    pub fn from_field(field: Arc<NumberField>, disc: i64) -> Result<Self, FieldError> {
        let trace = -field.minpoly()[1].clone();
        let theta = FieldElement::generator(&field);
        let conj = Automorphism::new(&field, &FieldElement::from_rational(&field, trace) - &theta)?;
        let over_q = Extension::new(TowerMap::from_rationals(&field), vec![Automorphism::identity(&field), conj.clone()])?;
        Ok(QuadraticField { field, disc, conj, over_q })
    }

    /// √D as an element of the field.
    pub fn sqrt_disc(&self) -> FieldElement {
        let theta = FieldElement::generator(&self.field);
        &theta - &self.conj.apply(&theta)
    }

    /// The element √−η with K = ℚ(√−η) and η squarefree, the imaginary unit of the plane.
    pub fn sqrt_minus_eta(&self) -> FieldElement {
        let s = self.sqrt_disc();
        if self.disc.rem_euclid(4) == 1 {
            s
        } else {
            s.scale(&crate::linalg::qf(1, 2))
        }
    }

    /// η with K = ℚ(√−η).
    pub fn eta(&self) -> i64 {
        if self.disc.rem_euclid(4) == 1 {
            -self.disc
        } else {
            -self.disc / 4
        }
    }

    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        self.conj.apply(x)
    }

    pub fn norm(&self, x: &FieldElement) -> num_rational::BigRational {
        self.over_q.norm(x).expect("norm descends").coords()[0].clone()
    }

    pub fn trace(&self, x: &FieldElement) -> num_rational::BigRational {
        self.over_q.trace(x).expect("trace descends").coords()[0].clone()
    }

    /// Element a + bθ.
    pub fn elt(&self, a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(&self.field, &[a, b])
    }
}

/// The tower ℚ ⊂ ℓ = ℚ(ζ+ζ⁻¹), ℚ ⊂ K = ℚ(√−7) inside L = ℚ(ζ₇).
#[derive(Clone, Debug)]
pub struct CyclotomicSeven {
    pub l: Arc<NumberField>,
    /// K with generator γ, γ² + γ + 2 = 0.
    pub k: QuadraticField,
    /// ℓ with generator η₁, η₁³ + η₁² − 2η₁ − 1 = 0.
    pub ell: Arc<NumberField>,
    /// γ ↦ ζ + ζ² + ζ⁴.
    pub k_in_l: TowerMap,
    /// η₁ ↦ ζ + ζ⁶.
    pub ell_in_l: TowerMap,
    /// ζ ↦ ζ², generator of Gal(L/K).
    pub sigma: Automorphism,
    /// ζ ↦ ζ⁶, complex conjugation.
    pub rho: Automorphism,
    /// η₁ ↦ η₁² − 2, the restriction of σ to ℓ.
    pub sigma_ell: Automorphism,
    pub l_over_k: Extension,
    pub l_over_ell: Extension,
    pub ell_over_q: Extension,
    pub l_over_q: Extension,
}

/// ζ^j as an element of L.
pub fn zeta_pow(l: &Arc<NumberField>, j: i64) -> FieldElement {
    FieldElement::generator(l).pow(j.rem_euclid(7))
}

impl CyclotomicSeven {
    pub fn new() -> Self {
        let l = NumberField::from_ints("Q(zeta7)", &[1, 1, 1, 1, 1, 1, 1]).expect("Phi_7 is irreducible");
        let kf = NumberField::from_ints("Q(sqrt(-7))", &[2, 1, 1]).expect("x^2+x+2 is irreducible");
        let k = QuadraticField::from_field(kf, -7).expect("quadratic field");
        let ell = NumberField::from_ints("Q(zeta7)+", &[-1, -2, 1, 1]).expect("irreducible cubic");
        let z = |j| zeta_pow(&l, j);
        let gamma_img = &(&z(1) + &z(2)) + &z(4);
        let k_in_l = TowerMap::new(&k.field, &l, gamma_img).expect("gamma is a root");
        let ell_in_l = TowerMap::new(&ell, &l, &z(1) + &z(6)).expect("eta1 is a root");
        let sigma = Automorphism::new(&l, z(2)).expect("zeta^2 is a conjugate");
        let rho = Automorphism::new(&l, z(6)).expect("zeta^6 is a conjugate");
        let e1 = FieldElement::generator(&ell);
        let sigma_ell = Automorphism::new(&ell, &(&e1 * &e1) - &FieldElement::from_int(&ell, 2)).expect("conjugate");
        let l_over_k = Extension::cyclic(k_in_l.clone(), &sigma).expect("L|K cyclic of degree 3");
        let l_over_ell =
            Extension::new(ell_in_l.clone(), vec![Automorphism::identity(&l), rho.clone()]).expect("L|ell quadratic");
        let ell_over_q = Extension::cyclic(TowerMap::from_rationals(&ell), &sigma_ell).expect("ell|Q cyclic");
        let gen3 = Automorphism::new(&l, z(3)).expect("zeta^3 generates Gal(L/Q)");
        let l_over_q = Extension::cyclic(TowerMap::from_rationals(&l), &gen3).expect("L|Q cyclic");
        CyclotomicSeven { l, k, ell, k_in_l, ell_in_l, sigma, rho, sigma_ell, l_over_k, l_over_ell, ell_over_q, l_over_q }
    }

    pub fn zeta(&self, j: i64) -> FieldElement {
        zeta_pow(&self.l, j)
    }

    /// γ as an element of K.
    pub fn gamma(&self) -> FieldElement {
        FieldElement::generator(&self.k.field)
    }

    /// η_j = ζ^j + ζ^{−j} in L.
    pub fn eta(&self, j: i64) -> FieldElement {
        &self.zeta(j) + &self.zeta(-j)
    }
}

impl Default for CyclotomicSeven {
    fn default() -> Self {
        Self::new()
    }
}

/// ℓ = ℚ(√a) with its nontrivial automorphism, for quaternion algebras (a, b).
#[derive(Clone, Debug)]
pub struct RealQuadratic {
    pub field: Arc<NumberField>,
    pub a: i64,
    pub sigma: Automorphism,
}

impl RealQuadratic {
    /// Generator c with c² = a.
    pub fn new(a: i64) -> Result<Self, FieldError> {
        let field = NumberField::from_ints(&format!("Q(sqrt({a}))"), &[-a, 0, 1])?;
        let c = FieldElement::generator(&field);
        let sigma = Automorphism::new(&field, -&c)?;
        Ok(RealQuadratic { field, a, sigma })
    }

    pub fn sqrt_a(&self) -> FieldElement {
        FieldElement::generator(&self.field)
    }
}
