//! The hyperbolic plane (D², h) with h(x, y) = x₁J(y₂) + x₂J(y₁).
//!
//! Vectors are rows and matrices act on the right, so g is unitary when
//! g H g* = H with H = [[0, 1], [1, 0]] and g* the J-conjugate transpose.
//! The form is left-linear in its first argument.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cycalg::{AlgebraElement, AlgebraError, CyclicAlgebra, InvolutionKind};
use crate::exactfield::{FieldElement, TowerMap};
use crate::linalg::{self, Matrix};
use crate::sampling::{self, Rng64};
use crate::zlattice::Lattice;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlaneError {
    #[error("algebra {0} has no involution")]
    NoInvolution(String),
    #[error("unsupported plane: {0}")]
    Unsupported(String),
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("zero vector")]
    ZeroVector,
    #[error("Bezout witness fails: x1*a + x2*b = {0}")]
    NotBezout(String),
    #[error("completion leaves the order (order not closed under the involution)")]
    LeavesOrder,
    #[error("matrix is not in SL2: {0}")]
    NotSl2(String),
    #[error("entry {0} does not lie in the required subfield")]
    NotInSubfield(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The three families of planes distinguished by the degree and the involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneCase {
    /// d = 1: D = K imaginary quadratic.
    D1,
    /// d = 2: quaternion algebra over k with its canonical involution.
    D2,
    /// d ≥ 3: involution of the second kind.
    D3,
}

#[derive(Clone, Debug)]
pub struct HyperbolicPlane {
    alg: Arc<CyclicAlgebra>,
    case: PlaneCase,
}

/// Row vector (x₁, x₂) ∈ D².
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneVector {
    pub x1: AlgebraElement,
    pub x2: AlgebraElement,
}

/// Matrix [[a, b], [c, d]] over D acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupMatrix {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
    pub c: AlgebraElement,
    pub d: AlgebraElement,
}

impl PlaneVector {
    pub fn new(x1: AlgebraElement, x2: AlgebraElement) -> Self {
        PlaneVector { x1, x2 }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    /// λ·x, scaling from the left.
    pub fn left_scale(&self, l: &AlgebraElement) -> Self {
        PlaneVector { x1: l * &self.x1, x2: l * &self.x2 }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PlaneVector { x1: &self.x1 - &o.x1, x2: &self.x2 - &o.x2 }
    }

    /// x·g.
    pub fn times(&self, g: &GroupMatrix) -> Self {
        PlaneVector { x1: &(&self.x1 * &g.a) + &(&self.x2 * &g.c), x2: &(&self.x1 * &g.b) + &(&self.x2 * &g.d) }
    }
}

impl GroupMatrix {
    pub fn new(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement, d: AlgebraElement) -> Self {
        GroupMatrix { a, b, c, d }
    }

    pub fn identity(alg: &Arc<CyclicAlgebra>) -> Self {
        GroupMatrix::new(alg.one(), alg.zero(), alg.zero(), alg.one())
    }

    /// [[0, 1], [1, 0]], the matrix of h.
    pub fn form_matrix(alg: &Arc<CyclicAlgebra>) -> Self {
        GroupMatrix::new(alg.zero(), alg.one(), alg.one(), alg.zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement, w: &AlgebraElement| &(x * y) + &(z * w);
        GroupMatrix {
            a: m(&self.a, &o.a, &self.b, &o.c),
            b: m(&self.a, &o.b, &self.b, &o.d),
            c: m(&self.c, &o.a, &self.d, &o.c),
            d: m(&self.c, &o.b, &self.d, &o.d),
        }
    }

    /// J-conjugate transpose.
    pub fn star(&self) -> Self {
        GroupMatrix { a: self.a.bar(), b: self.c.bar(), c: self.b.bar(), d: self.d.bar() }
    }

    pub fn entries(&self) -> [&AlgebraElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn rows(&self) -> [PlaneVector; 2] {
        [PlaneVector::new(self.a.clone(), self.b.clone()), PlaneVector::new(self.c.clone(), self.d.clone())]
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// The 2d × 2d block matrix over L.
    pub fn block_matrix(&self) -> Matrix<FieldElement> {
        let [ma, mb, mc, md] = [&self.a, &self.b, &self.c, &self.d].map(|x| x.matrix_rep());
        let mut out = Vec::new();
        for (l, r) in [(&ma, &mb), (&mc, &md)] {
            for i in 0..l.len() {
                out.push(l[i].iter().chain(&r[i]).cloned().collect());
            }
        }
        out
    }

    /// Inverse of a unitary matrix, H g* H.
    pub fn unitary_inverse(&self) -> Self {
        GroupMatrix { a: self.d.bar(), b: self.b.bar(), c: self.c.bar(), d: self.a.bar() }
    }
}

/// Which stabilizer to test in [`HyperbolicPlane::in_stabilizer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    /// Stabilizer of the isotropic line through (0, 1).
    Parabolic,
    /// Stabilizer of the anisotropic pair (1, ±1): matrices [[a, c], [c, a]].
    Compact,
}

/// Result of [`HyperbolicPlane::gamma_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// Unitary with entries in the integers of L.
    GammaOL,
    /// Unitary with entries in the order, not all in L.
    GammaDelta,
    /// Not unitary, or some entry outside the order.
    Neither,
}

/// Group-theoretic labels of the unitary group of the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TitsData {
    pub absolute_type: String,
    pub index: String,
    pub k_rank: usize,
    pub real_form: String,
}

/// A ℤ-order of D given by a basis; `natural` is ⊕ eⁱ ℤ[θ].
#[derive(Clone, Debug)]
pub struct Order {
    pub basis: Vec<AlgebraElement>,
    lattice: Lattice,
}

impl Order {
    pub fn new(basis: Vec<AlgebraElement>) -> Self {
        let gens: Vec<Vec<BigRational>> = basis.iter().map(|b| b.rational_coords()).collect();
        Order { lattice: Lattice::from_generators(&gens), basis }
    }

    pub fn natural(alg: &Arc<CyclicAlgebra>) -> Self {
        Order::new(alg.rational_basis())
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.lattice.contains(&x.rational_coords())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Closed under multiplication and containing 1.
    pub fn is_ring(&self) -> bool {
        let Some(first) = self.basis.first() else { return false };
        self.contains(&first.algebra().one())
            && self.basis.iter().all(|x| self.basis.iter().all(|y| self.contains(&(x * y))))
    }

    /// [self : sub] when `sub` has full rank inside `self`.
    pub fn index_of(&self, sub: &Order) -> Option<num_bigint::BigInt> {
        self.lattice.index_of(&sub.lattice)
    }
}

impl HyperbolicPlane {
    pub fn new(alg: Arc<CyclicAlgebra>) -> Result<Self, PlaneError> {
        let inv = alg.involution().ok_or_else(|| PlaneError::NoInvolution(alg.label().into()))?;
        let case = match (alg.degree(), inv.kind) {
            (1, InvolutionKind::Second) => PlaneCase::D1,
            (2, InvolutionKind::First) => PlaneCase::D2,
            (d, InvolutionKind::Second) if d >= 3 => PlaneCase::D3,
            (d, k) => return Err(PlaneError::Unsupported(format!("degree {d} with involution of kind {k:?}"))),
        };
        Ok(HyperbolicPlane { alg, case })
    }

    pub fn algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.alg
    }

    pub fn case(&self) -> PlaneCase {
        self.case
    }

    pub fn vector(&self, x1: AlgebraElement, x2: AlgebraElement) -> PlaneVector {
        PlaneVector::new(x1, x2)
    }

    /// (x₁, x₂) with both coordinates in L.
    pub fn vector_l(&self, x1: &FieldElement, x2: &FieldElement) -> PlaneVector {
        PlaneVector::new(self.alg.from_l(x1), self.alg.from_l(x2))
    }

    pub fn herm_form(&self, x: &PlaneVector, y: &PlaneVector) -> AlgebraElement {
        &(&x.x1 * &y.x2.bar()) + &(&x.x2 * &y.x1.bar())
    }

    pub fn is_isotropic(&self, x: &PlaneVector) -> bool {
        self.herm_form(x, x).is_zero()
    }

    /// g H g* − H, entrywise.
    pub fn unitarity_defect(&self, g: &GroupMatrix) -> GroupMatrix {
        let h = GroupMatrix::form_matrix(&self.alg);
        let p = g.mul(&h).mul(&g.star());
        GroupMatrix { a: &p.a - &h.a, b: &p.b - &h.b, c: &p.c - &h.c, d: &p.d - &h.d }
    }

    pub fn is_unitary(&self, g: &GroupMatrix) -> bool {
        self.unitarity_defect(g).entries().iter().all(|x| x.is_zero())
    }

    /// The entry relations a d̄ + b c̄ = 1, a b̄ + b ā = 0, c d̄ + d c̄ = 0.
    pub fn unitary_relations(&self, g: &GroupMatrix) -> [bool; 3] {
        let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
        [
            (&(a * &d.bar()) + &(b * &c.bar())).is_one(),
            (&(a * &b.bar()) + &(b * &a.bar())).is_zero(),
            (&(c * &d.bar()) + &(d * &c.bar())).is_zero(),
        ]
    }

    /// Determinant of the block matrix over L, descended to K.
    pub fn block_det(&self, g: &GroupMatrix) -> Result<FieldElement, PlaneError> {
        let det = linalg::det(&g.block_matrix());
        Ok(self.alg.k_map().descend(&det).ok_or(AlgebraError::DescentFailed)?)
    }

    pub fn is_special(&self, g: &GroupMatrix) -> Result<bool, PlaneError> {
        Ok(self.block_det(g)?.is_one())
    }

    /// Determinant through reduced norms of a Schur complement, pivoting on a or c.
    pub fn dieudonne_det(&self, g: &GroupMatrix) -> Result<FieldElement, PlaneError> {
        let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
        if !a.is_zero() {
            let s = d - &(&(c * &a.inverse()?) * b);
            return Ok(&a.reduced_norm()? * &s.reduced_norm()?);
        }
        let zero = FieldElement::zero(self.alg.k_map().source());
        if c.is_zero() {
            return Ok(zero);
        }
        // rows swapped: sign (−1)^d
        let s = b - &(&(a * &c.inverse()?) * d);
        let v = &c.reduced_norm()? * &s.reduced_norm()?;
        Ok(if self.alg.degree() % 2 == 1 { -v } else { v })
    }

    /// √−η ∈ K (d = 1, d ≥ 3) or the element ec (d = 2), an element x with
    /// J(x) = −x and x² a negative rational.
    pub fn imaginary_unit(&self) -> AlgebraElement {
        match self.case {
            PlaneCase::D2 => &self.alg.e() * &self.alg.from_l(&FieldElement::generator(self.alg.l())),
            _ => {
                let kappa = self.alg.k_map().image().clone();
                let rho = &self.alg.involution().expect("checked at construction").rho;
                let s = &kappa - &rho.apply(&kappa);
                let sq = (&s * &s).as_rational().expect("square of a purely imaginary element is rational");
                let m = -sq;
                let f = largest_square_divisor(&m);
                self.alg.from_l(&s.scale(&f.recip()))
            }
        }
    }

    /// The negative rational (imaginary_unit)².
    pub fn imaginary_square(&self) -> BigRational {
        let u = self.imaginary_unit();
        (&u * &u).coords()[0].as_rational().expect("square is rational")
    }

    /// SU(K², h) → SL₂(k) for d = 1, inverse of [`Self::sl2_to_su`].
    pub fn su_to_sl2(&self, g: &GroupMatrix) -> Result<[[BigRational; 2]; 2], PlaneError> {
        self.require(PlaneCase::D1)?;
        let s = self.imaginary_unit();
        let half = linalg::qf(1, 2);
        let two = linalg::q(2);
        let rat = |x: AlgebraElement| -> Result<BigRational, PlaneError> {
            x.coords()[0].as_rational().ok_or_else(|| PlaneError::NotInSubfield(x.to_string()))
        };
        let alpha = rat(g.d.clone())?;
        let delta = rat(g.a.clone())?;
        let gamma = rat((&g.b * &s).scale(&half))?;
        let beta = rat((&g.c * &s.inverse()?).scale(&two))?;
        Ok([[alpha, beta], [gamma, delta]])
    }

    /// [[α, β], [γ, δ]] ↦ [[δ, 2γ/s], [βs/2, α]] with s = √−η; a conjugation, hence a homomorphism.
    pub fn sl2_to_su(&self, m: &[[BigRational; 2]; 2]) -> Result<GroupMatrix, PlaneError> {
        self.require(PlaneCase::D1)?;
        check_det_one(m)?;
        let s = self.imaginary_unit();
        let r = |x: &BigRational| self.alg.from_rational(x.clone());
        Ok(GroupMatrix::new(
            r(&m[1][1]),
            (&r(&m[1][0]) * &s.inverse()?).scale(&linalg::q(2)),
            (&r(&m[0][1]) * &s).scale(&linalg::qf(1, 2)),
            r(&m[0][0]),
        ))
    }

    /// Embeds SL₂ over the real subfield: [[α, β], [γ, δ]] ↦ [[α, 2β/s], [γs/2, δ]] where s is
    /// [`Self::imaginary_unit`]. Entries are given in a field mapped into L by `into_l`
    /// and must be fixed by J (rational for d ≤ 2).
    pub fn embed_subgroup(&self, m: &[[FieldElement; 2]; 2], into_l: &TowerMap) -> Result<GroupMatrix, PlaneError> {
        let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
        if !det.is_one() {
            return Err(PlaneError::NotSl2(det.to_string()));
        }
        let lift = |x: &FieldElement| -> Result<AlgebraElement, PlaneError> {
            let y = self.alg.from_l(&into_l.apply(x));
            let ok = match self.case {
                PlaneCase::D3 => y.bar() == y,
                _ => y.coords()[0].as_rational().is_some(),
            };
            if ok {
                Ok(y)
            } else {
                Err(PlaneError::NotInSubfield(x.to_string()))
            }
        };
        let [a, b, c, d] = [&m[0][0], &m[0][1], &m[1][0], &m[1][1]].map(lift);
        let s = self.imaginary_unit();
        let s_inv = s.inverse()?;
        Ok(GroupMatrix::new(
            a?,
            (&b? * &s_inv).scale(&linalg::q(2)),
            (&c? * &s).scale(&linalg::qf(1, 2)),
            d?,
        ))
    }

    pub fn in_stabilizer(&self, g: &GroupMatrix, which: Stabilizer) -> bool {
        if !self.is_unitary(g) {
            return false;
        }
        match which {
            Stabilizer::Parabolic => g.c.is_zero(),
            Stabilizer::Compact => g.a == g.d && g.b == g.c,
        }
    }

    /// k-dimension of the unipotent radical {[[1, b], [0, 1]] : b + J(b) = 0}.
    pub fn unipotent_dimension(&self) -> Result<usize, PlaneError> {
        Ok(self.alg.skew_dimension()?)
    }

    /// A unitary matrix whose second row is the isotropic vector ξ.
    pub fn complete_isotropic(&self, xi: &PlaneVector) -> Result<GroupMatrix, PlaneError> {
        if xi.is_zero() {
            return Err(PlaneError::ZeroVector);
        }
        if !self.is_isotropic(xi) {
            return Err(PlaneError::NotIsotropic);
        }
        let top = if !xi.x1.is_zero() {
            PlaneVector::new(self.alg.zero(), xi.x1.bar().inverse()?)
        } else {
            PlaneVector::new(xi.x2.bar().inverse()?, self.alg.zero())
        };
        Ok(self.fix_completion(top, xi))
    }

    /// Given h(ξ′, ξ) = 1, replaces ξ′ by ξ′ − δ̄ξ with δ = ξ′₁J(ξ′₂) so the result is isotropic.
    fn fix_completion(&self, top: PlaneVector, xi: &PlaneVector) -> GroupMatrix {
        let delta = &top.x1 * &top.x2.bar();
        let top = top.sub(&xi.left_scale(&delta.bar()));
        GroupMatrix::new(top.x1, top.x2, xi.x1.clone(), xi.x2.clone())
    }

    /// Completion inside M₂(order) from a Bezout witness ξ₁x + ξ₂y = 1.
    pub fn integral_complete(
        &self,
        xi: &PlaneVector,
        bezout: (&AlgebraElement, &AlgebraElement),
        order: &Order,
    ) -> Result<GroupMatrix, PlaneError> {
        if !self.is_isotropic(xi) {
            return Err(PlaneError::NotIsotropic);
        }
        let (x, y) = bezout;
        let s = &(&xi.x1 * x) + &(&xi.x2 * y);
        if !s.is_one() {
            return Err(PlaneError::NotBezout(s.to_string()));
        }
        let g = self.fix_completion(PlaneVector::new(y.bar(), x.bar()), xi);
        if !g.entries().iter().all(|z| order.contains(z)) {
            return Err(PlaneError::LeavesOrder);
        }
        Ok(g)
    }

    pub fn gamma_membership(&self, g: &GroupMatrix, order: &Order) -> Membership {
        if !self.is_unitary(g) || !g.entries().iter().all(|z| order.contains(z)) {
            return Membership::Neither;
        }
        let in_ol = g.entries().iter().all(|z| z.in_l() && z.coords()[0].has_integral_coords());
        if in_ol {
            Membership::GammaOL
        } else {
            Membership::GammaDelta
        }
    }

    pub fn tits_data(&self) -> TitsData {
        let d = self.alg.degree();
        match self.case {
            PlaneCase::D1 => TitsData {
                absolute_type: "A1".into(),
                index: "quasi-split SU(1,1)".into(),
                k_rank: 1,
                real_form: "SU(1,1)".into(),
            },
            PlaneCase::D2 => TitsData {
                absolute_type: "C2".into(),
                index: "C2 with one distinguished orbit".into(),
                k_rank: 1,
                real_form: "Sp(4,R)".into(),
            },
            PlaneCase::D3 => TitsData {
                absolute_type: format!("A{}", 2 * d - 1),
                index: format!("outer form 2A{} with one distinguished orbit", 2 * d - 1),
                k_rank: 1,
                real_form: format!("SU({d},{d})"),
            },
        }
    }

    fn require(&self, c: PlaneCase) -> Result<(), PlaneError> {
        if self.case == c {
            Ok(())
        } else {
            Err(PlaneError::Unsupported(format!("needs case {c:?}, plane is {:?}", self.case)))
        }
    }

    // sampling

    /// Random b with b + J(b) = 0.
    pub fn random_skew(&self, rng: &mut Rng64, h: i64, den: i64) -> AlgebraElement {
        let x = sampling::algebra_element(rng, &self.alg, h, den);
        &x - &x.bar()
    }

    pub fn upper_unipotent(&self, b: &AlgebraElement) -> GroupMatrix {
        GroupMatrix::new(self.alg.one(), b.clone(), self.alg.zero(), self.alg.one())
    }

    pub fn lower_unipotent(&self, c: &AlgebraElement) -> GroupMatrix {
        GroupMatrix::new(self.alg.one(), self.alg.zero(), c.clone(), self.alg.one())
    }

    /// diag(a, J(a)⁻¹).
    pub fn levi(&self, a: &AlgebraElement) -> Result<GroupMatrix, PlaneError> {
        Ok(GroupMatrix::new(a.clone(), self.alg.zero(), self.alg.zero(), a.bar().inverse()?))
    }

    /// Cayley transform (1 − x)(1 + x)⁻¹ of a skew element: u J(u) = 1.
    pub fn cayley(&self, x: &AlgebraElement) -> Result<AlgebraElement, PlaneError> {
        let one = self.alg.one();
        Ok(&(&one - x) * &(&one + x).inverse()?)
    }

    /// Element of the compact stabilizer built from two unitary scalars u, v.
    pub fn compact_element(&self, u: &AlgebraElement, v: &AlgebraElement) -> GroupMatrix {
        let half = linalg::qf(1, 2);
        let a = (u + v).scale(&half);
        let c = (u - v).scale(&half);
        GroupMatrix::new(a.clone(), c.clone(), c, a)
    }

    /// Random special unitary matrix as a product of unipotents.
    pub fn random_special_unitary(&self, rng: &mut Rng64, steps: usize) -> GroupMatrix {
        let mut g = GroupMatrix::identity(&self.alg);
        for _ in 0..steps {
            let s = self.random_skew(rng, 2, 2);
            let f = if rng.gen_bool(0.5) { self.upper_unipotent(&s) } else { self.lower_unipotent(&s) };
            g = g.mul(&f);
        }
        g
    }

    /// Random unitary matrix; mixes unipotents, Levi elements and the swap.
    pub fn random_unitary(&self, rng: &mut Rng64, steps: usize) -> GroupMatrix {
        let mut g = GroupMatrix::identity(&self.alg);
        for _ in 0..steps {
            let f = match rng.gen_range(0..4) {
                0 => self.upper_unipotent(&self.random_skew(rng, 2, 2)),
                1 => self.lower_unipotent(&self.random_skew(rng, 2, 2)),
                2 => {
                    let a = sampling::nonzero_algebra_element(rng, &self.alg, 2, 1);
                    self.levi(&a).expect("division algebra")
                }
                _ => GroupMatrix::form_matrix(&self.alg),
            };
            g = g.mul(&f);
        }
        g
    }

    /// Random nonzero isotropic vector (λb, λ)·g with b skew.
    pub fn random_isotropic(&self, rng: &mut Rng64) -> PlaneVector {
        let b = self.random_skew(rng, 3, 2);
        let l = sampling::nonzero_algebra_element(rng, &self.alg, 3, 2);
        let g = self.random_unitary(rng, 2);
        PlaneVector::new(&l * &b, l).times(&g)
    }
}

fn check_det_one(m: &[[BigRational; 2]; 2]) -> Result<(), PlaneError> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_one() {
        Ok(())
    } else {
        Err(PlaneError::NotSl2(crate::exactfield::poly::rational_to_string(&det)))
    }
}

/// Largest f > 0 with m / f² a squarefree integer, for a positive integer m.
fn largest_square_divisor(m: &BigRational) -> BigRational {
    let n = m.to_integer();
    debug_assert!(m.is_integer() && n.is_positive());
    let mut rest = n;
    let mut f = num_bigint::BigInt::one();
    let mut p = num_bigint::BigInt::from(2);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            f *= &p;
        }
        p += 1;
    }
    BigRational::from_integer(f)
}

/// Membership of [[a, b], [c, d]] ∈ SL₂(ℓ) in SL(O ⊕ 𝔠⁻¹): a, d integral, b ∈ 𝔠⁻¹, c ∈ 𝔠.
/// The ideal 𝔠 is given by generators; the power basis of ℓ must be an integral basis.
pub fn congruence_membership(m: &[[FieldElement; 2]; 2], ideal_gens: &[FieldElement]) -> bool {
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    if !det.is_one() || ideal_gens.is_empty() {
        return false;
    }
    let f = m[0][0].field().clone();
    let theta = FieldElement::generator(&f);
    let gens: Vec<Vec<BigRational>> = ideal_gens
        .iter()
        .flat_map(|g| (0..f.degree() as i64).map(|j| (g * &theta.pow(j)).coords()).collect::<Vec<_>>())
        .collect();
    let ideal = Lattice::from_generators(&gens);
    m[0][0].has_integral_coords()
        && m[1][1].has_integral_coords()
        && ideal.contains(&m[1][0].coords())
        && ideal_gens.iter().all(|g| (&m[0][1] * g).has_integral_coords())
}
