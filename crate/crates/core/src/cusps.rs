//! Binary quadratic forms, ideal classes of quadratic fields and cusps of the
//! hyperbolic plane.
//!
//! Ideals of ℤ[θ] map to forms N(xα + yβ)/N(𝔞) on an oriented basis; proper
//! equivalence of forms matches the narrow ideal class group (the class group
//! for imaginary fields). Cusps of the d = 1 plane are compared through the
//! ideal a_ξ = ξ₁O + ξ₂O and, for the special unitary group, the determinant
//! of an integral completion.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::catalog::QuadraticField;
use crate::cycalg::AlgebraElement;
use crate::exactfield::FieldElement;
use crate::hermplane::{GroupMatrix, HyperbolicPlane, Order, PlaneCase, PlaneError, PlaneVector};
use crate::zlattice::{self, IMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CuspError {
    #[error("{0} is not a discriminant (must be a nonsquare integer ≡ 0, 1 mod 4)")]
    BadDiscriminant(i64),
    #[error("|disc| = {0} exceeds the supported bound 10^6")]
    TooLarge(i64),
    #[error("coordinates must lie in the maximal order")]
    NotIntegral,
    #[error("cusp comparison needs a plane over an imaginary quadratic field")]
    Unsupported,
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// The form ax² + bxy + cy².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c) == 1
    }

    /// The form of norm 1 on the standard basis of ℤ[θ].
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Form::new(1, b, (b * b - disc) / 4)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

/// Class of a form under SL₂(ℤ), named by a canonical representative: the reduced
/// form for negative discriminants, the least reduced form of its cycle otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FormClass {
    pub disc: i64,
    pub representative: Form,
}

impl FormClass {
    pub fn is_principal(&self) -> bool {
        *self == form_class(Form::principal(self.disc)).expect("principal form is valid")
    }
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = (n as f64).sqrt().round() as i64;
        (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
    }
}

fn check_disc(disc: i64) -> Result<(), CuspError> {
    if disc.abs() > 1_000_000 {
        return Err(CuspError::TooLarge(disc));
    }
    if !matches!(disc.rem_euclid(4), 0 | 1) || is_square(disc) {
        return Err(CuspError::BadDiscriminant(disc));
    }
    Ok(())
}

/// x < √n for n > 0.
fn lt_sqrt(x: i64, n: i64) -> bool {
    x < 0 || x * x < n
}

/// x > √n for n > 0.
fn gt_sqrt(x: i64, n: i64) -> bool {
    x > 0 && x * x > n
}

/// Substitution (x, y) ↦ (px + qy, rx + sy), recorded as [[p, q], [r, s]].
type Sub = [[i64; 2]; 2];

fn compose(m: Sub, n: Sub) -> Sub {
    [
        [m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]],
        [m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]],
    ]
}

/// Reduces a positive definite form; returns the reduced form and the substitution.
pub fn reduce_definite(f: Form) -> (Form, Sub) {
    let mut f = f;
    let mut m: Sub = [[1, 0], [0, 1]];
    loop {
        // translate b into (−a, a]
        let k = (f.a - f.b).div_euclid(2 * f.a);
        if k != 0 {
            f = Form::new(f.a, f.b + 2 * f.a * k, f.eval(k, 1));
            m = compose(m, [[1, k], [0, 1]]);
        }
        if f.a > f.c || (f.a == f.c && f.b < 0) {
            f = Form::new(f.c, -f.b, f.a);
            m = compose(m, [[0, -1], [1, 0]]);
            continue;
        }
        return (f, m);
    }
}

/// One reduction step for indefinite forms, with its substitution.
fn rho(f: Form) -> (Form, Sub) {
    let d = f.disc();
    let c = f.c;
    let two_c = 2 * c.abs();
    let base = (-f.b).rem_euclid(two_c);
    // candidates b' ≡ −b (mod 2|c|)
    let pick = if gt_sqrt(c.abs(), d) {
        // −|c| < b' ≤ |c|
        if base > c.abs() {
            base - two_c
        } else {
            base
        }
    } else {
        // √D − 2|c| < b' < √D: the largest candidate below √D
        let mut b = base;
        while lt_sqrt(b + two_c, d) {
            b += two_c;
        }
        while !lt_sqrt(b, d) {
            b -= two_c;
        }
        b
    };
    let t = (pick + f.b) / (2 * c);
    let nf = Form::new(c, pick, (pick * pick - d) / (4 * c));
    (nf, [[0, -1], [1, t]])
}

fn is_reduced_indefinite(f: Form) -> bool {
    let d = f.disc();
    let a2 = 2 * f.a.abs();
    f.b > 0 && lt_sqrt(f.b, d) && gt_sqrt(a2 + f.b, d) && lt_sqrt(a2 - f.b, d)
}

/// Applies ρ until the form is reduced.
fn reduce_indefinite(f: Form) -> (Form, Sub) {
    let mut f = f;
    let mut m: Sub = [[1, 0], [0, 1]];
    let mut steps = 0;
    while !is_reduced_indefinite(f) {
        let (g, s) = rho(f);
        f = g;
        m = compose(m, s);
        steps += 1;
        assert!(steps < 10_000, "indefinite reduction did not terminate");
    }
    (f, m)
}

/// The ρ-cycle of a reduced indefinite form.
fn cycle(f: Form) -> Vec<Form> {
    let mut out = vec![f];
    let mut g = rho(f).0;
    while g != f {
        out.push(g);
        g = rho(g).0;
    }
    out
}

pub fn form_class(f: Form) -> Result<FormClass, CuspError> {
    let disc = f.disc();
    check_disc(disc)?;
    let representative = if disc < 0 {
        let f = if f.a < 0 { Form::new(-f.a, -f.b, -f.c) } else { f };
        reduce_definite(f).0
    } else {
        *cycle(reduce_indefinite(f).0).iter().min().expect("nonempty cycle")
    };
    Ok(FormClass { disc, representative })
}

/// Reduced primitive forms of discriminant `disc`.
pub fn reduced_forms(disc: i64) -> Result<Vec<Form>, CuspError> {
    check_disc(disc)?;
    let mut out = Vec::new();
    if disc < 0 {
        let amax = ((-disc) as f64 / 3.0).sqrt() as i64 + 1;
        for a in 1..=amax {
            for b in -a + 1..=a {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = Form::new(a, b, c);
                if c >= a && !(a == c && b < 0) && f.is_primitive() {
                    out.push(f);
                }
            }
        }
    } else {
        let mut b = 1;
        while lt_sqrt(b, disc) {
            if (b * b - disc) % 4 == 0 {
                let ac = (b * b - disc) / 4;
                let amax = ac.abs().min((disc as f64).sqrt() as i64 + 1);
                for a in 1..=amax {
                    if ac % a != 0 {
                        continue;
                    }
                    for s in [1, -1] {
                        let f = Form::new(s * a, b, ac / (s * a));
                        if is_reduced_indefinite(f) && f.is_primitive() {
                            out.push(f);
                        }
                    }
                }
            }
            b += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// Number of SL₂(ℤ)-classes of primitive forms of discriminant `disc`.
pub fn class_number(disc: i64) -> Result<usize, CuspError> {
    let forms = reduced_forms(disc)?;
    if disc < 0 {
        return Ok(forms.len());
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        count += 1;
        seen.extend(cycle(f));
    }
    Ok(count)
}

/// Fundamental discriminant of a quadratic field ℚ[x]/(x² + px + q) with integral p, q.
pub fn field_discriminant(minpoly: &[BigRational]) -> i64 {
    let p = minpoly[1].to_integer().to_i64().expect("small coefficient");
    let q = minpoly[0].to_integer().to_i64().expect("small coefficient");
    let mut m = p * p - 4 * q;
    let mut f = 2;
    while f * f <= m.abs() {
        while m % (f * f) == 0 {
            m /= f * f;
        }
        f += 1;
    }
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

/// An ideal of ℤ[θ] in a quadratic field, stored by a Hermite basis of coordinates.
#[derive(Clone, Debug)]
pub struct QuadIdeal {
    field: QuadraticField,
    basis: IMatrix,
}

impl PartialEq for QuadIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.basis == o.basis && self.field.disc == o.field.disc
    }
}

impl QuadIdeal {
    /// The ideal generated by integral elements.
    pub fn from_generators(field: &QuadraticField, gens: &[FieldElement]) -> Result<Self, CuspError> {
        if gens.iter().any(|g| !g.has_integral_coords()) {
            return Err(CuspError::NotIntegral);
        }
        let theta = FieldElement::generator(&field.field);
        let rows: IMatrix = gens
            .iter()
            .flat_map(|g| [g.clone(), g * &theta])
            .map(|x| x.coords().iter().map(|c| c.to_integer()).collect())
            .collect();
        let basis = zlattice::hnf_rows(&rows);
        if basis.len() != 2 {
            return Err(CuspError::NotIntegral);
        }
        Ok(QuadIdeal { field: field.clone(), basis })
    }

    pub fn unit(field: &QuadraticField) -> Self {
        Self::from_generators(field, &[FieldElement::one(&field.field)]).expect("unit ideal")
    }

    pub fn norm(&self) -> BigInt {
        zlattice::det_int(&self.basis).abs()
    }

    fn elt(&self, row: &[BigInt]) -> FieldElement {
        FieldElement::new(&self.field.field, row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .expect("length 2")
    }

    /// Basis (α, β) with (ᾱβ − αβ̄)/√D > 0.
    pub fn oriented_basis(&self) -> (FieldElement, FieldElement) {
        let alpha = self.elt(&self.basis[0]);
        let mut beta = self.elt(&self.basis[1]);
        let w = &self.field.conj(&alpha) * &beta;
        let t = (&w - &self.field.conj(&w)).try_div(&self.field.sqrt_disc()).expect("nonzero");
        if t.as_rational().expect("rational").is_negative() {
            beta = -beta;
        }
        (alpha, beta)
    }

    /// The form N(xα + yβ)/N(𝔞) on the oriented basis.
    pub fn form(&self) -> Form {
        let (al, be) = self.oriented_basis();
        let n = BigRational::from_integer(self.norm());
        let conv = |x: BigRational| (x / &n).to_integer().to_i64().expect("small form coefficient");
        Form::new(
            conv(self.field.norm(&al)),
            conv(self.field.trace(&(&al * &self.field.conj(&be)))),
            conv(self.field.norm(&be)),
        )
    }

    pub fn class(&self) -> Result<FormClass, CuspError> {
        form_class(self.form())
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let l = zlattice::Lattice { basis: self.basis.clone(), scale: BigInt::one() };
        l.contains(&x.coords())
    }

    /// A generator when the ideal is principal in the narrow sense (imaginary fields only).
    pub fn generator(&self) -> Option<FieldElement> {
        if self.field.disc > 0 {
            return None;
        }
        let (al, be) = self.oriented_basis();
        let (red, m) = reduce_definite(self.form());
        if red != Form::principal(self.field.disc) {
            return None;
        }
        let g = &al.scale(&BigRational::from_integer(m[0][0].into())) + &be.scale(&BigRational::from_integer(m[1][0].into()));
        debug_assert_eq!(BigRational::from_integer(self.norm()), self.field.norm(&g));
        Some(g)
    }
}

/// Which unitary group acts on cusps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspGroup {
    Unitary,
    Special,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CuspVerdict {
    /// η·g = λ·ξ with g in the integral group and λ ∈ K*.
    Equivalent { witness: GroupMatrix, scalar: AlgebraElement },
    /// a_ξ and a_η lie in different ideal classes.
    DifferentIdealClasses { xi: FormClass, eta: FormClass },
    /// Same ideal class, but integral completions have determinants in different
    /// classes modulo {u/ū : u a unit}, which no special matrix can change.
    DifferentDeterminants { xi: Vec<String>, eta: Vec<String> },
    /// Same nonprincipal ideal class; no witness construction is attempted.
    Undetermined { class: FormClass },
}

/// Cusp-related data of a d = 1 plane over an imaginary quadratic field K.
#[derive(Clone, Debug)]
pub struct CuspContext {
    plane: HyperbolicPlane,
    field: QuadraticField,
    order: Order,
    units: Vec<FieldElement>,
}

/// Normalized invariant data of a vector: the ideal class and, when principal,
/// the completion determinant class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CuspCertificate {
    pub ideal_class: FormClass,
    /// Smallest representative of det(M) · {u/ū} in coordinates, when defined.
    pub det_class: Option<Vec<String>>,
}

impl CuspContext {
    pub fn new(plane: &HyperbolicPlane) -> Result<Self, CuspError> {
        if plane.case() != PlaneCase::D1 {
            return Err(CuspError::Unsupported);
        }
        let alg = plane.algebra();
        let disc = field_discriminant(alg.l().minpoly());
        if disc > 0 {
            return Err(CuspError::Unsupported);
        }
        let field = QuadraticField::from_field(alg.l().clone(), disc).map_err(|_| CuspError::Unsupported)?;
        let units = (-2i64..=2)
            .flat_map(|x| (-2i64..=2).map(move |y| (x, y)))
            .map(|(x, y)| field.elt(x, y))
            .filter(|u| field.norm(u).is_one())
            .collect();
        Ok(CuspContext { plane: plane.clone(), order: Order::natural(alg), field, units })
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn plane(&self) -> &HyperbolicPlane {
        &self.plane
    }

    /// Roots of unity of K.
    pub fn units(&self) -> &[FieldElement] {
        &self.units
    }

    fn k(&self, x: &AlgebraElement) -> FieldElement {
        x.coords()[0].clone()
    }

    /// a_ξ = ξ₁O_K + ξ₂O_K.
    pub fn ideal(&self, xi: &PlaneVector) -> Result<QuadIdeal, CuspError> {
        QuadIdeal::from_generators(&self.field, &[self.k(&xi.x1), self.k(&xi.x2)])
    }

    /// x, y ∈ O_K with ξ₁x + ξ₂y = 1 for coprime integral ξ.
    pub fn bezout(&self, xi: &PlaneVector) -> Option<(AlgebraElement, AlgebraElement)> {
        let theta = FieldElement::generator(&self.field.field);
        let (a, b) = (self.k(&xi.x1), self.k(&xi.x2));
        let gens: IMatrix = [a.clone(), &a * &theta, b.clone(), &b * &theta]
            .iter()
            .map(|x| x.coords().iter().map(|c| c.to_integer()).collect())
            .collect();
        let c = zlattice::integer_combination(&gens, &[BigInt::one(), BigInt::zero()])?;
        let el = |u: &BigInt, v: &BigInt| {
            FieldElement::new(&self.field.field, vec![BigRational::from_integer(u.clone()), BigRational::from_integer(v.clone())])
                .expect("length 2")
        };
        let alg = self.plane.algebra();
        Some((alg.from_l(&el(&c[0], &c[1])), alg.from_l(&el(&c[2], &c[3]))))
    }

    fn check_vector(&self, xi: &PlaneVector) -> Result<(), CuspError> {
        if xi.is_zero() {
            return Err(PlaneError::ZeroVector.into());
        }
        if !self.plane.is_isotropic(xi) {
            return Err(PlaneError::NotIsotropic.into());
        }
        if !self.order.contains(&xi.x1) || !self.order.contains(&xi.x2) {
            return Err(CuspError::NotIntegral);
        }
        Ok(())
    }

    /// Divides ξ by a generator of a_ξ; returns the coprime vector, the generator and its completion.
    fn normalize(&self, xi: &PlaneVector) -> Result<Option<(PlaneVector, FieldElement, GroupMatrix)>, CuspError> {
        let Some(g) = self.ideal(xi)?.generator() else { return Ok(None) };
        let alg = self.plane.algebra();
        let gi = alg.from_l(&g.inv().expect("nonzero generator"));
        let v = xi.left_scale(&gi);
        let (x, y) = self.bezout(&v).expect("coprime after dividing by the generator");
        let m = self.plane.integral_complete(&v, (&x, &y), &self.order)?;
        Ok(Some((v, g, m)))
    }

    fn det_k(&self, m: &GroupMatrix) -> FieldElement {
        &(&self.k(&m.a) * &self.k(&m.d)) - &(&self.k(&m.b) * &self.k(&m.c))
    }

    /// Canonical representative of det·{u/ū}.
    fn det_class(&self, det: &FieldElement) -> Vec<String> {
        self.units
            .iter()
            .map(|u| det * &(u.try_div(&self.field.conj(u)).expect("unit")))
            .map(|x| x.to_strings())
            .min()
            .expect("units contain 1")
    }

    pub fn certificate(&self, xi: &PlaneVector) -> Result<CuspCertificate, CuspError> {
        self.check_vector(xi)?;
        let ideal_class = self.ideal(xi)?.class()?;
        let det_class = self.normalize(xi)?.map(|(_, _, m)| self.det_class(&self.det_k(&m)));
        Ok(CuspCertificate { ideal_class, det_class })
    }

    pub fn cusp_equivalent(&self, xi: &PlaneVector, eta: &PlaneVector, group: CuspGroup) -> Result<CuspVerdict, CuspError> {
        self.check_vector(xi)?;
        self.check_vector(eta)?;
        let cx = self.ideal(xi)?.class()?;
        let ce = self.ideal(eta)?.class()?;
        if cx != ce {
            return Ok(CuspVerdict::DifferentIdealClasses { xi: cx, eta: ce });
        }
        let (Some((vx, gx, mx)), Some((ve, ge, me))) = (self.normalize(xi)?, self.normalize(eta)?) else {
            return Ok(CuspVerdict::Undetermined { class: cx });
        };
        let alg = self.plane.algebra().clone();
        let (mut vx, mut mx, mut gx) = (vx, mx, gx);
        if group == CuspGroup::Special {
            let ratio = self.det_k(&mx).try_div(&self.det_k(&me)).expect("unit determinant");
            let fix = self.units.iter().find(|u| (&ratio * &u.try_div(&self.field.conj(u)).expect("unit")).is_one());
            let Some(u) = fix else {
                return Ok(CuspVerdict::DifferentDeterminants {
                    xi: self.det_class(&self.det_k(&mx)),
                    eta: self.det_class(&self.det_k(&me)),
                });
            };
            // replace ξ̃ by uξ̃ and the generator by g/u
            let ua = alg.from_l(u);
            vx = vx.left_scale(&ua);
            let (x, y) = self.bezout(&vx).expect("unit multiple stays coprime");
            mx = self.plane.integral_complete(&vx, (&x, &y), &self.order)?;
            gx = gx.try_div(u).expect("unit");
        }
        let witness = me.unitary_inverse().mul(&mx);
        debug_assert_eq!(ve.times(&witness), vx);
        let scalar = alg.from_l(&ge.try_div(&gx).expect("nonzero"));
        Ok(CuspVerdict::Equivalent { witness, scalar })
    }
}

/// Number of cusps of the arithmetic group of the plane: the class number of k for
/// d ≤ 2 and of K for d ≥ 3. All supported planes have k = ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspCount {
    pub count: usize,
    pub rule: String,
    pub k_class_number: usize,
    pub big_k_class_number: Option<usize>,
}

pub fn cusp_count(plane: &HyperbolicPlane) -> Result<CuspCount, CuspError> {
    let alg = plane.algebra();
    let kfield = alg.k_map().source();
    let big_k = (kfield.degree() == 2).then(|| field_discriminant(kfield.minpoly()));
    let hk = big_k.map(class_number).transpose()?;
    Ok(match plane.case() {
        PlaneCase::D1 | PlaneCase::D2 => {
            CuspCount { count: 1, rule: "class number of k = Q".into(), k_class_number: 1, big_k_class_number: hk }
        }
        PlaneCase::D3 => CuspCount {
            count: hk.ok_or(CuspError::Unsupported)?,
            rule: "class number of K".into(),
            k_class_number: 1,
            big_k_class_number: hk,
        },
    })
}

/// (Nrd ξ₁, Nrd ξ₂) ∈ K² for a second-kind plane; isotropic vectors map to isotropic vectors of K².
pub fn norm_isotropy_transfer(plane: &HyperbolicPlane, xi: &PlaneVector) -> Result<(FieldElement, FieldElement), CuspError> {
    if plane.case() == PlaneCase::D2 {
        return Err(CuspError::Unsupported);
    }
    Ok((xi.x1.reduced_norm().map_err(PlaneError::from)?, xi.x2.reduced_norm().map_err(PlaneError::from)?))
}

/// b₁b̄₂ + b₂b̄₁ for b ∈ K², the conjugation taken from the involution.
pub fn k_form(plane: &HyperbolicPlane, b: &(FieldElement, FieldElement)) -> FieldElement {
    let alg = plane.algebra();
    let conj = |x: &FieldElement| alg.k_map().descend(&alg.from_k(x).bar().coords()[0]).expect("K is J-stable");
    &(&b.0 * &conj(&b.1)) + &(&b.1 * &conj(&b.0))
}

/// Integer arithmetic in ℤ[θ], θ² = tθ − n, for brute-force enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QInt(pub i64, pub i64);

#[derive(Clone, Copy, Debug)]
pub struct QRing {
    pub t: i64,
    pub n: i64,
}

impl QRing {
    pub fn from_disc(disc: i64) -> Self {
        if disc.rem_euclid(4) == 1 {
            QRing { t: 1, n: (1 - disc) / 4 }
        } else {
            QRing { t: 0, n: -disc / 4 }
        }
    }
    pub fn mul(&self, x: QInt, y: QInt) -> QInt {
        QInt(x.0 * y.0 - self.n * x.1 * y.1, x.0 * y.1 + x.1 * y.0 + self.t * x.1 * y.1)
    }
    pub fn conj(&self, x: QInt) -> QInt {
        QInt(x.0 + self.t * x.1, -x.1)
    }
    pub fn add(&self, x: QInt, y: QInt) -> QInt {
        QInt(x.0 + y.0, x.1 + y.1)
    }
    pub fn sub(&self, x: QInt, y: QInt) -> QInt {
        QInt(x.0 - y.0, x.1 - y.1)
    }
}

/// Orbits of an integral group on the isotropic lines met by a box of vectors.
#[derive(Clone, Debug, Serialize)]
pub struct BruteForceCusps {
    pub height: i64,
    pub vectors: usize,
    pub group_elements: usize,
    pub classes: usize,
    /// Component index of each vector, in enumeration order.
    #[serde(skip)]
    pub component: Vec<usize>,
    #[serde(skip)]
    pub vector_list: Vec<(QInt, QInt)>,
}

/// Enumerates nonzero isotropic (ξ₁, ξ₂) ∈ O_K² with coordinates in [−h, h], unitary
/// integral matrices with entry coordinates in [−entry_bound, entry_bound] (special ones
/// only if `special`), and joins vectors on a common line or related by a matrix.
pub fn brute_force_cusps(disc: i64, height: i64, entry_bound: i64, special: bool) -> BruteForceCusps {
    let r = QRing::from_disc(disc);
    let range = |h: i64| -> Vec<QInt> { (-h..=h).flat_map(|x| (-h..=h).map(move |y| QInt(x, y))).collect() };
    let herm = |x: (QInt, QInt), y: (QInt, QInt)| r.add(r.mul(x.0, r.conj(y.1)), r.mul(x.1, r.conj(y.0)));
    let zero = QInt(0, 0);
    let one = QInt(1, 0);
    let vecs: Vec<(QInt, QInt)> = range(height)
        .iter()
        .flat_map(|&a| range(height).into_iter().map(move |b| (a, b)))
        .filter(|&(a, b)| (a, b) != (zero, zero) && herm((a, b), (a, b)) == zero)
        .collect();
    let index: BTreeMap<(QInt, QInt), usize> = vecs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let entries = range(entry_bound);
    let mut mats = Vec::new();
    for &a in &entries {
        for &b in &entries {
            // first row isotropic
            if herm((a, b), (a, b)) != zero {
                continue;
            }
            for &c in &entries {
                for &d in &entries {
                    if herm((c, d), (c, d)) != zero || herm((a, b), (c, d)) != one {
                        continue;
                    }
                    if special && r.sub(r.mul(a, d), r.mul(b, c)) != one {
                        continue;
                    }
                    mats.push([a, b, c, d]);
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..vecs.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let union = |p: &mut Vec<usize>, i: usize, j: usize| {
        let (a, b) = (find(p, i), find(p, j));
        if a != b {
            p[a.max(b)] = a.min(b);
        }
    };
    // common lines
    for (i, &(x1, x2)) in vecs.iter().enumerate() {
        for (j, &(y1, y2)) in vecs.iter().enumerate().skip(i + 1) {
            if r.sub(r.mul(x1, y2), r.mul(x2, y1)) == zero {
                union(&mut parent, i, j);
                break;
            }
        }
    }
    for (i, &(x1, x2)) in vecs.iter().enumerate() {
        for m in &mats {
            let y = (r.add(r.mul(x1, m[0]), r.mul(x2, m[2])), r.add(r.mul(x1, m[1]), r.mul(x2, m[3])));
            if let Some(&j) = index.get(&y) {
                union(&mut parent, i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..vecs.len()).map(|i| find(&mut parent, i)).collect();
    let distinct: BTreeSet<usize> = roots.iter().copied().collect();
    let relabel: BTreeMap<usize, usize> = distinct.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    BruteForceCusps {
        height,
        vectors: vecs.len(),
        group_elements: mats.len(),
        classes: distinct.len(),
        component: roots.iter().map(|x| relabel[x]).collect(),
        vector_list: vecs,
    }
}
