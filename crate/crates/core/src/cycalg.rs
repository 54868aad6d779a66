//! Cyclic algebras (L/K, σ, γ) = L ⊕ eL ⊕ ⋯ ⊕ e^{d−1}L with e^d = γ and e·z = σ(z)·e.
//!
//! Elements are stored as coordinate vectors (z₀, …, z_{d−1}) meaning Σ eⁱzᵢ.
//! The matrix model sends e to the cyclic shift with γ in the lower-left corner
//! and z ∈ L to diag(z, σz, …, σ^{d−1}z).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactfield::{Automorphism, Extension, FieldElement, FieldError, NumberField, TowerMap};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("algebra mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("sigma does not generate Gal(L/K): {0}")]
    NotCyclic(String),
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("element has no inverse; matrix kernel vector {witness:?}")]
    ZeroDivisor { witness: Vec<String> },
    #[error("no involution registered on {0}")]
    NoInvolution(String),
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("value does not descend to the center")]
    DescentFailed,
    #[error("matrix is not in the image of the representation")]
    NotInImage,
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateLength { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Input description of an involution.
#[derive(Clone, Debug)]
pub enum InvolutionSpec {
    /// Canonical involution of a quaternion algebra: z₀ + e z₁ ↦ σ(z₀) − e z₁.
    First,
    /// Second kind: `rho` extends the K|k conjugation to L and commutes with σ,
    /// `omega` is fixed by `rho` and N_{ℓ|k}(ω) = γγ̄.
    Second { rho: Automorphism, omega: FieldElement },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionKind {
    First,
    Second,
}

/// A validated involution. J(z) = ρ(z) on L and J(e) = ω e⁻¹.
#[derive(Clone, Debug)]
pub struct Involution {
    pub kind: InvolutionKind,
    pub rho: Automorphism,
    pub omega: FieldElement,
    j_e: Vec<FieldElement>,
}

impl Involution {
    /// Coordinates of J(e).
    pub fn image_of_e(&self) -> &[FieldElement] {
        &self.j_e
    }
}

/// Reconstructs rational coordinates from flattened matrix entries.
#[derive(Clone, Debug)]
struct CoordSolver {
    rows: Vec<usize>,
    inverse: Matrix<BigRational>,
}

#[derive(Debug)]
pub struct CyclicAlgebra {
    label: String,
    l: Arc<NumberField>,
    k_map: TowerMap,
    sigma_pows: Vec<Automorphism>,
    gamma: FieldElement,
    gamma_l: FieldElement,
    d: usize,
    l_over_k: Extension,
    involution: Option<Involution>,
    solver: Option<CoordSolver>,
}

/// Element Σ eⁱzᵢ of a cyclic algebra.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    alg: Arc<CyclicAlgebra>,
    coords: Vec<FieldElement>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same(&other.alg) && self.coords == other.coords
    }
}
impl Eq for AlgebraElement {}

impl CyclicAlgebra {
    /// Builds (L/K, σ, γ) with `k_map: K → L`, optionally with an involution.
    pub fn new(
        label: &str,
        k_map: TowerMap,
        sigma: Automorphism,
        gamma: FieldElement,
        involution: Option<InvolutionSpec>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let l = k_map.target().clone();
        if !sigma.field().same(&l) {
            return Err(AlgebraError::NotCyclic("sigma acts on a different field".into()));
        }
        if !gamma.field().same(k_map.source()) {
            return Err(AlgebraError::NotCyclic("gamma is not in K".into()));
        }
        if gamma.is_zero() {
            return Err(AlgebraError::ZeroGamma);
        }
        let d = sigma.order();
        if d * k_map.source().degree() != l.degree() {
            return Err(AlgebraError::NotCyclic(format!(
                "order {d} times [K:Q]={} differs from [L:Q]={}",
                k_map.source().degree(),
                l.degree()
            )));
        }
        if sigma.apply(k_map.image()) != *k_map.image() {
            return Err(AlgebraError::NotCyclic("sigma moves K".into()));
        }
        let l_over_k = Extension::cyclic(k_map.clone(), &sigma)?;
        let sigma_pows = (0..d as i64).map(|i| sigma.pow(i)).collect();
        let gamma_l = k_map.apply(&gamma);
        let mut alg = CyclicAlgebra {
            label: label.to_string(),
            l,
            k_map,
            sigma_pows,
            gamma,
            gamma_l,
            d,
            l_over_k,
            involution: None,
            solver: None,
        };
        alg.solver = Some(alg.build_solver()?);
        let Some(spec) = involution else {
            return Ok(Arc::new(alg));
        };
        let (kind, rho, omega) = match spec {
            InvolutionSpec::First => {
                if d != 2 {
                    return Err(AlgebraError::InvalidInvolution("first kind needs d = 2".into()));
                }
                (InvolutionKind::First, alg.sigma_pows[1].clone(), -&alg.gamma_l)
            }
            InvolutionSpec::Second { rho, omega } => {
                alg.check_second_kind(&rho, &omega)?;
                (InvolutionKind::Second, rho, omega)
            }
        };
        let tmp = Arc::new(alg);
        let j_e = {
            let e_inv = tmp.inverse(&tmp.e())?;
            (&tmp.from_l(&omega) * &e_inv).coords
        };
        let mut alg = Arc::try_unwrap(tmp).expect("sole owner");
        alg.involution = Some(Involution { kind, rho, omega, j_e });
        let alg = Arc::new(alg);
        let je = AlgebraElement { alg: alg.clone(), coords: alg.involution.as_ref().unwrap().j_e.clone() };
        let rho_gamma = alg.from_l(&alg.involution.as_ref().unwrap().rho.apply(&alg.gamma_l));
        if je.pow(d as u32) != rho_gamma {
            return Err(AlgebraError::InvalidInvolution("J(e)^d differs from the conjugate of gamma".into()));
        }
        Ok(alg)
    }

    fn check_second_kind(&self, rho: &Automorphism, omega: &FieldElement) -> Result<(), AlgebraError> {
        let bad = |m: &str| Err(AlgebraError::InvalidInvolution(m.into()));
        if !rho.field().same(&self.l) || rho.order() != 2 {
            return bad("rho must be an automorphism of L of order 2");
        }
        let kappa = self.k_map.image();
        let rk = rho.apply(kappa);
        if rk == *kappa || !self.k_map.contains(&rk) {
            return bad("rho must restrict to the nontrivial conjugation of K");
        }
        let s = &self.sigma_pows[1 % self.d];
        if rho.compose(s) != s.compose(rho) {
            return bad("rho does not commute with sigma");
        }
        if !omega.field().same(&self.l) || rho.apply(omega) != *omega {
            return bad("omega must lie in the fixed field of rho");
        }
        let lhs = &self.gamma_l * &rho.apply(&self.gamma_l);
        let rhs = self.sigma_pows.iter().fold(FieldElement::one(&self.l), |acc, s| &acc * &s.apply(omega));
        if lhs != rhs {
            return Err(AlgebraError::InvalidInvolution(format!(
                "norm condition fails: gamma*conj(gamma) = {lhs}, N(omega) = {rhs}"
            )));
        }
        Ok(())
    }

    /// The quadratic-field algebra K with the conjugation involution, i.e. d = 1.
    pub fn commutative(label: &str, conj: &Automorphism) -> Result<Arc<Self>, AlgebraError> {
        let k = conj.field().clone();
        let id = TowerMap::new(&k, &k, FieldElement::generator(&k))?;
        let omega = FieldElement::one(&k);
        Self::new(
            label,
            id,
            Automorphism::identity(&k),
            FieldElement::one(&k),
            Some(InvolutionSpec::Second { rho: conj.clone(), omega }),
        )
    }

    fn same(&self, other: &CyclicAlgebra) -> bool {
        std::ptr::eq(self, other) || (self.label == other.label && self.gamma == other.gamma && self.d == other.d)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn degree(&self) -> usize {
        self.d
    }
    pub fn l(&self) -> &Arc<NumberField> {
        &self.l
    }
    pub fn k_map(&self) -> &TowerMap {
        &self.k_map
    }
    pub fn sigma(&self) -> &Automorphism {
        &self.sigma_pows[1 % self.d]
    }
    /// σ^i for 0 ≤ i < d.
    pub fn sigma_pow(&self, i: i64) -> &Automorphism {
        &self.sigma_pows[i.rem_euclid(self.d as i64) as usize]
    }
    pub fn gamma(&self) -> &FieldElement {
        &self.gamma
    }
    pub fn gamma_in_l(&self) -> &FieldElement {
        &self.gamma_l
    }
    pub fn l_over_k(&self) -> &Extension {
        &self.l_over_k
    }
    pub fn involution(&self) -> Option<&Involution> {
        self.involution.as_ref()
    }

    /// Dimension over ℚ.
    pub fn rational_dim(&self) -> usize {
        self.d * self.l.degree()
    }

    /// Degree over ℚ of the fixed field k of the involution on the center.
    pub fn k_degree(&self) -> usize {
        let kd = self.k_map.source().degree();
        match self.involution.as_ref().map(|j| j.kind) {
            Some(InvolutionKind::Second) => kd / 2,
            _ => kd,
        }
    }

    fn build_solver(&self) -> Result<CoordSolver, AlgebraError> {
        let n = self.l.degree();
        let dim = self.d * n;
        let cols: Vec<Vec<BigRational>> = (0..dim)
            .map(|idx| {
                let m = self.matrix_rep_coords(&self.basis_coords(idx));
                m.iter().flatten().flat_map(|x| x.coords().to_vec()).collect()
            })
            .collect();
        // rows of cols = basis images; pick independent entry positions
        let mut t = cols.clone();
        let piv = linalg::rref(&mut t);
        if piv.len() != dim {
            return Err(AlgebraError::NotCyclic("matrix representation is not injective".into()));
        }
        let sub: Matrix<BigRational> = linalg::transpose(&cols).into_iter().enumerate().filter(|(i, _)| piv.contains(i)).map(|(_, r)| r).collect();
        let inverse = linalg::inverse(&sub).ok_or(AlgebraError::NotInImage)?;
        Ok(CoordSolver { rows: piv, inverse })
    }

    fn basis_coords(&self, idx: usize) -> Vec<FieldElement> {
        let n = self.l.degree();
        let mut c = vec![FieldElement::zero(&self.l); self.d];
        let mut v = vec![BigRational::zero(); n];
        v[idx % n] = BigRational::from_integer(1.into());
        c[idx / n] = FieldElement::new(&self.l, v).expect("length");
        c
    }

    fn matrix_rep_coords(&self, z: &[FieldElement]) -> Matrix<FieldElement> {
        let d = self.d;
        let mut m = vec![vec![FieldElement::zero(&self.l); d]; d];
        for (i, zi) in z.iter().enumerate() {
            if zi.is_zero() {
                continue;
            }
            for r in 0..d {
                let c = (r + i) % d;
                let v = self.sigma_pows[c].apply(zi);
                m[r][c] = if r + i >= d { &self.gamma_l * &v } else { v };
            }
        }
        m
    }

    pub fn element(self: &Arc<Self>, coords: Vec<FieldElement>) -> Result<AlgebraElement, AlgebraError> {
        if coords.len() != self.d {
            return Err(AlgebraError::CoordinateLength { expected: self.d, got: coords.len() });
        }
        if let Some(z) = coords.iter().find(|z| !z.field().same(&self.l)) {
            return Err(AlgebraError::Field(FieldError::Mismatch(self.l.label().into(), z.field().label().into())));
        }
        Ok(AlgebraElement { alg: self.clone(), coords })
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement { alg: self.clone(), coords: vec![FieldElement::zero(&self.l); self.d] }
    }

    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        self.from_l(&FieldElement::one(&self.l))
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> AlgebraElement {
        self.from_l(&FieldElement::from_int(&self.l, n))
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> AlgebraElement {
        self.from_l(&FieldElement::from_rational(&self.l, q))
    }

    /// z ∈ L as the element with coordinates (z, 0, …, 0).
    pub fn from_l(self: &Arc<Self>, z: &FieldElement) -> AlgebraElement {
        let mut coords = vec![FieldElement::zero(&self.l); self.d];
        coords[0] = z.clone();
        AlgebraElement { alg: self.clone(), coords }
    }

    /// Element of the center K.
    pub fn from_k(self: &Arc<Self>, x: &FieldElement) -> AlgebraElement {
        self.from_l(&self.k_map.apply(x))
    }

    /// The generator e (equal to γ when d = 1).
    pub fn e(self: &Arc<Self>) -> AlgebraElement {
        if self.d == 1 {
            return self.from_l(&self.gamma_l);
        }
        let mut coords = vec![FieldElement::zero(&self.l); self.d];
        coords[1] = FieldElement::one(&self.l);
        AlgebraElement { alg: self.clone(), coords }
    }

    /// Basis element e^i θ^j over ℚ, indexed by `i·[L:ℚ] + j`.
    pub fn rational_basis_element(self: &Arc<Self>, idx: usize) -> AlgebraElement {
        AlgebraElement { alg: self.clone(), coords: self.basis_coords(idx) }
    }

    pub fn rational_basis(self: &Arc<Self>) -> Vec<AlgebraElement> {
        (0..self.rational_dim()).map(|i| self.rational_basis_element(i)).collect()
    }

    pub fn from_rational_coords(self: &Arc<Self>, v: &[BigRational]) -> AlgebraElement {
        let n = self.l.degree();
        let coords = (0..self.d)
            .map(|i| FieldElement::new(&self.l, v[i * n..(i + 1) * n].to_vec()).expect("length"))
            .collect();
        AlgebraElement { alg: self.clone(), coords }
    }

    /// Matrix over L of an element, per the shift-and-diagonal model.
    pub fn matrix_rep(&self, x: &AlgebraElement) -> Matrix<FieldElement> {
        self.matrix_rep_coords(&x.coords)
    }

    /// Recovers the element whose representation is `m`.
    pub fn from_matrix(self: &Arc<Self>, m: &Matrix<FieldElement>) -> Result<AlgebraElement, AlgebraError> {
        let solver = self.solver.as_ref().expect("solver built at construction");
        let flat: Vec<BigRational> = m.iter().flatten().flat_map(|x| x.coords().to_vec()).collect();
        let rhs: Vec<BigRational> = solver.rows.iter().map(|&i| flat[i].clone()).collect();
        let v: Vec<BigRational> = solver.inverse.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
        let x = self.from_rational_coords(&v);
        if self.matrix_rep(&x) != *m {
            return Err(AlgebraError::NotInImage);
        }
        Ok(x)
    }

    /// Multiplicative inverse through the matrix model.
    pub fn inverse(self: &Arc<Self>, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let m = self.matrix_rep(x);
        match linalg::inverse(&m) {
            Some(mi) => self.from_matrix(&mi),
            None => {
                let ker = linalg::kernel(&m);
                Err(AlgebraError::ZeroDivisor { witness: ker[0].iter().map(|z| z.to_string()).collect() })
            }
        }
    }

    /// Reduced norm in K.
    pub fn reduced_norm(&self, x: &AlgebraElement) -> Result<FieldElement, AlgebraError> {
        let det = linalg::det(&self.matrix_rep(x));
        self.k_map.descend(&det).ok_or(AlgebraError::DescentFailed)
    }

    /// Reduced trace in K.
    pub fn reduced_trace(&self, x: &AlgebraElement) -> Result<FieldElement, AlgebraError> {
        let m = self.matrix_rep(x);
        let t = (0..self.d).fold(FieldElement::zero(&self.l), |acc, i| &acc + &m[i][i]);
        self.k_map.descend(&t).ok_or(AlgebraError::DescentFailed)
    }

    /// Applies the registered involution.
    pub fn involute(self: &Arc<Self>, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let inv = self.involution.as_ref().ok_or_else(|| AlgebraError::NoInvolution(self.label.clone()))?;
        let je = AlgebraElement { alg: self.clone(), coords: inv.j_e.clone() };
        let mut acc = self.zero();
        let mut je_pow = self.one();
        for z in &x.coords {
            if !z.is_zero() {
                acc = &acc + &(&self.from_l(&inv.rho.apply(z)) * &je_pow);
            }
            je_pow = &je_pow * &je;
        }
        Ok(acc)
    }

    /// Rational matrix of a ℚ-linear map given on the rational basis.
    fn rational_matrix(self: &Arc<Self>, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Matrix<BigRational> {
        let cols: Vec<Vec<BigRational>> = self.rational_basis().iter().map(|b| f(b).rational_coords()).collect();
        linalg::transpose(&cols)
    }

    /// Eigenspaces A⁺ = {J(x) = x} and A⁻ = {J(x) = −x} with the element q.
    pub fn plus_minus_split(self: &Arc<Self>) -> Result<PlusMinusSplit, AlgebraError> {
        let inv = self.involution.as_ref().ok_or_else(|| AlgebraError::NoInvolution(self.label.clone()))?;
        if inv.kind != InvolutionKind::Second {
            return Err(AlgebraError::InvalidInvolution("split needs an involution of the second kind".into()));
        }
        let jm = self.rational_matrix(|x| self.involute(x).expect("involution registered"));
        let n = jm.len();
        let shifted = |s: i64| -> Matrix<BigRational> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut v = jm[i][j].clone();
                            if i == j {
                                v -= BigRational::from_integer(s.into());
                            }
                            v
                        })
                        .collect()
                })
                .collect()
        };
        let plus: Vec<AlgebraElement> =
            linalg::kernel(&shifted(1)).iter().map(|v| self.from_rational_coords(v)).collect();
        let minus: Vec<AlgebraElement> =
            linalg::kernel(&shifted(-1)).iter().map(|v| self.from_rational_coords(v)).collect();
        let kappa = self.k_map.image();
        let q = self.from_l(&(kappa - &inv.rho.apply(kappa)));
        let q_plus: Vec<AlgebraElement> = plus.iter().map(|x| &q * x).collect();
        let all: Matrix<BigRational> = plus.iter().chain(&q_plus).map(|x| x.rational_coords()).collect();
        let kd = self.k_degree();
        let q_plus_in_minus = q_plus.iter().all(|y| self.involute(y).map(|j| j == -y).unwrap_or(false));
        Ok(PlusMinusSplit {
            dim_plus: plus.len() / kd,
            dim_minus: minus.len() / kd,
            direct_sum: linalg::rank(&all) == n && q_plus_in_minus,
            q_squared_central: {
                let q2 = &q * &q;
                q2.is_central_scalar() && inv.rho.apply(&q2.coords[0]) == q2.coords[0]
            },
            plus,
            minus,
            q,
        })
    }

    /// k-dimension of {b : b + J(b) = 0}.
    pub fn skew_dimension(self: &Arc<Self>) -> Result<usize, AlgebraError> {
        let _ = self.involution.as_ref().ok_or_else(|| AlgebraError::NoInvolution(self.label.clone()))?;
        let m = self.rational_matrix(|x| x + &self.involute(x).expect("involution registered"));
        Ok(linalg::kernel(&m).len() / self.k_degree())
    }
}

/// Result of [`CyclicAlgebra::plus_minus_split`]; bases are over ℚ, dimensions over k.
#[derive(Clone, Debug)]
pub struct PlusMinusSplit {
    pub plus: Vec<AlgebraElement>,
    pub minus: Vec<AlgebraElement>,
    pub q: AlgebraElement,
    pub dim_plus: usize,
    pub dim_minus: usize,
    /// A = A⁺ ⊕ qA⁺ with qA⁺ ⊂ A⁻.
    pub direct_sum: bool,
    pub q_squared_central: bool,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.alg
    }
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|z| z.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|z| z.is_zero())
    }

    /// True when the element lies in L (only the e⁰ coordinate is nonzero).
    pub fn in_l(&self) -> bool {
        self.coords[1..].iter().all(|z| z.is_zero())
    }

    /// True when the element is a scalar from the center K.
    pub fn is_central_scalar(&self) -> bool {
        self.in_l() && self.alg.k_map.contains(&self.coords[0])
    }

    fn check(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.alg.same(&o.alg) {
            Ok(())
        } else {
            Err(AlgebraError::Mismatch(self.alg.label.clone(), o.alg.label.clone()))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check(o)?;
        Ok(AlgebraElement { alg: self.alg.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check(o)?;
        Ok(AlgebraElement { alg: self.alg.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() })
    }

    /// Product from the relations e^d = γ and z e^j = e^j σ^{−j}(z).
    pub fn try_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check(o)?;
        let alg = &self.alg;
        let d = alg.d;
        let mut out = vec![FieldElement::zero(&alg.l); d];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut t = &alg.sigma_pow(-(j as i64)).apply(a) * b;
                if i + j >= d {
                    t = &t * &alg.gamma_l;
                }
                out[(i + j) % d] = &out[(i + j) % d] + &t;
            }
        }
        Ok(AlgebraElement { alg: alg.clone(), coords: out })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.alg.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.alg.inverse(self)
    }

    pub fn involute(&self) -> Result<Self, AlgebraError> {
        self.alg.involute(self)
    }

    /// Shorthand for the involution; panics if none is registered.
    pub fn bar(&self) -> Self {
        self.involute().expect("algebra has an involution")
    }

    pub fn reduced_norm(&self) -> Result<FieldElement, AlgebraError> {
        self.alg.reduced_norm(self)
    }

    pub fn reduced_trace(&self) -> Result<FieldElement, AlgebraError> {
        self.alg.reduced_trace(self)
    }

    pub fn matrix_rep(&self) -> Matrix<FieldElement> {
        self.alg.matrix_rep(self)
    }

    /// Concatenated power-basis coordinates of z₀, …, z_{d−1}.
    pub fn rational_coords(&self) -> Vec<BigRational> {
        self.coords.iter().flat_map(|z| z.coords().to_vec()).collect()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        AlgebraElement { alg: self.alg.clone(), coords: self.coords.iter().map(|z| z.scale(q)).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "algebra": self.alg.label,
            "coords": self.coords.iter().map(|z| z.to_strings()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.is_zero())
            .map(|(i, z)| match i {
                0 => format!("({z})"),
                1 => format!("e({z})"),
                _ => format!("e^{i}({z})"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

macro_rules! alg_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a AlgebraElement> for &'a AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, o: &'a AlgebraElement) -> AlgebraElement {
                self.$f(o).expect("algebra mismatch")
            }
        }
        impl $tr<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, o: AlgebraElement) -> AlgebraElement {
                self.$f(&o).expect("algebra mismatch")
            }
        }
    };
}
alg_binop!(Add, add, try_add);
alg_binop!(Sub, sub, try_sub);
alg_binop!(Mul, mul, try_mul);

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { alg: self.alg.clone(), coords: self.coords.iter().map(|z| -z).collect() }
    }
}
impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl linalg::Scalar for AlgebraElement {
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_s(&self) -> Self {
        self.inverse().expect("nonzero element of a division algebra")
    }
    fn zero_like(&self) -> Self {
        self.alg.zero()
    }
    fn one_like(&self) -> Self {
        self.alg.one()
    }
}

/// Standard algebras used by tests and the command line.
pub mod standard {
    use super::*;
    use crate::catalog::{CyclotomicSeven, QuadraticField, RealQuadratic};

    /// The degree-3 algebra (ℚ(ζ₇)/ℚ(√−7), ζ ↦ ζ², γ) with γ² + γ + 2 = 0, without involution.
    pub fn seventh_algebra(t: &CyclotomicSeven) -> Arc<CyclicAlgebra> {
        CyclicAlgebra::new("D7", t.k_in_l.clone(), t.sigma.clone(), t.gamma(), None).expect("valid cyclic algebra")
    }

    /// The companion (ℚ(ζ₇)/ℚ(√−7), ζ ↦ ζ², 2γ̄) which carries a second-kind involution with ω = 2.
    pub fn seventh_companion(t: &CyclotomicSeven) -> Arc<CyclicAlgebra> {
        let gbar = t.k.conj(&t.gamma());
        let gamma = gbar.scale(&crate::linalg::q(2));
        let omega = FieldElement::from_int(&t.l, 2);
        CyclicAlgebra::new(
            "D7c",
            t.k_in_l.clone(),
            t.sigma.clone(),
            gamma,
            Some(InvolutionSpec::Second { rho: t.rho.clone(), omega }),
        )
        .expect("norm condition holds for omega = 2")
    }

    /// Quaternion algebra (a, b) over ℚ with its canonical involution.
    pub fn quaternion(a: i64, b: i64) -> Result<Arc<CyclicAlgebra>, AlgebraError> {
        let rq = RealQuadratic::new(a)?;
        let q = NumberField::rationals();
        let map = TowerMap::new(&q, &rq.field, FieldElement::zero(&rq.field))?;
        let gamma = FieldElement::from_int(&q, b);
        CyclicAlgebra::new(&format!("({a},{b})"), map, rq.sigma.clone(), gamma, Some(InvolutionSpec::First))
    }

    /// The field K = ℚ(√D) as a degree-one algebra with complex conjugation.
    pub fn quadratic(kf: &QuadraticField) -> Arc<CyclicAlgebra> {
        CyclicAlgebra::commutative(&format!("K{}", kf.disc), &kf.conj).expect("valid commutative algebra")
    }
}

/// JSON description of an algebra over fields defined in the same document.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct AlgebraDef {
    pub label: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "K_map")]
    pub k_map: crate::exactfield::TowerMapDef,
    pub sigma: Vec<String>,
    pub gamma: Vec<String>,
    pub d: usize,
    #[serde(default)]
    pub involution: Option<InvolutionDef>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct InvolutionDef {
    pub kind: InvolutionKind,
    #[serde(default)]
    pub omega: Option<Vec<String>>,
    #[serde(default)]
    pub rho: Option<Vec<String>>,
}

fn parse_elt(f: &Arc<NumberField>, v: &[String]) -> Result<FieldElement, AlgebraError> {
    let coords = v
        .iter()
        .map(|s| crate::exactfield::poly::parse_rational(s).ok_or_else(|| FieldError::Parse(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FieldElement::new(f, coords)?)
}

impl AlgebraDef {
    pub fn build(&self, fields: &[Arc<NumberField>]) -> Result<Arc<CyclicAlgebra>, AlgebraError> {
        let map = self.k_map.build(fields)?;
        if map.target().label() != self.l {
            return Err(AlgebraError::NotCyclic("K_map target differs from L".into()));
        }
        let l = map.target().clone();
        let sigma = Automorphism::new(&l, parse_elt(&l, &self.sigma)?)?;
        if sigma.order() != self.d {
            return Err(AlgebraError::NotCyclic(format!("sigma has order {}, expected {}", sigma.order(), self.d)));
        }
        let gamma = parse_elt(map.source(), &self.gamma)?;
        let spec = match &self.involution {
            None => None,
            Some(InvolutionDef { kind: InvolutionKind::First, .. }) => Some(InvolutionSpec::First),
            Some(InvolutionDef { kind: InvolutionKind::Second, omega, rho }) => {
                let missing = || AlgebraError::InvalidInvolution("second kind needs omega and rho".into());
                let omega = parse_elt(&l, omega.as_ref().ok_or_else(missing)?)?;
                let rho = Automorphism::new(&l, parse_elt(&l, rho.as_ref().ok_or_else(missing)?)?)?;
                Some(InvolutionSpec::Second { rho, omega })
            }
        };
        CyclicAlgebra::new(&self.label, map, sigma, gamma, spec)
    }
}
