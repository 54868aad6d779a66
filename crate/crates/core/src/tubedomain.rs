//! Numeric realization of the real unitary group of a plane and its action on
//! the associated tube domain.
//!
//! The algebra is realized through its matrix model at the first complex
//! embedding of L. A hermitian matrix Ψ with Ψ φ(J x) = φ(x)* Ψ turns the
//! abstract condition g H g* = H into G Ω G* = Ω with Ω = [[0, Ψ⁻¹], [Ψ⁻¹, 0]].
//! Points are d × d matrices τ and G acts by (Aτ + B)(Cτ + D)⁻¹ on columns.
//!
//! Two frames are used for the domain:
//! * d = 1 and d ≥ 3: Ψ is positive definite and S = diag(iP, P) with P² = Ψ
//!   carries the group into the standard U(d, d), domain Im τ > 0;
//! * d = 2: q = diag(I, J₂) carries the (real) group into Sp(4, ℝ), domain the
//!   Siegel upper half space of symmetric 2 × 2 matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::cycalg::AlgebraElement;
use crate::exactfield::{FieldElement, TowerMap};
use crate::hermplane::{GroupMatrix, HyperbolicPlane, PlaneCase, PlaneError};
use crate::linalg::Matrix;
use crate::sampling::{self, Rng64};

pub type CMat = DMatrix<Complex64>;

/// Default tolerance for domain membership and residual comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Largest accepted condition number of Cτ + D.
pub const CONDITION_BOUND: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TubeError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no hermitian intertwiner for the involution (residual {0:e})")]
    NoIntertwiner(f64),
    #[error("degenerate form: eigenvalue {0:e} within tolerance of zero")]
    Degenerate(f64),
    #[error("point outside the domain: minimal eigenvalue of Im τ is {min_eigenvalue:e}, asymmetry {asymmetry:e}")]
    NotInDomain { min_eigenvalue: f64, asymmetry: f64 },
    #[error("Cτ + D is near-singular (condition number {0:e})")]
    NearSingular(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn norm(m: &CMat) -> f64 {
    m.norm()
}

fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMat::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

fn anti_diag(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, n), (n, n)).copy_from(a);
    out.view_mut((n, 0), (n, n)).copy_from(a);
    out
}

/// The matrix J = [[0, I], [−I, 0]] of size 2n.
pub fn standard_symplectic(n: usize) -> CMat {
    let mut j = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = c(1.0);
        j[(n + i, i)] = c(-1.0);
    }
    j
}

/// Entrywise numeric image of a matrix over L at embedding `idx`.
pub fn embed_matrix(m: &Matrix<FieldElement>, idx: usize) -> CMat {
    let n = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    CMat::from_fn(n, cols, |i, j| m[i][j].embed(idx))
}

/// Eigenvalues of a hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Numbers of positive and negative eigenvalues of a hermitian matrix.
pub fn signature_of_hermitian(m: &CMat, tol: f64) -> Result<(usize, usize), TubeError> {
    let ev = hermitian_eigenvalues(m);
    let scale = ev.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    if let Some(z) = ev.iter().find(|x| x.abs() <= tol * scale) {
        return Err(TubeError::Degenerate(*z));
    }
    Ok((ev.iter().filter(|x| **x > 0.0).count(), ev.iter().filter(|x| **x < 0.0).count()))
}

fn hermitian_sqrt(m: &CMat) -> CMat {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| c(x.max(0.0).sqrt())));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn condition_number(m: &CMat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0f64, |a, x| a.max(*x));
    let min = sv.iter().fold(f64::INFINITY, |a, x| a.min(*x));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// (Aτ + B)(Cτ + D)⁻¹ for a 2n × 2n matrix g and an n × n matrix τ.
pub fn moebius(g: &CMat, tau: &CMat) -> Result<CMat, TubeError> {
    let n = tau.nrows();
    if g.nrows() != 2 * n || g.ncols() != 2 * n || tau.ncols() != n {
        return Err(TubeError::Shape(format!("{}x{} acting on {}x{}", g.nrows(), g.ncols(), n, tau.ncols())));
    }
    let a = g.view((0, 0), (n, n));
    let b = g.view((0, n), (n, n));
    let cm = g.view((n, 0), (n, n));
    let d = g.view((n, n), (n, n));
    let num = a * tau + b;
    let den = cm * tau + d;
    let k = condition_number(&den);
    if !k.is_finite() || k > CONDITION_BOUND {
        return Err(TubeError::NearSingular(k));
    }
    let inv = den.try_inverse().ok_or(TubeError::NearSingular(f64::INFINITY))?;
    Ok(num * inv)
}

/// A point of the domain: one block per real place of k.
#[derive(Clone, Debug)]
pub struct TubePoint {
    pub blocks: Vec<CMat>,
    pub tolerance: f64,
    /// Siegel case: blocks must be symmetric.
    pub symmetric: bool,
}

/// (τ − τ*) / 2i.
pub fn imaginary_part(tau: &CMat) -> CMat {
    (tau - tau.adjoint()) * Complex64::new(0.0, -0.5)
}

impl TubePoint {
    /// Validated point: Im τ positive definite (and τ symmetric when required) within tolerance.
    pub fn new(blocks: Vec<CMat>, symmetric: bool, tolerance: f64) -> Result<Self, TubeError> {
        let p = TubePoint { blocks, tolerance, symmetric };
        let (min_eigenvalue, asymmetry) = (p.min_imaginary_eigenvalue(), p.asymmetry());
        let scale = p.blocks.iter().fold(1.0f64, |a, b| a.max(norm(b)));
        if min_eigenvalue <= -tolerance * scale || (symmetric && asymmetry > tolerance * scale) {
            return Err(TubeError::NotInDomain { min_eigenvalue, asymmetry });
        }
        Ok(p)
    }

    pub fn diagonal(entries: &[Complex64], symmetric: bool, tolerance: f64) -> Result<Self, TubeError> {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_column_slice(entries));
        Self::new(vec![m], symmetric, tolerance)
    }

    pub fn dim(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.nrows())
    }

    pub fn min_imaginary_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| hermitian_eigenvalues(&imaginary_part(b)).first().copied().unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn asymmetry(&self) -> f64 {
        self.blocks.iter().map(|b| norm(&(b - b.transpose()))).fold(0.0, f64::max)
    }

    /// Largest block distance, relative to the size of `self`.
    pub fn distance(&self, other: &TubePoint) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| norm(&(a - b)) / norm(a).max(1.0))
            .fold(0.0, f64::max)
    }

    /// Largest off-diagonal entry, relative to the block size.
    pub fn off_diagonal(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let mut worst = 0.0f64;
                for i in 0..b.nrows() {
                    for j in 0..b.ncols() {
                        if i != j {
                            worst = worst.max(b[(i, j)].norm());
                        }
                    }
                }
                worst / norm(b).max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// A real group element, one complex 2d × 2d block per real place of k.
#[derive(Clone, Debug)]
pub struct NumericGroupElement {
    pub blocks: Vec<CMat>,
}

impl NumericGroupElement {
    pub fn from_blocks(blocks: Vec<CMat>) -> Self {
        NumericGroupElement { blocks }
    }

    pub fn identity(n: usize) -> Self {
        NumericGroupElement { blocks: vec![CMat::identity(n, n)] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        NumericGroupElement { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a * b).collect() }
    }
}

/// Block Möbius action of `g` on `tau`.
pub fn act(g: &NumericGroupElement, tau: &TubePoint) -> Result<TubePoint, TubeError> {
    if g.blocks.len() != tau.blocks.len() {
        return Err(TubeError::Shape(format!("{} group blocks, {} point blocks", g.blocks.len(), tau.blocks.len())));
    }
    let blocks = g.blocks.iter().zip(&tau.blocks).map(|(m, t)| moebius(m, t)).collect::<Result<Vec<_>, _>>()?;
    TubePoint::new(blocks, tau.symmetric, tau.tolerance)
}

/// The plane realized over ℂ at one real place of k, with the frame of its domain.
#[derive(Clone, Debug)]
pub struct Realization {
    plane: HyperbolicPlane,
    d: usize,
    psi: CMat,
    psi_residual: f64,
    frame: CMat,
    frame_inv: CMat,
    frame_form: CMat,
}

impl Realization {
    pub fn new(plane: &HyperbolicPlane) -> Result<Self, TubeError> {
        let alg = plane.algebra();
        if alg.k_degree() != 1 {
            return Err(TubeError::Unsupported(format!("k of degree {}; only k = Q is realized", alg.k_degree())));
        }
        let d = alg.degree();
        let basis = alg.rational_basis();
        let pairs: Vec<(CMat, CMat)> = basis
            .iter()
            .map(|x| {
                let jx = x.bar();
                (embed_matrix(&jx.matrix_rep(), 0), embed_matrix(&x.matrix_rep(), 0).adjoint())
            })
            .collect();
        let psi = intertwiner(d, &pairs)?;
        let psi_residual = pairs
            .iter()
            .map(|(a, b)| norm(&(&psi * a - b * &psi)) / (norm(&psi) * norm(a).max(1.0)))
            .fold(0.0, f64::max);
        if psi_residual > DEFAULT_TOLERANCE {
            return Err(TubeError::NoIntertwiner(psi_residual));
        }
        let frame = match plane.case() {
            PlaneCase::D2 => {
                let mut j2 = CMat::zeros(2, 2);
                j2[(0, 1)] = c(1.0);
                j2[(1, 0)] = c(-1.0);
                block_diag(&CMat::identity(2, 2), &j2)
            }
            _ => {
                let ev = hermitian_eigenvalues(&psi);
                if ev[0] <= DEFAULT_TOLERANCE * ev[d - 1].abs().max(1.0) {
                    return Err(TubeError::Unsupported("intertwiner is not definite".into()));
                }
                let p = hermitian_sqrt(&psi);
                block_diag(&(&p * I), &p)
            }
        };
        let frame_inv = frame.clone().try_inverse().ok_or(TubeError::Degenerate(0.0))?;
        let frame_form = frame_inv.adjoint() * anti_diag(&psi) * &frame_inv;
        Ok(Realization { plane: plane.clone(), d, psi, psi_residual, frame, frame_inv, frame_form })
    }

    pub fn plane(&self) -> &HyperbolicPlane {
        &self.plane
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// The hermitian Ψ with Ψ φ(J x) = φ(x)* Ψ.
    pub fn psi(&self) -> &CMat {
        &self.psi
    }

    pub fn psi_residual(&self) -> f64 {
        self.psi_residual
    }

    /// Ω = [[0, Ψ⁻¹], [Ψ⁻¹, 0]], preserved as G Ω G* = Ω.
    pub fn hermitian_form(&self) -> CMat {
        anti_diag(&self.psi.clone().try_inverse().expect("nondegenerate"))
    }

    /// The form M* F M = F preserved in the domain frame.
    pub fn frame_form(&self) -> &CMat {
        &self.frame_form
    }

    pub fn symmetric(&self) -> bool {
        self.plane.case() == PlaneCase::D2
    }

    pub fn algebra_matrix(&self, x: &AlgebraElement) -> CMat {
        embed_matrix(&x.matrix_rep(), 0)
    }

    /// The 2d × 2d matrix of g in the original coordinates.
    pub fn raw(&self, g: &GroupMatrix) -> CMat {
        embed_matrix(&g.block_matrix(), 0)
    }

    /// g in the domain frame.
    pub fn embed(&self, g: &GroupMatrix) -> NumericGroupElement {
        NumericGroupElement { blocks: vec![&self.frame * self.raw(g) * &self.frame_inv] }
    }

    /// ‖M* F M − F‖ relative to ‖M‖².
    pub fn form_residual(&self, g: &NumericGroupElement) -> f64 {
        g.blocks
            .iter()
            .map(|m| norm(&(m.adjoint() * &self.frame_form * m - &self.frame_form)) / (norm(m) * norm(m)).max(1.0))
            .fold(0.0, f64::max)
    }

    /// diag(i, …, i), or diag(i, b i) in the Siegel case.
    pub fn base_point(&self) -> TubePoint {
        let mut entries = vec![I; self.d];
        if self.symmetric() {
            entries[1] = I * self.quaternion_data().1;
        }
        TubePoint::diagonal(&entries, self.symmetric(), DEFAULT_TOLERANCE).expect("base point lies in the domain")
    }

    /// Image in the domain frame of a point τ in the original coordinates.
    pub fn from_original(&self, tau: &CMat) -> Result<CMat, TubeError> {
        moebius(&self.frame, tau)
    }

    pub fn to_original(&self, tau: &CMat) -> Result<CMat, TubeError> {
        moebius(&self.frame_inv, tau)
    }

    /// (a, b, √a) for a quaternion algebra (a, b).
    fn quaternion_data(&self) -> (f64, f64, f64) {
        let alg = self.plane.algebra();
        let a = -alg.l().minpoly()[0].to_f64().expect("finite");
        let b = alg.gamma().coords()[0].to_f64().expect("finite");
        (a, b, FieldElement::generator(alg.l()).embed(0).re)
    }

    /// Random point: X + iY with Y positive definite (real symmetric data in the Siegel case).
    pub fn random_point(&self, rng: &mut Rng64) -> TubePoint {
        let n = self.d;
        let sym = self.symmetric();
        let mut z = |r: f64| -> Complex64 {
            if sym {
                c(rng.gen_range(-r..r))
            } else {
                Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
            }
        };
        let x = CMat::from_fn(n, n, |_, _| z(1.0));
        let a = CMat::from_fn(n, n, |_, _| z(1.0));
        let (x, y) = if sym {
            ((&x + x.transpose()).scale(0.5), &a * a.transpose() + CMat::identity(n, n).scale(0.5))
        } else {
            ((&x + x.adjoint()).scale(0.5), &a * a.adjoint() + CMat::identity(n, n).scale(0.5))
        };
        TubePoint::new(vec![x + y * I], sym, DEFAULT_TOLERANCE).expect("sampled point lies in the domain")
    }

    fn random_diagonal_entry(rng: &mut Rng64) -> Complex64 {
        Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0))
    }
}

/// Solves Ψ A = B Ψ for all pairs over ℝ and returns a hermitian normalized solution.
fn intertwiner(d: usize, pairs: &[(CMat, CMat)]) -> Result<CMat, TubeError> {
    let unknowns = 2 * d * d;
    let unit = |u: usize| {
        let mut e = CMat::zeros(d, d);
        e[(u / 2 / d, (u / 2) % d)] = if u.is_multiple_of(2) { c(1.0) } else { I };
        e
    };
    let mut rows = DMatrix::<f64>::zeros(pairs.len() * unknowns, unknowns);
    for u in 0..unknowns {
        let e = unit(u);
        for (k, (a, b)) in pairs.iter().enumerate() {
            let r = &e * a - b * &e;
            for (idx, z) in r.iter().enumerate() {
                rows[(k * unknowns + 2 * idx, u)] = z.re;
                rows[(k * unknowns + 2 * idx + 1, u)] = z.im;
            }
        }
    }
    let svd = rows.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let (best, smallest) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
    let largest = svd.singular_values.iter().fold(0.0f64, |a, x| a.max(*x));
    if smallest > 1e-9 * largest.max(1.0) {
        return Err(TubeError::NoIntertwiner(smallest));
    }
    let v = vt.row(best);
    let psi = (0..unknowns).fold(CMat::zeros(d, d), |acc, u| acc + unit(u) * c(v[u]));
    let herm = &psi + psi.adjoint();
    let mut h = if norm(&herm) > 1e-6 * norm(&psi) { herm } else { (&psi - psi.adjoint()) * I };
    let corner = h[(0, 0)].re;
    h = if corner.abs() > 1e-8 * norm(&h) { h / c(corner) } else { h.clone() / c(norm(&h)) };
    if hermitian_eigenvalues(&h).iter().all(|x| *x < 0.0) {
        h = -h;
    }
    Ok(h)
}

/// Signature of the realized hermitian form, one entry per real place of k.
pub fn signature_of_form(plane: &HyperbolicPlane) -> Result<Vec<(usize, usize)>, TubeError> {
    let r = Realization::new(plane)?;
    Ok(vec![signature_of_hermitian(&r.hermitian_form(), DEFAULT_TOLERANCE)?])
}

/// Componentwise fractional-linear images of a diagonal point under the
/// embedded SL₂ element [[α, β], [γ, δ]] with entries mapped into L by `into_l`.
///
/// For d = 1 and d ≥ 3, in the original coordinates,
/// τᵢ ↦ (σⁱ(α)τᵢ + 2σⁱ(β)/s) / (σⁱ(γ)sτᵢ/2 + σⁱ(δ)) with s = √−η.
/// For a quaternion algebra (a, b), in the symplectic frame,
/// τ₁ ↦ (ατ₁ + 2β/(b√a)) / (bγ√a τ₁/2 + δ) and τ₂ ↦ (ατ₂ + 2β/√a) / (γ√a τ₂/2 + δ).
pub fn diagonal_action_formula(
    real: &Realization,
    m: &[[FieldElement; 2]; 2],
    into_l: &TowerMap,
    tau: &TubePoint,
) -> Result<TubePoint, TubeError> {
    let block = tau.blocks.first().ok_or_else(|| TubeError::Shape("empty point".into()))?;
    if tau.off_diagonal() > tau.tolerance {
        return Err(TubeError::Shape("point is not diagonal".into()));
    }
    let d = real.degree();
    let frac = |num: Complex64, den: Complex64| -> Result<Complex64, TubeError> {
        if den.norm() < 1e-12 {
            Err(TubeError::NearSingular(f64::INFINITY))
        } else {
            Ok(num / den)
        }
    };
    let entries: Vec<Complex64> = if real.plane.case() == PlaneCase::D2 {
        let v = |x: &FieldElement| into_l.apply(x).embed(0);
        let (al, be, ga, de) = (v(&m[0][0]), v(&m[0][1]), v(&m[1][0]), v(&m[1][1]));
        let (_, b, ra) = real.quaternion_data();
        let (t1, t2) = (block[(0, 0)], block[(1, 1)]);
        vec![
            frac(al * t1 + be * 2.0 / (b * ra), ga * b * ra / 2.0 * t1 + de)?,
            frac(al * t2 + be * 2.0 / ra, ga * ra / 2.0 * t2 + de)?,
        ]
    } else {
        let alg = real.plane.algebra();
        let s = real.plane.imaginary_unit().coords()[0].embed(0);
        let orig = real.to_original(block)?;
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let v = |x: &FieldElement| alg.sigma_pow(i as i64).apply(&into_l.apply(x)).embed(0);
            let (al, be, ga, de) = (v(&m[0][0]), v(&m[0][1]), v(&m[1][0]), v(&m[1][1]));
            let t = orig[(i, i)];
            out.push(frac(al * t + be * 2.0 / s, ga * s * t / 2.0 + de)?);
        }
        let h = CMat::from_diagonal(&nalgebra::DVector::from_vec(out));
        let back = real.from_original(&h)?;
        (0..d).map(|i| back[(i, i)]).collect()
    };
    let out = TubePoint::diagonal(&entries, tau.symmetric, tau.tolerance)?;
    if real.plane.case() != PlaneCase::D2 {
        // the frame change maps diagonal points to diagonal points only when Ψ is diagonal
        let full = real.from_original(&real.to_original(&out.blocks[0])?)?;
        if norm(&(full - &out.blocks[0])) > tau.tolerance * norm(&out.blocks[0]).max(1.0) {
            return Err(TubeError::Unsupported("frame does not preserve diagonal points".into()));
        }
    }
    Ok(out)
}

/// Residual summary of a sampled numeric check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn new(check: &str, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        ResidualReport { check: check.into(), samples, max_residual, tolerance, pass: max_residual < tolerance }
    }

    fn failed(check: &str, samples: usize, tolerance: f64) -> Self {
        ResidualReport { check: check.into(), samples, max_residual: f64::INFINITY, tolerance, pass: false }
    }
}

fn subgroup_sample(rng: &mut Rng64, into_l: &TowerMap) -> [[FieldElement; 2]; 2] {
    sampling::sl2_field(rng, into_l.source(), 2, 2, 2)
}

/// Identity and (gh)·τ = g·(h·τ) over random unitary pairs.
pub fn action_check(real: &Realization, samples: usize, rng: &mut Rng64, tol: f64) -> ResidualReport {
    let plane = real.plane();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let tau = real.random_point(rng);
        let g = plane.random_unitary(rng, 3);
        let h = plane.random_unitary(rng, 3);
        let (ng, nh, ngh) = (real.embed(&g), real.embed(&h), real.embed(&g.mul(&h)));
        let id = NumericGroupElement::identity(2 * real.degree());
        let r = (|| -> Result<f64, TubeError> {
            let lhs = act(&ngh, &tau)?;
            let rhs = act(&ng, &act(&nh, &tau)?)?;
            Ok(lhs.distance(&rhs).max(act(&id, &tau)?.distance(&tau)))
        })();
        match r {
            Ok(x) => worst = worst.max(x),
            Err(_) => return ResidualReport::failed("group action", samples, tol),
        }
    }
    ResidualReport::new("group action", samples, worst, tol)
}

/// Images of random points under random unitary elements stay in the domain;
/// the residual is the worst negative part of the minimal eigenvalue of Im τ
/// together with the form residual of the embedded element.
pub fn domain_preservation_check(real: &Realization, samples: usize, rng: &mut Rng64, tol: f64) -> ResidualReport {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let tau = real.random_point(rng);
        let g = real.embed(&real.plane().random_unitary(rng, 3));
        worst = worst.max(real.form_residual(&g));
        let blocks: Result<Vec<CMat>, TubeError> =
            g.blocks.iter().zip(&tau.blocks).map(|(m, t)| moebius(m, t)).collect();
        let Ok(blocks) = blocks else { return ResidualReport::failed("domain preservation", samples, tol) };
        let image = TubePoint { blocks, tolerance: tol, symmetric: tau.symmetric };
        let scale = image.blocks.iter().fold(1.0f64, |a, b| a.max(norm(b)));
        worst = worst.max((-image.min_imaginary_eigenvalue() / scale).max(0.0));
        if image.symmetric {
            worst = worst.max(image.asymmetry() / scale);
        }
    }
    ResidualReport::new("domain preservation", samples, worst, tol)
}

/// Closed-form diagonal action versus the generic Möbius action of the embedded element.
pub fn formula_check(real: &Realization, into_l: &TowerMap, samples: usize, rng: &mut Rng64, tol: f64) -> ResidualReport {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let m = subgroup_sample(rng, into_l);
        let tau = diagonal_sample(real, rng);
        let r = (|| -> Result<f64, TubeError> {
            let g = real.embed(&real.plane().embed_subgroup(&m, into_l)?);
            Ok(diagonal_action_formula(real, &m, into_l, &tau)?.distance(&act(&g, &tau)?))
        })();
        match r {
            Ok(x) => worst = worst.max(x),
            Err(_) => return ResidualReport::failed("diagonal formula", samples, tol),
        }
    }
    ResidualReport::new("diagonal formula", samples, worst, tol)
}

/// Random diagonal point; in the Siegel case of the form diag(τ₁, bτ₁).
pub fn diagonal_sample(real: &Realization, rng: &mut Rng64) -> TubePoint {
    let t = Realization::random_diagonal_entry(rng);
    let entries: Vec<Complex64> = if real.symmetric() {
        vec![t, t * real.quaternion_data().1]
    } else {
        std::iter::once(t).chain((1..real.degree()).map(|_| Realization::random_diagonal_entry(rng))).collect()
    };
    TubePoint::diagonal(&entries, real.symmetric(), DEFAULT_TOLERANCE).expect("diagonal point lies in the domain")
}

/// Residual of a point from the subdomain: off-diagonal size, and for the
/// Siegel case also |τ₂ − bτ₁|.
pub fn subdomain_residual(real: &Realization, tau: &TubePoint) -> f64 {
    let mut r = tau.off_diagonal();
    if real.symmetric() {
        let b = real.quaternion_data().1;
        for t in &tau.blocks {
            r = r.max((t[(1, 1)] - t[(0, 0)] * b).norm() / norm(t).max(1.0));
        }
    }
    r
}

/// Embedded SL₂ elements map subdomain points to subdomain points.
pub fn subdomain_preserved(
    real: &Realization,
    into_l: &TowerMap,
    samples: usize,
    rng: &mut Rng64,
    tol: f64,
) -> Result<ResidualReport, TubeError> {
    if real.plane().case() == PlaneCase::D1 {
        return Err(TubeError::Unsupported("no proper subdomain for d = 1".into()));
    }
    let mut worst = subdomain_residual(real, &real.base_point());
    for _ in 0..samples {
        let m = subgroup_sample(rng, into_l);
        let g = real.embed(&real.plane().embed_subgroup(&m, into_l)?);
        let image = act(&g, &diagonal_sample(real, rng))?;
        worst = worst.max(subdomain_residual(real, &image));
    }
    Ok(ResidualReport::new("subdomain preservation", samples, worst, tol))
}

/// Sampled elements [[a, c], [c, a]] built from Cayley transforms fix the base point.
pub fn stabilizer_check(real: &Realization, samples: usize, rng: &mut Rng64, tol: f64) -> Result<ResidualReport, TubeError> {
    let plane = real.plane();
    if plane.case() == PlaneCase::D2 {
        return Err(TubeError::Unsupported("the pair stabilizer is not compact for an indefinite quaternion algebra".into()));
    }
    let base = real.base_point();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = plane.cayley(&plane.random_skew(rng, 2, 2))?;
        let v = plane.cayley(&plane.random_skew(rng, 2, 2))?;
        let g = real.embed(&plane.compact_element(&u, &v));
        worst = worst.max(act(&g, &base)?.distance(&base));
    }
    Ok(ResidualReport::new("base point stabilizer", samples, worst, tol))
}

/// ‖mᵀJm − J‖ + ‖Im m‖ for m = q g q⁻¹, relative to ‖m‖².
pub fn symplectic_residual(m: &CMat) -> f64 {
    let j = standard_symplectic(m.nrows() / 2);
    let imag = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    norm(&(m.transpose() * &j * m - &j)) / (norm(m) * norm(m)).max(1.0) + imag / norm(m).max(1.0)
}

/// Conjugates of random unitary elements lie in Sp(4, ℝ).
pub fn symplectic_conjugation_check(real: &Realization, samples: usize, rng: &mut Rng64, tol: f64) -> Result<ResidualReport, TubeError> {
    if real.plane().case() != PlaneCase::D2 {
        return Err(TubeError::Unsupported("symplectic conjugation needs a quaternion plane".into()));
    }
    let mut worst = symplectic_residual(&real.embed(&GroupMatrix::identity(real.plane().algebra())).blocks[0]);
    for _ in 0..samples {
        let g = real.embed(&real.plane().random_unitary(rng, 3));
        worst = worst.max(symplectic_residual(&g.blocks[0]));
    }
    Ok(ResidualReport::new("symplectic conjugation", samples, worst, tol))
}

/// Distance of q g q⁻¹, for g the embedded rational SL₂ element, from the
/// expected [[αI, diag(2β/(b√a), 2β/√a)], [diag(bγ√a/2, γ√a/2), δI]].
pub fn conjugated_subgroup_shape(real: &Realization, m: &[[FieldElement; 2]; 2]) -> Result<f64, TubeError> {
    if real.plane().case() != PlaneCase::D2 {
        return Err(TubeError::Unsupported("needs a quaternion plane".into()));
    }
    let into_l = TowerMap::from_rationals(real.plane().algebra().l());
    let got = &real.embed(&real.plane().embed_subgroup(m, &into_l)?).blocks[0];
    let v = |x: &FieldElement| x.embed(0);
    let (al, be, ga, de) = (v(&m[0][0]), v(&m[0][1]), v(&m[1][0]), v(&m[1][1]));
    let (_, b, ra) = real.quaternion_data();
    let mut want = CMat::zeros(4, 4);
    want[(0, 0)] = al;
    want[(1, 1)] = al;
    want[(0, 2)] = be * 2.0 / (b * ra);
    want[(1, 3)] = be * 2.0 / ra;
    want[(2, 0)] = ga * b * ra / 2.0;
    want[(3, 1)] = ga * ra / 2.0;
    want[(2, 2)] = de;
    want[(3, 3)] = de;
    Ok(norm(&(got - &want)) / norm(&want).max(1.0))
}
