//! Lattices in D² with the alternating form E(α, β) = Tr_{D|ℚ}(Σ αᵢ tᵢⱼ J(βⱼ))
//! attached to a skew-hermitian T, the complex representation Φ of D, and the
//! splitting of the lattice over a commutative subring into d summands.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::cycalg::{AlgebraElement, AlgebraError, CyclicAlgebra, InvolutionKind};
use crate::exactfield::FieldElement;
use crate::hermplane::{GroupMatrix, HyperbolicPlane, Order, PlaneCase, PlaneVector};
use crate::linalg;
use crate::zlattice::{det_int, smith_diagonal, IMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModuliError {
    #[error("case {0:?} does not match the plane")]
    CaseMismatch(TCase),
    #[error("T is not skew-hermitian")]
    NotSkew,
    #[error("order basis is not a ring lattice: {0}")]
    BadOrder(String),
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("vector {0} is not in the required commutative subfield")]
    NotInSubfield(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Choice of T: √−η·H (d = 1 and d ≥ 3), √a·H or e·H (quaternion algebras (a, b)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TCase {
    D1,
    D2a,
    D2b,
    D3,
}

impl std::str::FromStr for TCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "d1" => Ok(TCase::D1),
            "d2a" => Ok(TCase::D2a),
            "d2b" | "d2" => Ok(TCase::D2b),
            "d3" => Ok(TCase::D3),
            _ => Err(format!("unknown case {s}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SkewHermitianT {
    pub t: GroupMatrix,
    pub case: TCase,
}

fn ser_q<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exactfield::poly::rational_to_string(q))
}

fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_imat<S: Serializer>(m: &IMatrix, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

/// cH for a c with J(c) = −c; errors if c is not skew.
pub fn scaled_form(alg: &Arc<CyclicAlgebra>, c: &AlgebraElement, case: TCase) -> Result<SkewHermitianT, ModuliError> {
    let t = GroupMatrix::new(alg.zero(), c.clone(), c.clone(), alg.zero());
    let st = t.star();
    let skew = st.a == -&t.a && st.b == -&t.b && st.c == -&t.c && st.d == -&t.d;
    if !skew {
        return Err(ModuliError::NotSkew);
    }
    Ok(SkewHermitianT { t, case })
}

pub fn make_t(plane: &HyperbolicPlane, case: TCase) -> Result<SkewHermitianT, ModuliError> {
    let alg = plane.algebra();
    let c = match (plane.case(), case) {
        (PlaneCase::D1, TCase::D1) | (PlaneCase::D3, TCase::D3) => plane.imaginary_unit(),
        (PlaneCase::D2, TCase::D2a) => alg.from_l(&FieldElement::generator(alg.l())),
        (PlaneCase::D2, TCase::D2b) => alg.e(),
        _ => return Err(ModuliError::CaseMismatch(case)),
    };
    scaled_form(alg, &c, case)
}

/// Tr_{K|ℚ} ∘ Trd.
pub fn rational_trace(x: &AlgebraElement) -> Result<BigRational, ModuliError> {
    Ok(x.reduced_trace()?.abs_trace())
}

/// E(α, β) = Tr_{D|ℚ}(Σ αᵢ tᵢⱼ J(βⱼ)).
pub fn riemann_form(alpha: &PlaneVector, beta: &PlaneVector, t: &SkewHermitianT) -> Result<BigRational, ModuliError> {
    let (a, b) = ([&alpha.x1, &alpha.x2], [beta.x1.bar(), beta.x2.bar()]);
    let tm = [[&t.t.a, &t.t.b], [&t.t.c, &t.t.d]];
    let mut acc = alpha.x1.algebra().zero();
    for i in 0..2 {
        for j in 0..2 {
            if !tm[i][j].is_zero() {
                acc = &acc + &(&(a[i] * tm[i][j]) * &b[j]);
            }
        }
    }
    rational_trace(&acc)
}

/// A lattice Δx₁ + Δx₂ ⊂ D² for an order Δ; the default vectors give Δ².
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub order_basis: Vec<AlgebraElement>,
    pub plane: HyperbolicPlane,
    pub x_vectors: Option<(PlaneVector, PlaneVector)>,
}

impl LatticeSpec {
    pub fn new(plane: &HyperbolicPlane, order_basis: Vec<AlgebraElement>, x: Option<(PlaneVector, PlaneVector)>) -> Result<Self, ModuliError> {
        let coords: Vec<Vec<BigRational>> = order_basis.iter().map(|b| b.rational_coords()).collect();
        if linalg::rank(&coords) != order_basis.len() {
            return Err(ModuliError::BadOrder("basis is linearly dependent".into()));
        }
        if !Order::new(order_basis.clone()).is_ring() {
            return Err(ModuliError::BadOrder("not closed under multiplication".into()));
        }
        Ok(LatticeSpec { order_basis, plane: plane.clone(), x_vectors: x })
    }

    /// The natural order ⊕ eⁱ ℤ[θ] squared.
    pub fn natural(plane: &HyperbolicPlane) -> Result<Self, ModuliError> {
        Self::new(plane, plane.algebra().rational_basis(), None)
    }

    /// ℤ-basis {b·x₁} ∪ {b·x₂}.
    pub fn z_basis(&self) -> Vec<PlaneVector> {
        let alg = self.plane.algebra();
        let (x1, x2) = self.x_vectors.clone().unwrap_or_else(|| {
            (PlaneVector::new(alg.one(), alg.zero()), PlaneVector::new(alg.zero(), alg.one()))
        });
        [x1, x2].iter().flat_map(|x| self.order_basis.iter().map(move |b| x.left_scale(b))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    /// Gram matrix of E multiplied by `scale`.
    #[serde(serialize_with = "ser_imat")]
    pub gram: IMatrix,
    #[serde(serialize_with = "ser_q")]
    pub scale: BigRational,
    #[serde(serialize_with = "ser_ints")]
    pub elementary_divisors: Vec<BigInt>,
    pub principal: bool,
    pub antisymmetric: bool,
    #[serde(serialize_with = "ser_int")]
    pub determinant: BigInt,
}

fn rational_gcd(v: &[BigRational]) -> BigRational {
    let num = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x.numer()));
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    BigRational::new(num, den)
}

/// Gram matrix of E on the lattice, primitively scaled, with its Smith divisors.
pub fn polarization_type(lat: &LatticeSpec, t: &SkewHermitianT) -> Result<GramReport, ModuliError> {
    let basis = lat.z_basis();
    let raw: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|u| basis.iter().map(|v| riemann_form(u, v, t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let flat: Vec<BigRational> = raw.iter().flatten().cloned().collect();
    let g = rational_gcd(&flat);
    if g.is_zero() {
        return Err(ModuliError::Degenerate);
    }
    let scale = g.recip();
    let gram: IMatrix = raw.iter().map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect()).collect();
    let det = det_int(&gram);
    if det.is_zero() {
        return Err(ModuliError::Degenerate);
    }
    let n = gram.len();
    let antisymmetric = (0..n).all(|i| (0..n).all(|j| gram[i][j] == -&gram[j][i]));
    let elementary_divisors = smith_diagonal(&gram);
    let principal = elementary_divisors.iter().all(|d| d.abs().is_one());
    Ok(GramReport { gram, scale, elementary_divisors, principal, antisymmetric, determinant: det })
}

/// For each embedding of K, an embedding of L restricting to it.
fn embeddings_over_k(alg: &CyclicAlgebra) -> Vec<usize> {
    let k = alg.k_map().source();
    let kappa = alg.k_map().image();
    let gen = FieldElement::generator(k);
    (0..k.degree())
        .map(|i| {
            let target = gen.embed(i);
            (0..alg.l().degree())
                .min_by(|&a, &b| {
                    let da = (kappa.embed(a) - target).norm();
                    let db = (kappa.embed(b) - target).norm();
                    da.partial_cmp(&db).unwrap()
                })
                .expect("L has embeddings")
        })
        .collect()
}

/// Φ(a): left multiplication by a on D ⊗_ℚ ℂ = ⊕_τ M_d(ℂ), one block φ_τ(a) per
/// column of each matrix factor. Size N = dim_ℚ D.
pub fn phi_numeric(a: &AlgebraElement) -> DMatrix<Complex64> {
    let alg = a.algebra();
    let d = alg.degree();
    let m = a.matrix_rep();
    let taus = embeddings_over_k(alg);
    let n = taus.len() * d * d;
    let mut out = DMatrix::zeros(n, n);
    for (t, &idx) in taus.iter().enumerate() {
        for col in 0..d {
            let off = (t * d + col) * d;
            for i in 0..d {
                for j in 0..d {
                    out[(off + i, off + j)] = m[i][j].embed(idx);
                }
            }
        }
    }
    out
}

/// The coordinate vector matching [`phi_numeric`]: the columns of φ_τ(v) stacked.
pub fn numeric_vector(v: &AlgebraElement) -> DVector<Complex64> {
    let alg = v.algebra();
    let d = alg.degree();
    let m = v.matrix_rep();
    let taus = embeddings_over_k(alg);
    let mut out = Vec::with_capacity(taus.len() * d * d);
    for &idx in &taus {
        for col in 0..d {
            for row in m.iter() {
                out.push(row[col].embed(idx));
            }
        }
    }
    DVector::from_vec(out)
}

/// N = 2f, 4f, 2d²f by case, with f = [k : ℚ].
pub fn expected_dimension(plane: &HyperbolicPlane) -> usize {
    let f = plane.algebra().k_degree();
    let d = plane.algebra().degree();
    match plane.case() {
        PlaneCase::D1 => 2 * f,
        PlaneCase::D2 => 4 * f,
        PlaneCase::D3 => 2 * d * d * f,
    }
}

/// D = L′ ⊕ cL′ for a quaternion algebra (a, b), with L′ = ℚ(ec) and c² = a.
#[derive(Clone, Debug, Serialize)]
pub struct QuaternionSplit {
    pub ec: AlgebraElement,
    pub c: AlgebraElement,
    #[serde(serialize_with = "ser_q")]
    pub ec_squared: BigRational,
    /// c·(ec) = −a·e.
    pub relation_holds: bool,
    /// 1, ec, c, c·ec are ℚ-independent.
    pub direct_sum: bool,
    pub dimension: usize,
}

pub fn split_quaternion_basis(plane: &HyperbolicPlane) -> Result<QuaternionSplit, ModuliError> {
    if plane.case() != PlaneCase::D2 {
        return Err(ModuliError::Unsupported("needs a quaternion plane".into()));
    }
    quaternion_split(plane.algebra())
}

fn is_quaternion(alg: &CyclicAlgebra) -> bool {
    alg.degree() == 2 && alg.involution().map(|j| j.kind) == Some(InvolutionKind::First)
}

fn quaternion_split(alg: &Arc<CyclicAlgebra>) -> Result<QuaternionSplit, ModuliError> {
    let c = alg.from_l(&FieldElement::generator(alg.l()));
    let ec = &alg.e() * &c;
    let sq = &ec * &ec;
    let ec_squared = sq
        .coords()[0]
        .as_rational()
        .filter(|_| sq.is_central_scalar())
        .ok_or_else(|| ModuliError::Unsupported("(ec)^2 is not rational".into()))?;
    let a = (&c * &c).coords()[0].as_rational().ok_or_else(|| ModuliError::Unsupported("c^2 is not rational".into()))?;
    let relation_holds = &c * &ec == alg.e().scale(&-a);
    let span: Vec<Vec<BigRational>> = [alg.one(), ec.clone(), c.clone(), &c * &ec].iter().map(|x| x.rational_coords()).collect();
    let dimension = linalg::rank(&span);
    Ok(QuaternionSplit { ec, c, ec_squared, relation_holds, direct_sum: dimension == 4, dimension })
}

/// Report of the decomposition Λ′ = ⊕ mₖ·Λ_O with Λ_O = O x₁ + O x₂.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub summands: usize,
    pub summand_ranks: Vec<usize>,
    pub total_rank: usize,
    /// The union of summand bases is independent and spans Λ′.
    pub direct_sum: bool,
    /// Each summand is stable under left multiplication by O.
    pub stable: Vec<bool>,
    /// Λ′ is stable under the order Δ′.
    pub order_stable: bool,
    /// [Δ : Δ′] with Δ the natural order.
    #[serde(serialize_with = "ser_ints")]
    pub order_index: Vec<BigInt>,
    /// Largest |E| between distinct summands, when a T is supplied.
    pub cross_pairing_max: Option<String>,
}

fn vec_coords(v: &PlaneVector) -> Vec<BigRational> {
    let mut c = v.x1.rational_coords();
    c.extend(v.x2.rational_coords());
    c
}

/// Splits Λ′ = Δ′x₁ + Δ′x₂ for x₁, x₂ with coordinates in the commutative subfield
/// O ⊗ ℚ: Δ′ = ⊕ eᵏ O_L for d ≥ 3 and Δ′ = O ⊕ cO with O = ℤ[ec] for a quaternion
/// algebra. The algebra needs no involution unless `t` is given.
pub fn lattice_splitting(
    alg: &Arc<CyclicAlgebra>,
    x: (&PlaneVector, &PlaneVector),
    t: Option<&SkewHermitianT>,
) -> Result<SplittingReport, ModuliError> {
    let (multipliers, ring): (Vec<AlgebraElement>, Vec<AlgebraElement>) = if is_quaternion(alg) {
        let s = quaternion_split(alg)?;
        (vec![alg.one(), s.c.clone()], vec![alg.one(), s.ec.clone()])
    } else if alg.degree() >= 2 {
        let theta = FieldElement::generator(alg.l());
        let ring = (0..alg.l().degree() as i64).map(|j| alg.from_l(&theta.pow(j))).collect();
        let e = alg.e();
        ((0..alg.degree() as u32).map(|k| e.pow(k)).collect(), ring)
    } else {
        return Err(ModuliError::Unsupported("no splitting for d = 1".into()));
    };
    let in_subfield = |y: &AlgebraElement| -> bool {
        let span: Vec<Vec<BigRational>> = ring.iter().chain(std::iter::once(y)).map(|r| r.rational_coords()).collect();
        let base: Vec<Vec<BigRational>> = ring.iter().map(|r| r.rational_coords()).collect();
        linalg::rank(&span) == linalg::rank(&base)
    };
    for v in [x.0, x.1] {
        for y in [&v.x1, &v.x2] {
            if !in_subfield(y) {
                return Err(ModuliError::NotInSubfield(y.to_string()));
            }
        }
    }
    let summand_gens: Vec<Vec<PlaneVector>> = multipliers
        .iter()
        .map(|m| ring.iter().flat_map(|r| [x.0, x.1].map(|v| v.left_scale(&(m * r)))).collect())
        .collect();
    let lattices: Vec<Lattice> = summand_gens
        .iter()
        .map(|g| Lattice::from_generators(&g.iter().map(vec_coords).collect::<Vec<_>>()))
        .collect();
    let summand_ranks: Vec<usize> = lattices.iter().map(|l| l.rank()).collect();
    let delta_prime: Vec<AlgebraElement> = multipliers.iter().flat_map(|m| ring.iter().map(move |r| m * r)).collect();
    let order_prime = Order::new(delta_prime.clone());
    if !order_prime.is_ring() {
        return Err(ModuliError::BadOrder("the summand order is not a ring".into()));
    }
    let whole_gens: Vec<Vec<BigRational>> =
        [x.0, x.1].iter().flat_map(|v| delta_prime.iter().map(move |b| vec_coords(&v.left_scale(b)))).collect();
    let whole = Lattice::from_generators(&whole_gens);
    let union: Vec<Vec<BigRational>> = lattices
        .iter()
        .flat_map(|l| l.basis.iter().map(move |r| r.iter().map(|z| BigRational::new(z.clone(), l.scale.clone())).collect()))
        .collect();
    let total_rank: usize = summand_ranks.iter().sum();
    let direct_sum = linalg::rank(&union) == total_rank && Lattice::from_generators(&union).same_as(&whole);
    let stable = summand_gens
        .iter()
        .zip(&lattices)
        .map(|(gens, lat)| gens.iter().all(|v| ring.iter().all(|r| lat.contains(&vec_coords(&v.left_scale(r))))))
        .collect();
    let all_gens: Vec<&PlaneVector> = summand_gens.iter().flatten().collect();
    let order_stable = all_gens.iter().all(|v| delta_prime.iter().all(|b| whole.contains(&vec_coords(&v.left_scale(b)))));
    let natural = Order::natural(alg);
    let order_index = natural.index_of(&order_prime).into_iter().collect();
    let cross = match t {
        Some(t) => {
            let mut cross = BigRational::zero();
            for (i, gi) in summand_gens.iter().enumerate() {
                for gj in summand_gens.iter().skip(i + 1) {
                    for u in gi {
                        for v in gj {
                            cross = cross.max(riemann_form(u, v, t)?.abs());
                        }
                    }
                }
            }
            Some(crate::exactfield::poly::rational_to_string(&cross))
        }
        None => None,
    };
    Ok(SplittingReport {
        summands: multipliers.len(),
        summand_ranks,
        total_rank,
        direct_sum,
        stable,
        order_stable,
        order_index,
        cross_pairing_max: cross,
    })
}
