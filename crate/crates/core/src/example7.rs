//! The degree-3 cyclic algebra D = (ℚ(ζ₇)/ℚ(√−7), ζ ↦ ζ², γ) with γ² + γ + 2 = 0.
//!
//! Builds the tower ℚ ⊂ ℓ, ℚ(√−7) ⊂ ℚ(ζ₇), certifies that D is a division algebra
//! through its local invariants over 2, decides whether the invariants allow an
//! involution of the second kind, probes the norm equation N_{ℓ|ℚ}(ω) = 2 and
//! reports the number of cusps.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::catalog::CyclotomicSeven;
use crate::cusps::{self, Form};
use crate::cycalg::{standard, CyclicAlgebra};
use crate::exactfield::modp::{format_fp, is_irreducible_mod_p, multiplicative_order};
use crate::exactfield::{factor_poly_mod_p, FieldElement};
use crate::hermplane::HyperbolicPlane;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExampleError {
    #[error("certificate step failed: {0}")]
    Failed(String),
    #[error("step {0} requires an earlier step")]
    OutOfOrder(&'static str),
    #[error("cusp computation: {0}")]
    Cusps(String),
}

/// A named exact identity with its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

fn assertion(name: &str, holds: bool, detail: impl Into<String>) -> Assertion {
    Assertion { name: name.into(), holds, detail: detail.into() }
}

fn ser_rational<S: Serializer>(q: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Local data of D at a prime of K.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDatum {
    pub prime: String,
    /// Residue degree of L|K at the prime.
    pub residue_degree: u32,
    pub ramification_index: u32,
    /// Valuation of γ at the prime.
    pub valuation: i64,
    /// Hasse invariant in (−1/2, 1/2].
    #[serde(serialize_with = "ser_rational")]
    pub invariant: Rational64,
    pub method: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Conclusions {
    pub is_division_algebra: Option<bool>,
    pub landherr_involution_exists: Option<bool>,
    pub cusp_count: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExampleCertificate {
    pub tower_checks: Vec<Assertion>,
    pub division_checks: Vec<Assertion>,
    pub landherr_checks: Vec<Assertion>,
    pub local_data: Vec<LocalDatum>,
    pub conclusions: Conclusions,
}

/// The tower together with D and its companion (L/K, σ, 2γ̄) which carries an involution.
#[derive(Clone, Debug)]
pub struct Example {
    pub tower: CyclotomicSeven,
    pub algebra: Arc<CyclicAlgebra>,
    pub companion: Arc<CyclicAlgebra>,
}

/// Reduces a rational modulo 1 into (−1/2, 1/2].
pub fn mod_one(q: Rational64) -> Rational64 {
    let f = q - q.floor();
    if f > Rational64::new(1, 2) {
        f - 1
    } else {
        f
    }
}

impl ExampleCertificate {
    pub fn all_assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.tower_checks.iter().chain(&self.division_checks).chain(&self.landherr_checks)
    }

    pub fn invariant(&self, prime: &str) -> Option<Rational64> {
        self.local_data.iter().find(|l| l.prime == prime).map(|l| l.invariant)
    }

    /// Sum of the recorded invariants modulo 1.
    pub fn invariant_sum(&self) -> Rational64 {
        mod_one(self.local_data.iter().map(|l| l.invariant).sum())
    }

    /// Recomputes the whole chain from scratch and compares.
    pub fn reverify(&self) -> bool {
        match full_certificate() {
            Ok((_, fresh)) => fresh == *self,
            Err(_) => false,
        }
    }
}

fn tower_checks(t: &CyclotomicSeven) -> Vec<Assertion> {
    let l = &t.l;
    let g = t.k_in_l.image().clone();
    let z = |j| t.zeta(j);
    let eta = |j| t.eta(j);
    let one = FieldElement::one(l);
    let two = FieldElement::from_int(l, 2);
    let sum = |js: &[i64]| js.iter().fold(FieldElement::zero(l), |acc, &j| &acc + &z(j));
    let e1 = eta(1);
    let sqrt = &(&g + &g) + &one;
    vec![
        assertion("sigma maps zeta to zeta^2", t.sigma.apply(&z(1)) == z(2), "sigma(zeta) = zeta^2"),
        assertion("sigma has order 3", t.sigma.order() == 3, format!("order {}", t.sigma.order())),
        assertion("gamma is zeta + zeta^2 + zeta^4", g == sum(&[1, 2, 4]), g.to_string()),
        assertion("gamma^2 + gamma + 2 = 0", (&(&(&g * &g) + &g) + &two).is_zero(), "image of the generator of K"),
        assertion("sigma fixes gamma", t.sigma.apply(&g) == g, "K is the fixed field of sigma"),
        assertion("conjugate of zeta is zeta^6", t.rho.apply(&z(1)) == z(6), "rho(zeta) = zeta^-1"),
        assertion("conjugate of gamma is zeta^3 + zeta^5 + zeta^6", t.rho.apply(&g) == sum(&[3, 5, 6]), "rho(gamma)"),
        assertion(
            "(2 gamma + 1)^2 = -7",
            &sqrt * &sqrt == FieldElement::from_int(l, -7),
            "2 gamma + 1 is a square root of -7",
        ),
        assertion("rho commutes with sigma", t.rho.compose(&t.sigma) == t.sigma.compose(&t.rho), "Gal(L/Q) is abelian"),
        assertion(
            "eta3 = -eta1 - eta2 - 1",
            eta(3) == &(&(-&e1) - &eta(2)) - &one,
            "eta_j = zeta^j + zeta^-j",
        ),
        assertion(
            "eta1^3 + eta1^2 - 2 eta1 - 1 = 0",
            (&(&(&(&e1 * &e1) * &e1) + &(&e1 * &e1)) - &(&(&e1 + &e1) + &one)).is_zero(),
            "minimal polynomial of the real cubic subfield",
        ),
        assertion("eta2 = eta1^2 - 2", eta(2) == &(&e1 * &e1) - &two, "O_l = Z + eta1 Z + eta2 Z"),
        assertion(
            "sigma permutes eta1 -> eta2 -> eta3",
            t.sigma.apply(&e1) == eta(2) && t.sigma.apply(&eta(2)) == eta(3),
            "sigma restricts to a generator of Gal(l/Q)",
        ),
        assertion(
            "l embeds through eta1",
            t.ell_in_l.image() == &e1,
            "eta1 -> zeta + zeta^6",
        ),
    ]
}

/// The example with its tower assertions recorded.
pub fn build_example() -> (Example, ExampleCertificate) {
    let tower = CyclotomicSeven::new();
    let algebra = standard::seventh_algebra(&tower);
    let companion = standard::seventh_companion(&tower);
    let cert = ExampleCertificate { tower_checks: tower_checks(&tower), ..Default::default() };
    (Example { tower, algebra, companion }, cert)
}

/// Largest k with π^k dividing x in the ring of integers of a field whose power basis is integral.
pub fn valuation(x: &FieldElement, pi: &FieldElement) -> i64 {
    let mut y = x.clone();
    let mut k = 0;
    while !y.is_zero() {
        let q = y.try_div(pi).expect("nonzero");
        if !q.has_integral_coords() {
            break;
        }
        y = q;
        k += 1;
    }
    k
}

fn in_two_ol(x: &FieldElement) -> bool {
    x.scale(&num_rational::BigRational::new(1.into(), 2.into())).has_integral_coords()
}

/// σ(x) ≡ x² modulo 2O_L on the integral basis ζ⁰, …, ζ⁵ and on products of pairs.
fn frobenius_is_squaring(t: &CyclotomicSeven) -> bool {
    let basis: Vec<FieldElement> = (0..6).map(|j| t.zeta(j)).collect();
    let samples = basis
        .iter()
        .flat_map(|a| basis.iter().map(move |b| a + b))
        .chain(basis.iter().cloned());
    samples.into_iter().all(|x| in_two_ol(&(&t.sigma.apply(&x) - &(&x * &x))))
}

fn int_poly(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

/// Local invariants at the primes over 2 and the conclusion that D is a division algebra.
pub fn division_certificate(ex: &Example, cert: &mut ExampleCertificate) -> Result<(), ExampleError> {
    if cert.tower_checks.is_empty() {
        return Err(ExampleError::OutOfOrder("division_certificate"));
    }
    let t = &ex.tower;
    let gamma = t.gamma();
    let gbar = t.k.conj(&gamma);
    let norm = t.k.norm(&gamma);
    let order = multiplicative_order(2, 7);
    let fac = factor_poly_mod_p(&int_poly(&[1, 1, 1, 1, 1, 1, 1]), 2).map_err(|e| ExampleError::Failed(e.to_string()))?;
    let cubics = fac.factors.len() == 2
        && fac.factors.iter().all(|f| f.len() == 4 && is_irreducible_mod_p(f, 2))
        && fac.product() == vec![1, 1, 1, 1, 1, 1, 1];
    let (vp, vpbar) = (valuation(&gamma, &gamma), valuation(&gamma, &gbar));
    let checks = vec![
        assertion("N(gamma) = 2", norm == num_rational::BigRational::from_integer(2.into()), format!("N(gamma) = {norm}")),
        assertion("order of 2 mod 7 is 3", order == Some(3), format!("{order:?}")),
        assertion(
            "Phi7 mod 2 is a product of two irreducible cubics",
            cubics,
            fac.factors.iter().map(|f| format!("({})", format_fp(f))).collect::<Vec<_>>().join(""),
        ),
        assertion("v_p(gamma) = 1 at p = (gamma)", vp == 1, format!("{vp}")),
        assertion("v_pbar(gamma) = 0 at pbar = (gammabar)", vpbar == 0, format!("{vpbar}")),
        assertion("gamma does not divide gammabar", !gbar.try_div(&gamma).expect("nonzero").has_integral_coords(), "gammabar/gamma"),
        assertion("Frobenius over 2 is sigma", frobenius_is_squaring(t), "sigma(x) - x^2 in 2 O_L"),
    ];
    if let Some(bad) = checks.iter().find(|a| !a.holds) {
        return Err(ExampleError::Failed(format!("{}: {}", bad.name, bad.detail)));
    }
    cert.division_checks = checks;
    let method = "unramified: invariant = v(gamma)/3 with Frobenius = sigma".to_string();
    cert.local_data = vec![
        LocalDatum {
            prime: "(gamma)".into(),
            residue_degree: 3,
            ramification_index: 1,
            valuation: vp,
            invariant: mod_one(Rational64::new(vp, 3)),
            method: method.clone(),
        },
        LocalDatum {
            prime: "(gammabar)".into(),
            residue_degree: 3,
            ramification_index: 1,
            valuation: vpbar,
            invariant: mod_one(Rational64::new(vpbar, 3)),
            method,
        },
    ];
    let nonsplit = cert.local_data.iter().any(|l| !l.invariant.is_zero());
    cert.conclusions.is_division_algebra = Some(nonsplit && ex.algebra.degree() == 3);
    Ok(())
}

/// Residue of an element a + bγ of ℤ[γ] in O_K/(√−7) = 𝔽₇.
fn residue_mod_sqrt_minus_seven(x: &FieldElement) -> Option<i64> {
    let r = (0..7).find(|r| (r * r + r + 2) % 7 == 0)?;
    let c = x.coords();
    if !x.has_integral_coords() {
        return None;
    }
    let (a, b) = (c[0].to_integer().to_i64()?, c[1].to_integer().to_i64()?);
    Some((a + b * r).rem_euclid(7))
}

/// Invariant at (√−7), the involution criterion and the conclusion.
///
/// At the tamely ramified prime (√−7) a unit is a local norm exactly when its
/// residue is a cube in 𝔽₇; the value of the invariant then follows from the
/// sum formula, all other places being split.
pub fn landherr_certificate(ex: &Example, cert: &mut ExampleCertificate) -> Result<(), ExampleError> {
    if cert.local_data.len() != 2 {
        return Err(ExampleError::OutOfOrder("landherr_certificate"));
    }
    let gamma = ex.tower.gamma();
    let norm = ex.tower.k.norm(&gamma).to_integer();
    let unit = norm.gcd(&BigInt::from(7)) == BigInt::from(1);
    let res = residue_mod_sqrt_minus_seven(&gamma).ok_or_else(|| ExampleError::Failed("residue of gamma".into()))?;
    let cube = (1..7).any(|x: i64| x.pow(3) % 7 == res);
    let (ip, ipbar) = (cert.local_data[0].invariant, cert.local_data[1].invariant);
    let iq = mod_one(-(ip + ipbar));
    let consistent = cube == iq.is_zero();
    cert.local_data.push(LocalDatum {
        prime: "(sqrt(-7))".into(),
        residue_degree: 1,
        ramification_index: 3,
        valuation: 0,
        invariant: iq,
        method: format!("sum formula; residue of gamma is {res}, {} in F7", if cube { "a cube" } else { "not a cube" }),
    });
    let pair_sum = mod_one(ip + ipbar);
    cert.landherr_checks = vec![
        assertion("inv_p + inv_pbar = 0 mod 1", pair_sum.is_zero(), format!("{ip} + {ipbar} = {pair_sum}")),
        assertion("gamma is a unit mod (sqrt(-7))", unit, format!("gcd(N(gamma), 7) = gcd({norm}, 7)")),
        assertion(
            "inv at (sqrt(-7)) = 0",
            iq.is_zero(),
            format!("gamma = {res} mod (sqrt(-7)); invariant {iq}"),
        ),
        assertion("cube test agrees with the sum formula", consistent, format!("cube: {cube}, invariant {iq}")),
    ];
    if !consistent || !unit {
        return Err(ExampleError::Failed("local data at (sqrt(-7)) is inconsistent".into()));
    }
    cert.conclusions.landherr_involution_exists = Some(pair_sum.is_zero() && iq.is_zero());
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspReport {
    pub count: usize,
    pub rule: String,
    pub class_number_k: usize,
    pub reduced_forms: Vec<Form>,
}

/// Cusps of the arithmetic group on the plane over the companion algebra.
pub fn example_cusp_report(ex: &Example) -> Result<CuspReport, ExampleError> {
    let err = |e: String| ExampleError::Cusps(e);
    let plane = HyperbolicPlane::new(ex.companion.clone()).map_err(|e| err(e.to_string()))?;
    let count = cusps::cusp_count(&plane).map_err(|e| err(e.to_string()))?;
    let forms = cusps::reduced_forms(-7).map_err(|e| err(e.to_string()))?;
    Ok(CuspReport {
        count: count.count,
        rule: count.rule,
        class_number_k: count.big_k_class_number.unwrap_or(0),
        reduced_forms: forms,
    })
}

/// Runs every step in order.
pub fn full_certificate() -> Result<(Example, ExampleCertificate), ExampleError> {
    let (ex, mut cert) = build_example();
    division_certificate(&ex, &mut cert)?;
    landherr_certificate(&ex, &mut cert)?;
    cert.conclusions.cusp_count = Some(example_cusp_report(&ex)?.count);
    Ok((ex, cert))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormProbe {
    pub target: i64,
    pub bound: i64,
    pub candidates: usize,
    /// Coordinates in the basis 1, η₁, η₁² and the denominator.
    pub witness: Option<(Vec<i64>, i64)>,
    pub outcome: String,
    pub sample_norms: Vec<(String, String)>,
    /// x³ + x² − 2x − 1 irreducible mod 2: 2 is inert in ℓ, so every norm has 2-adic valuation ≡ 0 mod 3.
    pub two_inert_in_l: bool,
}

/// Searches ω = (a + bη₁ + cη₁²)/m with |a|, |b|, |c| ≤ bound and 1 ≤ m ≤ bound for N_{ℓ|ℚ}(ω) = 2.
pub fn norm_equation_probe(ex: &Example, bound: i64) -> NormProbe {
    let ell = &ex.tower.ell;
    let target = 2i64;
    let mut candidates = 0;
    let mut witness = None;
    'outer: for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let x = FieldElement::from_ints(ell, &[a, b, c]);
                if x.is_zero() {
                    continue;
                }
                let n = x.abs_norm();
                for m in 1..=bound {
                    candidates += 1;
                    if n == num_rational::BigRational::from_integer(BigInt::from(target * m * m * m)) {
                        witness = Some((vec![a, b, c], m));
                        break 'outer;
                    }
                }
            }
        }
    }
    let e1 = FieldElement::generator(ell);
    let one = FieldElement::one(ell);
    let sample_norms = vec![
        ("eta1".to_string(), e1.abs_norm().to_string()),
        ("1 + eta1".to_string(), (&one + &e1).abs_norm().to_string()),
    ];
    let two_inert = is_irreducible_mod_p(&[1, 0, 1, 1], 2);
    let outcome = match &witness {
        Some((c, m)) => format!("found ({}, {}, {})/{m}", c[0], c[1], c[2]),
        None => format!("none up to bound {bound}"),
    };
    NormProbe { target, bound, candidates, witness, outcome, sample_norms, two_inert_in_l: two_inert }
}

/// True when `n` is a norm value compatible with 2 inert in ℓ: v₂(n) ≡ 0 mod 3.
pub fn two_adic_norm_compatible(n: &num_rational::BigRational) -> bool {
    if n.is_zero() {
        return true;
    }
    let v = |x: &BigInt| -> i64 {
        let mut x = x.abs();
        let mut k = 0;
        while x.is_even() && !x.is_zero() {
            x /= 2;
            k += 1;
        }
        k
    };
    (v(n.numer()) - v(n.denom())).rem_euclid(3) == 0
}
