use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::embed::{find_roots, RootError};
use super::poly::{self, QPoly, ScreenError};
use super::FieldError;
use crate::linalg::{self, Scalar};

/// Absolute number field ℚ[x]/(f) with f monic irreducible and integral.
#[derive(Debug)]
pub struct NumberField {
    label: String,
    minpoly: QPoly,
    degree: usize,
    /// Integer coordinates of θ^{n+i} for i in 0..n-1.
    reduction: Vec<Vec<BigInt>>,
    roots: Vec<Complex64>,
}

impl NumberField {
    /// Builds a field after checking that `minpoly` is monic, integral and irreducible.
    pub fn new(label: &str, minpoly: QPoly) -> Result<Arc<Self>, FieldError> {
        let mut f = minpoly;
        poly::trim(&mut f);
        let n = poly::degree(&f).ok_or(FieldError::ZeroPolynomial)?;
        if n == 0 {
            return Err(FieldError::ZeroPolynomial);
        }
        if !f[n].is_one() {
            return Err(FieldError::NotMonic);
        }
        if f.iter().any(|c| !c.is_integer()) {
            return Err(FieldError::NotIntegral);
        }
        if n > 1 {
            match poly::find_rational_factor(&f) {
                Ok(Some(g)) => {
                    return Err(FieldError::Reducible(g.iter().map(poly::rational_to_string).collect()))
                }
                Ok(None) => {}
                Err(ScreenError::NotIntegralMonic) => return Err(FieldError::NotIntegral),
                Err(e) => return Err(FieldError::Screen(e.to_string())),
            }
        }
        let roots = find_roots(&f).map_err(|RootError(r)| FieldError::RootRefinement(r))?;
        let fi: Vec<BigInt> = f.iter().map(|c| c.to_integer()).collect();
        let mut reduction = Vec::with_capacity(n);
        let mut cur: Vec<BigInt> = fi[..n].iter().map(|c| -c).collect();
        for _ in 0..n {
            reduction.push(cur.clone());
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] -= &top * &fi[i];
            }
            cur = next;
        }
        Ok(Arc::new(NumberField { label: label.to_string(), minpoly: f, degree: n, reduction, roots }))
    }

    /// Builds a field from integer minimal-polynomial coefficients, lowest first.
    pub fn from_ints(label: &str, coeffs: &[i64]) -> Result<Arc<Self>, FieldError> {
        Self::new(label, coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    /// The field ℚ, as a degree-one extension with generator 0.
    pub fn rationals() -> Arc<Self> {
        Self::from_ints("Q", &[0, 1]).expect("x is irreducible")
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn minpoly(&self) -> &[BigRational] {
        &self.minpoly
    }
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn same(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || (self.label == other.label && self.minpoly == other.minpoly)
    }

    /// Reduces integer coefficients of length at most 2n−1 modulo the minimal polynomial.
    fn reduce_int(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.degree;
        if c.len() > n {
            for k in n..c.len() {
                let top = std::mem::take(&mut c[k]);
                if top.is_zero() {
                    continue;
                }
                let row = &self.reduction[k - n];
                for i in 0..n {
                    c[i] += &top * &row[i];
                }
            }
            c.truncate(n);
        }
        c.resize(n, BigInt::zero());
        c
    }
}

/// Element of a [`NumberField`] in the power basis 1, θ, …, θ^{n−1}.
///
/// Stored as integer numerators over a positive common denominator, kept in
/// lowest terms so that equality is structural.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.den == other.den && self.num == other.num
    }
}
impl Eq for FieldElement {}

fn normalized(field: &Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> FieldElement {
    if den.is_negative() {
        den = -den;
        for x in num.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
    let g = num.iter().fold(den.clone(), |g, x| g.gcd(x));
    if !g.is_one() && !g.is_zero() {
        for x in num.iter_mut() {
            *x /= &g;
        }
        den /= &g;
    }
    if num.iter().all(|x| x.is_zero()) {
        den = BigInt::one();
    }
    FieldElement { field: field.clone(), num, den }
}

fn from_rationals(field: &Arc<NumberField>, coords: &[BigRational]) -> FieldElement {
    let den = coords.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let num = coords.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    normalized(field, num, den)
}

/// ℚ-linear map on power-basis coordinates, stored as an integer matrix over a denominator.
#[derive(Clone, Debug)]
struct LinMap {
    m: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl LinMap {
    fn from_columns(cols: &[FieldElement]) -> Self {
        let den = cols.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.den));
        let rows = cols.first().map_or(0, |c| c.num.len());
        let m = (0..rows)
            .map(|i| cols.iter().map(|c| &c.num[i] * (&den / &c.den)).collect())
            .collect();
        LinMap { m, den }
    }

    fn from_rational_rows(rows: &[Vec<BigRational>]) -> Self {
        let den = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let m = rows.iter().map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect()).collect();
        LinMap { m, den }
    }

    fn apply(&self, target: &Arc<NumberField>, x: &FieldElement) -> FieldElement {
        let num = self.m.iter().map(|row| row.iter().zip(&x.num).map(|(a, b)| a * b).sum()).collect();
        normalized(target, num, &x.den * &self.den)
    }

    fn rational_rows(&self) -> Vec<Vec<BigRational>> {
        self.m
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self, FieldError> {
        if coords.len() != field.degree {
            return Err(FieldError::CoordinateLength { expected: field.degree, got: coords.len() });
        }
        Ok(from_rationals(field, &coords))
    }

    /// Element with small integer coordinates; panics on a length mismatch.
    pub fn from_ints(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        assert_eq!(coords.len(), field.degree, "coordinate length");
        normalized(field, coords.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    /// Reduces an arbitrary-length coefficient vector modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        let r = poly::divrem(&coeffs, &field.minpoly).1;
        let mut c = r;
        c.resize(field.degree, BigRational::zero());
        from_rationals(field, &c)
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = q.numer().clone();
        normalized(field, num, q.denom().clone())
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = BigInt::from(n);
        FieldElement { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The power-basis generator θ.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Power-basis coordinates.
    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect()
    }

    /// The `i`-th coordinate.
    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..].iter().all(|c| c.is_zero()).then(|| self.coord(0))
    }

    /// True when all power-basis coordinates are integers.
    pub fn has_integral_coords(&self) -> bool {
        self.den.is_one()
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field.label.clone(), other.field.label.clone()))
        }
    }

    fn combine(&self, o: &Self, sign: bool) -> Self {
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| if sign { a + b } else { a - b }).collect();
            return normalized(&self.field, num, self.den.clone());
        }
        let l = self.den.lcm(&o.den);
        let fa = &l / &self.den;
        let fb = &l / &o.den;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| if sign { a * &fa + b * &fb } else { a * &fa - b * &fb })
            .collect();
        normalized(&self.field, num, l)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, FieldError> {
        self.check(o)?;
        Ok(self.combine(o, true))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, FieldError> {
        self.check(o)?;
        Ok(self.combine(o, false))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, FieldError> {
        self.check(o)?;
        let n = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(normalized(&self.field, self.field.reduce_int(prod), &self.den * &o.den))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, FieldError> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo the minimal polynomial.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.field.degree == 1 {
            return Ok(normalized(&self.field, vec![self.den.clone()], self.num[0].clone()));
        }
        let nums: Vec<BigRational> = self.num.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let (g, s) = poly::half_ext_gcd(&nums, &self.field.minpoly);
        if poly::degree(&g) != Some(0) {
            return Err(FieldError::Reducible(g.iter().map(poly::rational_to_string).collect()));
        }
        let d = BigRational::from_integer(self.den.clone());
        Ok(FieldElement::from_poly(&self.field, poly::scale(&s, &d)))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        normalized(&self.field, self.num.iter().map(|c| c * q.numer()).collect(), &self.den * q.denom())
    }

    /// Integer power; negative exponents invert (panics on 0 to a negative power).
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = FieldElement::one(&self.field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `self` on the power basis (column j is self·θ^j).
    pub fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.degree;
        let theta = FieldElement::generator(&self.field);
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            cols.push(cur.coords());
            cur = &cur * &theta;
        }
        linalg::transpose(&cols)
    }

    /// Absolute trace Tr_{F|ℚ}.
    pub fn abs_trace(&self) -> BigRational {
        let m = self.mul_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Absolute norm N_{F|ℚ}.
    pub fn abs_norm(&self) -> BigRational {
        linalg::det(&self.mul_matrix())
    }

    /// Characteristic polynomial of multiplication by `self`, lowest degree first.
    pub fn charpoly(&self) -> QPoly {
        // Faddeev–LeVerrier on the multiplication matrix
        let m = self.mul_matrix();
        let n = m.len();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut prev = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            let am = linalg::matmul(&m, &prev);
            let mk: Vec<Vec<BigRational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { &am[i][j] + &coeffs[n - k + 1] } else { am[i][j].clone() })
                        .collect()
                })
                .collect();
            let amk = linalg::matmul(&m, &mk);
            let tr: BigRational = (0..n).map(|i| amk[i][i].clone()).sum();
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
            prev = mk;
        }
        coeffs
    }

    /// Numeric image under the `i`-th complex embedding; panics if `i >= degree`.
    pub fn embed(&self, i: usize) -> Complex64 {
        let r = self.field.roots[i];
        poly::eval_complex(&self.coords(), r)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords().iter().map(poly::rational_to_string).collect()
    }

    /// Rational coordinates as `f64`, for seeding numeric code.
    pub fn coords_f64(&self) -> Vec<f64> {
        self.coords().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field.label, self.to_strings().join(", "))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = poly::rational_to_string(c);
            terms.push(match i {
                0 => cs,
                1 => format!("{cs}*t"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &'a FieldElement) -> FieldElement {
                self.$f(o).expect("field mismatch")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$f(&o).expect("field mismatch")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}
impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Scalar for FieldElement {
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
        self.inv().expect("pivot is nonzero")
    }
    fn zero_like(&self) -> Self {
        FieldElement::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        FieldElement::one(&self.field)
    }
}

/// A field automorphism given by the image of the generator.
#[derive(Clone, Debug)]
pub struct Automorphism {
    field: Arc<NumberField>,
    image: FieldElement,
    /// Column j holds the coordinates of image^j.
    map: LinMap,
    order: usize,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

fn powers(x: &FieldElement, count: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(count);
    let mut cur = FieldElement::one(x.field());
    for _ in 0..count {
        out.push(cur.clone());
        cur = &cur * x;
    }
    out
}

/// Evaluates a rational polynomial at a field element.
pub fn eval_poly(p: &[BigRational], x: &FieldElement) -> FieldElement {
    p.iter().rev().fold(FieldElement::zero(x.field()), |acc, c| &(&acc * x) + &FieldElement::from_rational(x.field(), c.clone()))
}

impl Automorphism {
    pub fn new(field: &Arc<NumberField>, image: FieldElement) -> Result<Self, FieldError> {
        if !image.field.same(field) {
            return Err(FieldError::Mismatch(field.label.clone(), image.field.label.clone()));
        }
        if !eval_poly(&field.minpoly, &image).is_zero() {
            return Err(FieldError::NotARoot);
        }
        let map = LinMap::from_columns(&powers(&image, field.degree));
        let mut a = Automorphism { field: field.clone(), image, map, order: 0 };
        let theta = FieldElement::generator(field);
        let mut cur = a.image.clone();
        for k in 1..=field.degree {
            if cur == theta {
                a.order = k;
                return Ok(a);
            }
            cur = a.apply(&cur);
        }
        Err(FieldError::InfiniteOrder)
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        Self::new(field, FieldElement::generator(field)).expect("identity")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn image(&self) -> &FieldElement {
        &self.image
    }
    pub fn order(&self) -> usize {
        self.order
    }

    /// Applies the automorphism; panics on a field mismatch.
    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        self.try_apply(x).expect("field mismatch")
    }

    pub fn try_apply(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if !x.field.same(&self.field) {
            return Err(FieldError::Mismatch(self.field.label.clone(), x.field.label.clone()));
        }
        Ok(self.map.apply(&self.field, x))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism::new(&self.field, self.apply(&other.image)).expect("composition of automorphisms")
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Automorphism {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut acc = Automorphism::identity(&self.field);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn inverse(&self) -> Automorphism {
        self.pow(-1)
    }
}

/// Inclusion of `source` into `target` given by the image of the source generator.
#[derive(Clone, Debug)]
pub struct TowerMap {
    source: Arc<NumberField>,
    target: Arc<NumberField>,
    image: FieldElement,
    /// target_degree × source_degree; column j is image^j.
    map: LinMap,
    /// Target coordinates that determine a preimage, with the inverse of that square block.
    pivots: Vec<usize>,
    left_inverse: LinMap,
}

impl TowerMap {
    pub fn new(source: &Arc<NumberField>, target: &Arc<NumberField>, image: FieldElement) -> Result<Self, FieldError> {
        if !image.field.same(target) {
            return Err(FieldError::Mismatch(target.label.clone(), image.field.label.clone()));
        }
        if !eval_poly(&source.minpoly, &image).is_zero() {
            return Err(FieldError::NotARoot);
        }
        let map = LinMap::from_columns(&powers(&image, source.degree));
        let rows = map.rational_rows();
        let mut t = linalg::transpose(&rows);
        let pivots = linalg::rref(&mut t);
        if pivots.len() != source.degree {
            return Err(FieldError::NotARoot);
        }
        let block: Vec<Vec<BigRational>> = pivots.iter().map(|&i| rows[i].clone()).collect();
        let inv = linalg::inverse(&block).ok_or(FieldError::NotARoot)?;
        let left_inverse = LinMap::from_rational_rows(&inv);
        Ok(TowerMap { source: source.clone(), target: target.clone(), image, map, pivots, left_inverse })
    }

    /// The inclusion ℚ → `target`.
    pub fn from_rationals(target: &Arc<NumberField>) -> Self {
        let q = NumberField::rationals();
        Self::new(&q, target, FieldElement::zero(target)).expect("0 is the root of x")
    }

    pub fn source(&self) -> &Arc<NumberField> {
        &self.source
    }
    pub fn target(&self) -> &Arc<NumberField> {
        &self.target
    }
    pub fn image(&self) -> &FieldElement {
        &self.image
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        assert!(x.field.same(&self.source), "field mismatch");
        self.map.apply(&self.target, x)
    }

    /// Preimage of `y` in the source field, if `y` lies in the image.
    pub fn descend(&self, y: &FieldElement) -> Option<FieldElement> {
        if !y.field.same(&self.target) {
            return None;
        }
        let sel = FieldElement {
            field: self.source.clone(),
            num: self.pivots.iter().map(|&i| y.num[i].clone()).collect(),
            den: y.den.clone(),
        };
        let x = self.left_inverse.apply(&self.source, &sel);
        (self.apply(&x) == *y).then_some(x)
    }

    pub fn contains(&self, y: &FieldElement) -> bool {
        self.descend(y).is_some()
    }
}

/// A Galois extension `target | source` registered with its automorphism group.
#[derive(Clone, Debug)]
pub struct Extension {
    map: TowerMap,
    group: Vec<Automorphism>,
}

impl Extension {
    /// Registers the extension; the group must fix the subfield and have order equal to the relative degree.
    pub fn new(map: TowerMap, group: Vec<Automorphism>) -> Result<Self, FieldError> {
        let rel = map.target.degree / map.source.degree;
        if !map.target.degree.is_multiple_of(map.source.degree) || group.len() != rel {
            return Err(FieldError::BadExtension("group order differs from relative degree".into()));
        }
        for g in &group {
            if g.apply(&map.image) != map.image {
                return Err(FieldError::BadExtension("automorphism moves the subfield".into()));
            }
        }
        for (i, g) in group.iter().enumerate() {
            if group[..i].contains(g) {
                return Err(FieldError::BadExtension("repeated automorphism".into()));
            }
        }
        Ok(Extension { map, group })
    }

    /// Registers the cyclic extension generated by `sigma`.
    pub fn cyclic(map: TowerMap, sigma: &Automorphism) -> Result<Self, FieldError> {
        let group = (0..sigma.order() as i64).map(|k| sigma.pow(k)).collect();
        Self::new(map, group)
    }

    pub fn map(&self) -> &TowerMap {
        &self.map
    }
    pub fn group(&self) -> &[Automorphism] {
        &self.group
    }

    /// Relative trace, returned in the subfield.
    pub fn trace(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let s = self.group.iter().fold(FieldElement::zero(&self.map.target), |acc, g| &acc + &g.apply(x));
        self.map.descend(&s).ok_or(FieldError::DescentFailed)
    }

    /// Relative norm, returned in the subfield.
    pub fn norm(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let p = self.group.iter().fold(FieldElement::one(&self.map.target), |acc, g| &acc * &g.apply(x));
        self.map.descend(&p).ok_or(FieldError::DescentFailed)
    }
}

/// Which relative invariant to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceOrNorm {
    Trace,
    Norm,
}

pub fn relative_trace_norm(x: &FieldElement, ext: &Extension, which: TraceOrNorm) -> Result<FieldElement, FieldError> {
    match which {
        TraceOrNorm::Trace => ext.trace(x),
        TraceOrNorm::Norm => ext.norm(x),
    }
}

/// Arithmetic operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}
