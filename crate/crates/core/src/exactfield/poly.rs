//! Dense univariate polynomials over ℚ, stored lowest degree first.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut r: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect();
    trim(&mut r);
    r
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let nb: QPoly = b.iter().map(|c| -c).collect();
    add(a, &nb)
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

pub fn scale(a: &[BigRational], s: &BigRational) -> QPoly {
    let mut r: QPoly = a.iter().map(|c| c * s).collect();
    trim(&mut r);
    r
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = b[db].recip();
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let mut quo = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] * &lead_inv;
        let shift = dr - db;
        for (j, c) in b.iter().enumerate().take(db + 1) {
            r[shift + j] -= &f * c;
        }
        quo[shift] = f;
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s·a ≡ g (mod m)`.
pub fn half_ext_gcd(a: &[BigRational], m: &[BigRational]) -> (QPoly, QPoly) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (qt, rem) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&qt, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let lead = r0.last().cloned().unwrap_or_else(BigRational::one).recip();
    (scale(&r0, &lead), scale(&s0, &lead))
}

/// Evaluates a rational polynomial at a complex point.
pub fn eval_complex(p: &[BigRational], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    let mut r: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut r);
    r
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Error raised when the brute-force irreducibility screen cannot run.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScreenError {
    #[error("irreducibility screen needs a monic polynomial with integer coefficients")]
    NotIntegralMonic,
    #[error("irreducibility screen would test {0} candidates, above the bound")]
    TooManyCandidates(u128),
}

/// Maximum number of candidate factors tried by [`find_rational_factor`].
pub const SCREEN_CANDIDATE_BOUND: u128 = 2_000_000;

/// Searches for a monic integral factor of degree `1..=deg/2`.
///
/// Coefficients of any such factor are bounded by Mignotte's estimate
/// `binom(m, j)·‖f‖₂`, so an empty result certifies irreducibility over ℚ.
pub fn find_rational_factor(f: &[BigRational]) -> Result<Option<QPoly>, ScreenError> {
    let n = degree(f).unwrap_or(0);
    if n == 0 || !f[n].is_one() || f.iter().any(|c| !c.is_integer()) {
        return Err(ScreenError::NotIntegralMonic);
    }
    let norm = f.iter().map(|c| c.to_f64().unwrap().powi(2)).sum::<f64>().sqrt();
    for m in 1..=n / 2 {
        let bounds: Vec<i64> = (0..m).map(|j| (binomial(m, j) * norm).ceil() as i64).collect();
        let count: u128 = bounds.iter().map(|&b| (2 * b + 1) as u128).product();
        if count > SCREEN_CANDIDATE_BOUND {
            return Err(ScreenError::TooManyCandidates(count));
        }
        let mut cur: Vec<i64> = bounds.iter().map(|&b| -b).collect();
        loop {
            let mut g: QPoly = cur.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
            g.push(BigRational::one());
            // a factor's constant term divides f's constant term
            let c0 = f[0].to_integer();
            let g0 = BigInt::from(cur[0]);
            let plausible = !g0.is_zero() && (&c0 % &g0).is_zero() || (g0.is_zero() && c0.is_zero());
            if plausible {
                let (_, r) = divrem(f, &g);
                if r.is_empty() {
                    return Ok(Some(g));
                }
            }
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                if cur[i] < bounds[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -bounds[i];
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    Ok(None)
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse::<BigRational>().ok()
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_negative(x: &BigRational) -> bool {
    x.is_negative()
}
