//! Polynomials over 𝔽_p for small p and brute-force factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Dense polynomial over 𝔽_p, lowest degree first, no trailing zeros.
pub type FpPoly = Vec<u64>;

/// Largest prime accepted by [`factor_poly_mod_p`].
pub const PRIME_BOUND: u64 = 1000;
/// Largest number of trial divisors tried for one degree.
pub const CANDIDATE_BOUND: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModpError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the brute-force bound")]
    PrimeTooLarge(u64),
    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),
    #[error("trial division would need {0} candidates")]
    TooManyCandidates(u128),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Reduces integer coefficients modulo p.
pub fn reduce(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut r: FpPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    trim(&mut r);
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    e.x.rem_euclid(p as i128) as u64
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

/// Quotient and remainder by a nonzero divisor.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = r[dr] * li % p;
        let s = dr - db;
        for (j, &c) in b.iter().enumerate() {
            r[s + j] = (r[s + j] + p * p - f * c % p) % p;
        }
        q[s] = f;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// A factorization `unit · Π factors` with monic factors listed with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Factorization {
    pub p: u64,
    pub unit: u64,
    pub factors: Vec<FpPoly>,
}

impl Factorization {
    pub fn product(&self) -> FpPoly {
        self.factors.iter().fold(vec![self.unit], |acc, f| mul(&acc, f, self.p))
    }
}

/// Factors `f` over 𝔽_p by trial division with all monic polynomials of increasing degree.
///
/// Since smaller-degree divisors are removed first, every divisor found is
/// irreducible, and whatever remains once its degree is below twice the
/// current trial degree is irreducible too.
pub fn factor_poly_mod_p(f: &[BigInt], p: u64) -> Result<Factorization, ModpError> {
    if !is_prime(p) {
        return Err(ModpError::NotPrime(p));
    }
    if p >= PRIME_BOUND {
        return Err(ModpError::PrimeTooLarge(p));
    }
    let g = reduce(f, p);
    if g.is_empty() {
        return Err(ModpError::ZeroModP(p));
    }
    let unit = *g.last().unwrap();
    let ui = inv_mod(unit, p);
    let mut rest: FpPoly = g.iter().map(|c| c * ui % p).collect();
    let mut factors = Vec::new();
    let mut m = 1;
    while rest.len() > 1 && 2 * m < rest.len() {
        let count = (p as u128).pow(m as u32);
        if count > CANDIDATE_BOUND {
            return Err(ModpError::TooManyCandidates(count));
        }
        for idx in 0..count {
            let mut cand: FpPoly = Vec::with_capacity(m + 1);
            let mut k = idx;
            for _ in 0..m {
                cand.push((k % p as u128) as u64);
                k /= p as u128;
            }
            cand.push(1);
            loop {
                let (q, r) = divrem(&rest, &cand, p);
                if !r.is_empty() {
                    break;
                }
                factors.push(cand.clone());
                rest = q;
            }
            if rest.len() <= 1 {
                break;
            }
        }
        m += 1;
    }
    if rest.len() > 1 {
        factors.push(rest);
    }
    factors.sort();
    Ok(Factorization { p, unit, factors })
}

/// True when a polynomial of positive degree has no monic divisor of degree ≤ deg/2.
pub fn is_irreducible_mod_p(g: &[u64], p: u64) -> bool {
    let n = g.len() - 1;
    if n == 0 {
        return false;
    }
    for m in 1..=n / 2 {
        let count = (p as u128).pow(m as u32);
        for idx in 0..count {
            let mut cand: FpPoly = Vec::with_capacity(m + 1);
            let mut k = idx;
            for _ in 0..m {
                cand.push((k % p as u128) as u64);
                k /= p as u128;
            }
            cand.push(1);
            if divrem(g, &cand, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Multiplicative order of `a` modulo `n`, if `a` is a unit.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut x = a % n;
    for k in 1..=n {
        if x == 1 % n {
            return Some(k);
        }
        x = x * a % n;
    }
    None
}

/// Renders a polynomial over 𝔽_p as `x^3 + x + 1`.
pub fn format_fp(g: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in g.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
