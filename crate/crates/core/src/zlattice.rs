//! Integer matrices: Hermite and Smith normal forms, lattice membership and index.
//!
//! Lattices are given by generating vectors with rational coordinates; they are
//! cleared of denominators, reduced to a Hermite basis and compared exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::common_denominator;

pub type IMatrix = Vec<Vec<BigInt>>;

/// Row-style Hermite normal form of the row span of `rows`; zero rows dropped.
pub fn hnf_rows(rows: &IMatrix) -> IMatrix {
    let mut m: IMatrix = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].div_floor(&m[r][c]);
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for j in c..cols {
                    m[r][j] = -m[r][j].clone();
                }
            }
            for i in 0..r {
                let f = m[i][c].div_floor(&m[r][c]);
                if !f.is_zero() {
                    for j in c..cols {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// A full-rank-in-its-span lattice with an integral Hermite basis and a common scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    /// Hermite basis of `scale * L`.
    pub basis: IMatrix,
    pub scale: BigInt,
}

impl Lattice {
    /// The ℤ-span of rational generators.
    pub fn from_generators(gens: &[Vec<BigRational>]) -> Self {
        let flat: Vec<BigRational> = gens.iter().flatten().cloned().collect();
        let scale = common_denominator(&flat);
        let rows: IMatrix = gens
            .iter()
            .map(|v| v.iter().map(|x| (x * BigRational::from_integer(scale.clone())).to_integer()).collect())
            .collect();
        Lattice { basis: hnf_rows(&rows), scale }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rescales to a common denominator with `other` so bases are comparable.
    fn at_scale(&self, s: &BigInt) -> IMatrix {
        let f = s / &self.scale;
        hnf_rows(&self.basis.iter().map(|r| r.iter().map(|x| x * &f).collect()).collect())
    }

    fn common_scale(&self, other: &Lattice) -> BigInt {
        self.scale.lcm(&other.scale)
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        let s = self.common_scale(other);
        self.at_scale(&s) == other.at_scale(&s)
    }

    /// True when every vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        let s = self.common_scale(other);
        let mine = self.at_scale(&s);
        let mut joined = mine.clone();
        joined.extend(other.at_scale(&s));
        hnf_rows(&joined) == mine
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.contains_lattice(&Lattice::from_generators(&[v.to_vec()]))
    }

    /// Index `[self : sub]` for a sublattice of equal rank, via Smith divisors.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if !self.contains_lattice(sub) || self.rank() != sub.rank() {
            return None;
        }
        let s = self.common_scale(sub);
        let big = self.at_scale(&s);
        let small = sub.at_scale(&s);
        let coords = coordinates_in(&big, &small)?;
        Some(smith_diagonal(&coords).iter().fold(BigInt::one(), |a, d| a * d))
    }
}

/// Expresses each row of `rows` in the Hermite basis `basis` (both integral).
pub fn coordinates_in(basis: &IMatrix, rows: &IMatrix) -> Option<IMatrix> {
    use crate::linalg::{solve, transpose};
    let a: Vec<Vec<BigRational>> = transpose(basis)
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    rows.iter()
        .map(|v| {
            let b: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
            let x = solve(&a, &b)?;
            x.iter().all(|t| t.is_integer()).then(|| x.iter().map(|t| t.to_integer()).collect())
        })
        .collect()
}

/// Diagonal of the Smith normal form (nonzero invariant factors, ascending divisibility).
pub fn smith_diagonal(m: &IMatrix) -> Vec<BigInt> {
    let mut a: IMatrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let f = a[i][t].div_floor(&a[t][t]);
            if !f.is_zero() {
                for j in t..cols {
                    let s = &f * &a[t][j];
                    a[i][j] -= s;
                }
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let f = a[t][j].div_floor(&a[t][t]);
            if !f.is_zero() {
                for i in t..rows {
                    let s = &f * &a[i][t];
                    a[i][j] -= s;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        let mut divides = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for k in t..cols {
                        let s = a[i][k].clone();
                        a[t][k] += s;
                    }
                    divides = false;
                    break 'outer;
                }
            }
        }
        if divides {
            diag.push(a[t][t].abs());
            t += 1;
        }
    }
    diag
}

/// Integer determinant via exact rational elimination.
pub fn det_int(m: &IMatrix) -> BigInt {
    let q: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
    crate::linalg::det(&q).to_integer()
}

/// Converts a row of small integers.
pub fn irow(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Integer coefficients c with Σ cᵢ·gensᵢ = target, if any.
pub fn integer_combination(gens: &IMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = target.len();
    let m = gens.len();
    let aug: IMatrix = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut r = g.clone();
            r.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let h = hnf_rows(&aug);
    let pivots: Vec<&Vec<BigInt>> = h.iter().filter(|r| r[..n].iter().any(|x| !x.is_zero())).collect();
    let basis: IMatrix = pivots.iter().map(|r| r[..n].to_vec()).collect();
    let coords = coordinates_in(&basis, &vec![target.to_vec()])?.pop()?;
    let mut out = vec![BigInt::zero(); m];
    for (c, r) in coords.iter().zip(&pivots) {
        for j in 0..m {
            out[j] += c * &r[n + j];
        }
    }
    Some(out)
}
