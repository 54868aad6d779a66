//! Dense Gaussian elimination over exact fields.
//!
//! The routines are generic over [`Scalar`], which is implemented for
//! `BigRational` and for number-field elements, so the same code computes
//! ranks and kernels over ℚ and determinants or inverses over L.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field operations needed by the elimination routines.
pub trait Scalar: Clone + PartialEq {
    fn is_zero_s(&self) -> bool;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv_s(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl Scalar for BigRational {
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
        self.recip()
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Shorthand for the rational `n`.
pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Row-reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref<T: Scalar>(m: &mut Matrix<T>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_s()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv_s();
        for j in c..cols {
            m[r][j] = m[r][j].mul_s(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_s() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul_s(&m[r][j]);
                    m[i][j] = m[i][j].sub_s(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Determinant of a square matrix by elimination.
pub fn det<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "det needs a nonempty square matrix");
    if n <= 4 {
        return laplace(m, 0, &(0..n).collect::<Vec<_>>());
    }
    let mut a = m.clone();
    let mut d = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero_s()) else {
            return a[0][0].zero_like();
        };
        if p != c {
            a.swap(p, c);
            d = d.zero_like().sub_s(&d);
        }
        d = d.mul_s(&a[c][c]);
        let inv = a[c][c].inv_s();
        for i in c + 1..n {
            if a[i][c].is_zero_s() {
                continue;
            }
            let f = a[i][c].mul_s(&inv);
            for j in c..n {
                let t = f.mul_s(&a[c][j]);
                a[i][j] = a[i][j].sub_s(&t);
            }
        }
    }
    d
}

/// Division-free cofactor expansion of the minor on rows `row..` and the given columns.
fn laplace<T: Scalar>(m: &Matrix<T>, row: usize, cols: &[usize]) -> T {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = m[row][cols[0]].zero_like();
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero_s() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let t = m[row][c].mul_s(&laplace(m, row + 1, &rest));
        acc = if k % 2 == 0 { acc.add_s(&t) } else { acc.sub_s(&t) };
    }
    acc
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    let n = m.len();
    if (2..=3).contains(&n) {
        let d = det(m);
        if d.is_zero_s() {
            return None;
        }
        let dinv = d.inv_s();
        let minor = |skip_r: usize, skip_c: usize| -> T {
            let rows: Vec<Vec<T>> = (0..n)
                .filter(|&r| r != skip_r)
                .map(|r| (0..n).filter(|&c| c != skip_c).map(|c| m[r][c].clone()).collect())
                .collect();
            det(&rows)
        };
        return Some(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let c = minor(j, i).mul_s(&dinv);
                            if (i + j) % 2 == 0 { c } else { c.zero_like().sub_s(&c) }
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let zero = m[0][0].zero_like();
    let one = m[0][0].one_like();
    let mut aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` for one solution, `None` when inconsistent.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a[0].len();
    let zero = a[0][0].zero_like();
    let mut aug: Matrix<T> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![zero; cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel<T: Scalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let cols = a[0].len();
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    let mut m = a.clone();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = zero.sub_s(&m[i][f]);
            }
            v
        })
        .collect()
}

pub fn matmul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    assert!(a.iter().all(|r| r.len() == k), "inner dimensions differ");
    let zero = b[0][0].zero_like();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(zero.clone(), |acc, t| acc.add_s(&a[i][t].mul_s(&b[t][j])))
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// True when every entry is an integer.
pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Least common multiple of the denominators of `v`.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Absolute value helper kept here so callers need not import `Signed`.
pub fn abs_q(x: &BigRational) -> BigRational {
    x.abs()
}
