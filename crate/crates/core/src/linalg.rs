//! Exact dense linear algebra over the integers and the rationals.
//!
//! Matrices are plain `Vec<Vec<T>>` in row-major order. Sizes in this crate
//! stay below a few dozen, so nothing here is blocked or cache-tuned.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::form::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn identity_int(d: usize) -> IntMatrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn int_mul_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(BigInt::zero(), |acc, (p, q)| acc + p * q))
        .collect()
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|v| Rational::from_integer(v.clone())).collect())
        .collect()
}

/// Nearest integer, halves rounded up.
pub fn round(r: &Rational) -> BigInt {
    (r + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Determinant over the rationals by Gaussian elimination.
pub fn rational_determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse over the rationals, `None` when singular.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for c in 0..2 * n {
            a[col][c] *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m·x = rhs`, `None` when `m` is singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let inv = rational_inverse(m)?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(rhs).fold(Rational::zero(), |acc, (p, q)| acc + p * q))
            .collect(),
    )
}

/// Integer matrix inverse, `None` unless the inverse is integral.
pub fn integer_inverse(m: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let inv = rational_inverse(&to_rational(m))?;
    inv.into_iter()
        .map(|row| row.into_iter().map(|v| v.is_integer().then(|| v.to_integer())).collect())
        .collect()
}

/// Gram–Schmidt data of a positive definite Gram matrix: `q = L·diag(b)·Lᵗ`
/// with `L` unit lower triangular, `mu[i][j] = L[i][j]` for `j < i`.
///
/// Returns `None` as soon as a pivot is not strictly positive.
pub fn gram_schmidt(q: &[Vec<Rational>]) -> Option<(RatMatrix, Vec<Rational>)> {
    let d = q.len();
    let mut mu = vec![vec![Rational::zero(); d]; d];
    let mut b = vec![Rational::zero(); d];
    for i in 0..d {
        for j in 0..i {
            let mut s = q[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = q[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        if !s.is_positive() {
            return None;
        }
        b[i] = s;
        mu[i][i] = Rational::one();
    }
    Some((mu, b))
}

/// Incrementally built row-echelon basis used for exact rank tests.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    rows: Vec<(usize, Vec<Rational>)>,
    width: usize,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        RowEchelon { rows: Vec::new(), width }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn is_independent(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // keep the stored rows fully reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                *x -= &f * r;
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn insert_int(&mut self, v: &[BigInt]) -> bool {
        let r: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        self.insert(&r)
    }
}

/// Exact rank of a list of integer vectors.
pub fn integer_rank(vectors: &[Vec<BigInt>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut e = RowEchelon::new(first.len());
    for v in vectors {
        e.insert_int(v);
    }
    e.rank()
}

/// Greatest common divisor of a list, always nonnegative.
pub fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

/// Unimodular `U` whose first column is the primitive vector `v`.
///
/// Returns `None` when `v` is not primitive.
pub fn complete_to_unimodular(v: &[BigInt]) -> Option<IntMatrix> {
    let d = v.len();
    let mut w = v.to_vec();
    // `inv` accumulates the inverse of the row operations applied to `w`,
    // so that at the end `w = e_1` and `inv · e_1 = v`
    let mut inv = identity_int(d);
    loop {
        let nonzero: Vec<usize> = (0..d).filter(|&i| !w[i].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &i in &nonzero {
            if i == p {
                continue;
            }
            let q = w[i].div_floor(&w[p]);
            if q.is_zero() {
                continue;
            }
            // row_i -= q·row_p, inverse: col_p += q·col_i
            w[i] = &w[i] - &q * &w[p];
            for row in inv.iter_mut() {
                let t = &q * &row[i];
                row[p] += t;
            }
        }
    }
    let p = (0..d).find(|&i| !w[i].is_zero())?;
    if !w[p].abs().is_one() {
        return None;
    }
    if p != 0 {
        w.swap(0, p);
        for row in inv.iter_mut() {
            row.swap(0, p);
        }
    }
    if w[0].is_negative() {
        for row in inv.iter_mut() {
            row[0] = -row[0].clone();
        }
    }
    Some(inv)
}
