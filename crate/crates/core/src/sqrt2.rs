//! Exact arithmetic in the real quadratic field Q(√2).

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::form::Rational;

/// The number `a + b·√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt2 { a, b: Rational::zero() }
    }

    /// `b·√2`.
    pub fn sqrt2_multiple(b: Rational) -> Self {
        QSqrt2 { a: Rational::zero(), b }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `(√2)^k`.
    pub fn sqrt2_pow(k: u32) -> Self {
        let two_pow = Rational::from_integer(BigInt::one() << (k / 2) as usize);
        if k % 2 == 0 {
            Self::rational(two_pow)
        } else {
            Self::sqrt2_multiple(two_pow)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSqrt2 { a: &self.a * r, b: &self.b * r }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // a² − 2b² vanishes only at zero since √2 is irrational
        let n = self.norm();
        Some(QSqrt2 { a: &self.a / &n, b: -(&self.b / &n) })
    }

    /// Sign of the real number, decided exactly.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            // opposite signs: compare a² with 2b²
            (sa, _) => {
                let lhs = &self.a * &self.a;
                let rhs = Rational::from_integer(BigInt::from(2)) * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: QSqrt2) -> QSqrt2 {
        &self + &rhs
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: QSqrt2) -> QSqrt2 {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = Rational::from_integer(BigInt::from(2));
        QSqrt2 {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: QSqrt2) -> QSqrt2 {
        &self * &rhs
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt(2)", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt(2)", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}*sqrt(2)", self.a, self.b)
                }
            }
        }
    }
}

/// Determinant of a square matrix over Q(√2) by Gaussian elimination.
pub fn determinant(rows: &[alloc::vec::Vec<QSqrt2>]) -> QSqrt2 {
    let n = rows.len();
    let mut m: alloc::vec::Vec<alloc::vec::Vec<QSqrt2>> = rows.to_vec();
    let mut det = QSqrt2::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return QSqrt2::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let inv = m[col][col].inverse().expect("nonzero pivot");
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 3 − 2√2 ≈ 0.17
        assert_eq!(QSqrt2::new(q(3, 1), q(-2, 1)).signum(), Ordering::Greater);
        // 1 − √2 < 0
        assert_eq!(QSqrt2::new(q(1, 1), q(-1, 1)).signum(), Ordering::Less);
        // −3/2 + √2 < 0
        assert_eq!(QSqrt2::new(q(-3, 2), q(1, 1)).signum(), Ordering::Less);
        assert_eq!(QSqrt2::new(q(-1, 1), q(1, 1)).signum(), Ordering::Greater);
        assert_eq!(QSqrt2::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn inverse_round_trip() {
        let x = QSqrt2::new(q(5, 3), q(-7, 2));
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, QSqrt2::one());
        assert!(QSqrt2::zero().inverse().is_none());
    }

    #[test]
    fn powers_of_sqrt2() {
        let s = QSqrt2::sqrt2_pow(1);
        assert_eq!(&s * &s, QSqrt2::rational(q(2, 1)));
        assert_eq!(QSqrt2::sqrt2_pow(5), QSqrt2::sqrt2_multiple(q(4, 1)));
        assert_eq!(QSqrt2::sqrt2_pow(0), QSqrt2::one());
    }

    #[test]
    fn determinant_with_sqrt2_column() {
        // [[1, √2], [√2, 4]] has determinant 4 − 2 = 2
        let m = vec![
            vec![QSqrt2::one(), QSqrt2::sqrt2_pow(1)],
            vec![QSqrt2::sqrt2_pow(1), QSqrt2::rational(q(4, 1))],
        ];
        assert_eq!(determinant(&m), QSqrt2::rational(q(2, 1)));
    }
}
