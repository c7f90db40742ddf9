//! Quadratic forms as exact symmetric matrices, the trace inner product,
//! the isometric vectorizations `φ` and `φ′`, unimodular action and duality.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};
use crate::sqrt2::QSqrt2;

pub type Rational = BigRational;
pub type IntVector = Vec<BigInt>;

/// `d(d+1)/2`, the dimension of the space of symmetric `d×d` matrices.
pub const fn sym_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Index pairs `(i, j)` with `i ≤ j` in row-major lexicographic order.
pub fn index_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i..d).map(move |j| (i, j)))
}

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Representative of `±x` whose first nonzero coordinate is positive.
pub fn canonical_sign(mut x: IntVector) -> IntVector {
    if x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        for c in x.iter_mut() {
            *c = -c.clone();
        }
    }
    x
}

/// A symmetric matrix over the rationals, read as the quadratic form `x ↦ xᵗQx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    entries: RatMatrix,
}

impl QuadForm {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        let d = entries.len();
        if d == 0 {
            return Err(Error::EmptyForm);
        }
        for row in &entries {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
        }
        for i in 0..d {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(QuadForm { entries })
    }

    /// Builds a form from the upper triangle, mirroring it below the diagonal.
    pub fn from_upper(entries: &[Vec<Rational>]) -> Result<Self> {
        let d = entries.len();
        let mut m = entries.to_vec();
        for i in 0..d {
            if m[i].len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m[i].len() });
            }
            for j in 0..i {
                m[i][j] = m[j][i].clone();
            }
        }
        QuadForm::new(m)
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        QuadForm::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn from_int_matrix(m: &[Vec<BigInt>]) -> Result<Self> {
        QuadForm::new(linalg::to_rational(m))
    }

    pub fn identity(d: usize) -> Self {
        QuadForm {
            entries: (0..d)
                .map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect(),
        }
    }

    pub fn diagonal(values: &[Rational]) -> Result<Self> {
        let d = values.len();
        let mut m = vec![vec![Rational::zero(); d]; d];
        for (i, v) in values.iter().enumerate() {
            m[i][i] = v.clone();
        }
        QuadForm::new(m)
    }

    /// The rank-one form `xxᵗ`.
    pub fn outer(x: &[BigInt]) -> Self {
        QuadForm {
            entries: x
                .iter()
                .map(|a| x.iter().map(|b| Rational::from_integer(a * b)).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `n = d(d+1)/2`.
    pub fn n(&self) -> usize {
        sym_dim(self.dim())
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        QuadForm {
            entries: self.entries.iter().map(|r| r.iter().map(|v| v * alpha).collect()).collect(),
        }
    }

    pub fn add(&self, other: &QuadForm) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(QuadForm {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    /// `self + t·other`.
    pub fn add_scaled(&self, other: &QuadForm, t: &Rational) -> Result<Self> {
        self.add(&other.scale(t))
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim()).fold(Rational::zero(), |acc, i| acc + &self.entries[i][i])
    }

    pub fn determinant(&self) -> Rational {
        linalg::rational_determinant(&self.entries)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(|v| v.is_integer())
    }

    pub fn to_integer_matrix(&self) -> Result<IntMatrix> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| if v.is_integer() { Ok(v.to_integer()) } else { Err(Error::NotIntegral) }).collect())
            .collect()
    }

    /// Gcd of the entries of an integral form.
    pub fn content(&self) -> Result<BigInt> {
        let m = self.to_integer_matrix()?;
        Ok(linalg::content(&m.into_iter().flatten().collect::<Vec<_>>()))
    }

    /// The unique primitive integral form on the ray through `self`, and the
    /// positive factor `c` with `c·self` equal to it.
    pub fn primitive_integral(&self) -> (QuadForm, Rational) {
        let l = linalg::denominator_lcm(self.entries.iter().flatten());
        let scaled = self.scale(&Rational::from_integer(l.clone()));
        let g = scaled.content().expect("integral after clearing denominators");
        let factor = Rational::new(l, g);
        (self.scale(&factor), factor)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            Err(Error::DimensionMismatch { expected: self.dim(), found })
        } else {
            Ok(())
        }
    }

    /// `Q[x] = xᵗQx`.
    pub fn evaluate(&self, x: &[BigInt]) -> Result<Rational> {
        self.check_dim(x.len())?;
        let d = self.dim();
        let mut acc = Rational::zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            acc += &self.entries[i][i] * Rational::from_integer(&x[i] * &x[i]);
            for j in i + 1..d {
                if x[j].is_zero() {
                    continue;
                }
                acc += &self.entries[i][j] * Rational::from_integer(BigInt::from(2) * &x[i] * &x[j]);
            }
        }
        Ok(acc)
    }

    /// Bilinear value `xᵗQy`.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> Result<Rational> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += &self.entries[i][j] * Rational::from_integer(xi * yj);
                }
            }
        }
        Ok(acc)
    }

    /// Trace inner product `⟨P, Q⟩ = Σ P_ij Q_ij`.
    pub fn trace_inner(&self, other: &QuadForm) -> Result<Rational> {
        self.check_dim(other.dim())?;
        Ok(self
            .entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// The isometry `φ` into `Rⁿ`: diagonal entries as they are, off-diagonal
    /// entries multiplied by `√2`.
    pub fn phi(&self) -> VectorizedForm {
        VectorizedForm {
            dim: self.dim(),
            coords: index_pairs(self.dim())
                .map(|(i, j)| {
                    let v = self.entries[i][j].clone();
                    if i == j {
                        QSqrt2::rational(v)
                    } else {
                        QSqrt2::sqrt2_multiple(v)
                    }
                })
                .collect(),
        }
    }

    /// The integral embedding `φ′`: off-diagonal entries doubled.
    pub fn phi_prime(&self) -> Result<IntVector> {
        let m = self.to_integer_matrix()?;
        Ok(index_pairs(self.dim())
            .map(|(i, j)| if i == j { m[i][j].clone() } else { BigInt::from(2) * &m[i][j] })
            .collect())
    }

    /// `UᵗQU`.
    pub fn apply_unimodular(&self, u: &UnimodularMatrix) -> Result<QuadForm> {
        self.check_dim(u.dim())?;
        Ok(self.transform(u.entries()))
    }

    /// `MᵗQM` for an arbitrary square integer matrix.
    pub(crate) fn transform(&self, m: &[Vec<BigInt>]) -> QuadForm {
        let d = self.dim();
        let mr = linalg::to_rational(m);
        // qm = Q·M
        let qm: RatMatrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(Rational::zero(), |acc, k| acc + &self.entries[i][k] * &mr[k][j]))
                    .collect()
            })
            .collect();
        let mut out = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                let v = (0..d).fold(Rational::zero(), |acc, k| acc + &mr[k][i] * &qm[k][j]);
                out[j][i] = v.clone();
                out[i][j] = v;
            }
        }
        QuadForm { entries: out }
    }

    /// Exact positive definiteness via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        linalg::gram_schmidt(&self.entries).is_some()
    }

    pub(crate) fn require_positive_definite(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite)
        }
    }

    /// The dual form `Q⁻¹`.
    pub fn dual(&self) -> Result<QuadForm> {
        self.require_positive_definite()?;
        let inv = linalg::rational_inverse(&self.entries).ok_or(Error::Singular)?;
        // inverse of a symmetric matrix is symmetric; rebuild from the upper
        // triangle to keep the invariant independent of elimination order
        QuadForm::from_upper(&inv)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `φ(Q)` with coordinates in Q(√2), ordered as [`index_pairs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorizedForm {
    dim: usize,
    coords: Vec<QSqrt2>,
}

impl VectorizedForm {
    pub fn coords(&self) -> &[QSqrt2] {
        &self.coords
    }

    pub fn source_dim(&self) -> usize {
        self.dim
    }

    pub fn inner(&self, other: &VectorizedForm) -> Result<QSqrt2> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch { expected: self.coords.len(), found: other.coords.len() });
        }
        Ok(self.coords.iter().zip(&other.coords).fold(QSqrt2::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Inverse of `φ`.
    pub fn to_form(&self) -> Result<QuadForm> {
        let d = self.dim;
        let mut m = vec![vec![Rational::zero(); d]; d];
        for ((i, j), c) in index_pairs(d).zip(&self.coords) {
            let v = if i == j {
                if !c.is_rational() {
                    return Err(Error::OutOfRange("diagonal coordinate with a √2 part".to_string()));
                }
                c.a.clone()
            } else {
                // c = √2·Q_ij, so Q_ij = c/√2 = c·√2/2
                if !c.a.is_zero() {
                    return Err(Error::OutOfRange("off-diagonal coordinate without a √2 factor".to_string()));
                }
                c.b.clone()
            };
            m[i][j] = v.clone();
            m[j][i] = v;
        }
        QuadForm::new(m)
    }
}

/// An integer matrix with determinant `±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    entries: IntMatrix,
}

impl UnimodularMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        let d = entries.len();
        if d == 0 {
            return Err(Error::EmptyForm);
        }
        if let Some(row) = entries.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        let det = linalg::integer_determinant(&entries);
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(UnimodularMatrix { entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        UnimodularMatrix::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub(crate) fn new_unchecked(entries: IntMatrix) -> Self {
        debug_assert!(linalg::integer_determinant(&entries).abs().is_one());
        UnimodularMatrix { entries }
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMatrix { entries: linalg::identity_int(d) }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix { entries: linalg::int_mul(&self.entries, &other.entries) }
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        linalg::int_mul_vec(&self.entries, x)
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix {
            entries: linalg::integer_inverse(&self.entries).expect("unimodular matrices have integral inverses"),
        }
    }

    pub fn transpose(&self) -> UnimodularMatrix {
        UnimodularMatrix { entries: linalg::transpose(&self.entries) }
    }

    /// `U⁻ᵗ`, the matrix relating the duals of `Q` and `UᵗQU`.
    pub fn inverse_transpose(&self) -> UnimodularMatrix {
        self.inverse().transpose()
    }

    pub fn is_identity(&self) -> bool {
        self.entries == linalg::identity_int(self.dim())
    }
}
