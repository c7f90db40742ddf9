//! LLL and HKZ reduction of forms with recorded unimodular transforms, and the
//! construction of an equivalent form whose minimal vectors are short.
//!
//! Everything operates on Gram matrices: a basis change by `U` is the action
//! `Q ↦ UᵗQU`, and projected sublattices are represented by their exact
//! Schur complements.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::enumeration::{self, successive_minima};
use crate::error::{Error, Result};
use crate::form::{QuadForm, Rational, UnimodularMatrix};
use crate::linalg::{self, IntMatrix, RatMatrix};

/// A form equivalent to some original together with the transform relating
/// them: `reduced == transformᵗ · original · transform`.
///
/// `scale` is the positive factor that normalizes the arithmetical minimum
/// of `reduced` to one; it is one for plain LLL and HKZ reductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub reduced: QuadForm,
    pub transform: UnimodularMatrix,
    pub scale: Rational,
}

/// Working state: a Gram matrix and the accumulated column transform.
struct Basis {
    gram: RatMatrix,
    transform: IntMatrix,
}

impl Basis {
    fn new(q: &QuadForm) -> Self {
        Basis { gram: q.entries().clone(), transform: linalg::identity_int(q.dim()) }
    }

    /// `b_k ← b_k − r·b_j`.
    fn subtract(&mut self, k: usize, j: usize, r: &BigInt) {
        let rr = Rational::from_integer(r.clone());
        let d = self.gram.len();
        for m in 0..d {
            let t = &rr * &self.gram[j][m];
            self.gram[k][m] -= t;
        }
        for m in 0..d {
            let t = &rr * &self.gram[m][j];
            self.gram[m][k] -= t;
        }
        for row in self.transform.iter_mut() {
            let t = r * &row[j];
            row[k] -= t;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.gram.swap(a, b);
        for row in self.gram.iter_mut() {
            row.swap(a, b);
        }
        for row in self.transform.iter_mut() {
            row.swap(a, b);
        }
    }

    /// Size-reduces `b_k` against `b_{k−1}, …, b_0`, keeping `mu` row `k` current.
    fn size_reduce(&mut self, k: usize, mu: &mut RatMatrix) {
        for j in (0..k).rev() {
            let r = linalg::round(&mu[k][j]);
            if r.is_zero() {
                continue;
            }
            self.subtract(k, j, &r);
            let rr = Rational::from_integer(r);
            for l in 0..j {
                let t = &rr * &mu[j][l];
                mu[k][l] -= t;
            }
            mu[k][j] -= rr;
        }
    }

    fn finish(self, scale: Rational) -> ReductionResult {
        ReductionResult {
            reduced: QuadForm::new(self.gram).expect("basis changes keep the Gram matrix symmetric"),
            transform: UnimodularMatrix::new_unchecked(self.transform),
            scale,
        }
    }
}

/// LLL reduction with Lovász parameter 3/4, exact rational arithmetic.
pub fn lll_reduce(q: &QuadForm) -> Result<ReductionResult> {
    q.require_positive_definite()?;
    let d = q.dim();
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let mut basis = Basis::new(q);
    let mut k = 1;
    while k < d {
        let (mut mu, b) = linalg::gram_schmidt(&basis.gram).ok_or(Error::NotPositiveDefinite)?;
        basis.size_reduce(k, &mut mu);
        let m = &mu[k][k - 1];
        if b[k] >= (&delta - m * m) * &b[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    Ok(basis.finish(Rational::one()))
}

fn embed_transform(w: &UnimodularMatrix) -> IntMatrix {
    let d = w.dim() + 1;
    let mut m = linalg::identity_int(d);
    for i in 1..d {
        for j in 1..d {
            m[i][j] = w.entries()[i - 1][j - 1].clone();
        }
    }
    m
}

/// Hermite–Korkine–Zolotarev reduction.
///
/// The first basis vector is a shortest vector (lexicographically first
/// among ties), the remaining ones come from recursively reducing the
/// projection orthogonal to it, and the basis is size-reduced at the end.
/// The output satisfies `Q′_ii ≤ (i+3)/4 · λ_i(Q)` for every `i`.
pub fn hkz_reduce(q: &QuadForm) -> Result<ReductionResult> {
    q.require_positive_definite()?;
    let d = q.dim();
    if d == 1 {
        return Ok(ReductionResult { reduced: q.clone(), transform: UnimodularMatrix::identity(1), scale: Rational::one() });
    }
    let shortest = enumeration::arithmetical_minimum(q)?.vectors.swap_remove(0);
    let first = linalg::complete_to_unimodular(&shortest).expect("shortest vectors are primitive");
    let q1 = q.transform(&first);
    let pivot = q1.get(0, 0).clone();
    let projected: RatMatrix = (1..d)
        .map(|i| (1..d).map(|j| q1.get(i, j) - q1.get(i, 0) * q1.get(0, j) / &pivot).collect())
        .collect();
    let inner = hkz_reduce(&QuadForm::new(projected)?)?;
    let full = linalg::int_mul(&first, &embed_transform(&inner.transform));

    let mut basis = Basis { gram: q.transform(&full).entries().clone(), transform: full };
    let (mut mu, _) = linalg::gram_schmidt(&basis.gram).ok_or(Error::NotPositiveDefinite)?;
    for k in 1..d {
        basis.size_reduce(k, &mut mu);
    }
    Ok(basis.finish(Rational::one()))
}

/// Whether `reduced_ii ≤ (i+3)/4 · λ_i(original)` holds for all `i`, with
/// the minima taken from a fresh enumeration of `original`.
pub fn hkz_diagonal_bound_holds(original: &QuadForm, reduced: &QuadForm) -> Result<bool> {
    let d = original.dim();
    let minima = successive_minima(original, d)?;
    Ok((0..d).all(|i| {
        let factor = Rational::new(BigInt::from(i as i64 + 4), BigInt::from(4));
        *reduced.get(i, i) <= factor * &minima.values[i]
    }))
}

/// `d³(d+7)/8`.
pub fn short_vector_bound(d: usize) -> Rational {
    let d = BigInt::from(d);
    Rational::new(&d * &d * &d * (&d + 7), BigInt::from(8))
}

/// An equivalent form whose minimal vectors satisfy `xᵗx ≤ d³(d+7)/8`.
///
/// HKZ-reduces the dual form and carries the transform back: if
/// `Vᵗ Q⁻¹ V` is HKZ-reduced then `U = V⁻ᵗ` gives `(UᵗQU)⁻¹ = Vᵗ Q⁻¹ V`.
/// The returned `scale` is `1/λ₁(Q)`.
pub fn small_minvec_representative(q: &QuadForm) -> Result<ReductionResult> {
    q.require_positive_definite()?;
    let min = enumeration::arithmetical_minimum(q)?.form_min;
    let dual = hkz_reduce(&q.dual()?)?;
    let transform = dual.transform.inverse_transpose();
    Ok(ReductionResult { reduced: q.apply_unimodular(&transform)?, transform, scale: min.recip() })
}

/// Quantities checked for a small-vector representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallRepresentativeReport {
    pub result: ReductionResult,
    /// `d³(d+7)/8`.
    pub bound: Rational,
    /// Largest `xᵗx` over the minimal vectors of the representative.
    pub max_norm: Rational,
    /// `Tr(Q′⁻¹)` after scaling `Q′` to minimum one.
    pub normalized_dual_trace: Rational,
    pub minimal_vectors: Vec<Vec<BigInt>>,
}

impl SmallRepresentativeReport {
    pub fn holds(&self) -> bool {
        self.max_norm <= self.bound && self.normalized_dual_trace <= self.bound
    }
}

pub fn small_representative_report(q: &QuadForm) -> Result<SmallRepresentativeReport> {
    let result = small_minvec_representative(q)?;
    let normalized = result.reduced.scale(&result.scale);
    let minimal_vectors = enumeration::arithmetical_minimum(&normalized)?.vectors;
    let max_norm = minimal_vectors
        .iter()
        .map(|x| Rational::from_integer(x.iter().map(|c| c * c).sum::<BigInt>()))
        .max()
        .unwrap_or_else(Rational::zero);
    let normalized_dual_trace = normalized.dual()?.trace();
    Ok(SmallRepresentativeReport {
        bound: short_vector_bound(q.dim()),
        result,
        max_norm,
        normalized_dual_trace,
        minimal_vectors,
    })
}

/// Products `λ_i(Q)·λ_{d−i+1}(Q⁻¹)` against the transference bound `d²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferenceReport {
    pub minima: Vec<Rational>,
    pub dual_minima: Vec<Rational>,
    pub products: Vec<Rational>,
    pub bound: Rational,
}

impl TransferenceReport {
    pub fn holds(&self) -> bool {
        self.products.iter().all(|p| *p <= self.bound)
    }
}

pub fn transference_check(q: &QuadForm) -> Result<TransferenceReport> {
    q.require_positive_definite()?;
    let d = q.dim();
    let minima = successive_minima(q, d)?.values;
    let dual_minima = successive_minima(&q.dual()?, d)?.values;
    let products = (0..d).map(|i| &minima[i] * &dual_minima[d - 1 - i]).collect();
    Ok(TransferenceReport { minima, dual_minima, products, bound: Rational::from_integer(BigInt::from(d * d)) })
}
