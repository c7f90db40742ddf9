//! Arithmetical minimum, minimal vectors and successive minima by exact
//! Fincke–Pohst enumeration.
//!
//! Every public entry point LLL-reduces the form first and maps the
//! enumerated vectors back through the recorded transform, so results are
//! always expressed in the coordinates of the input form. Vectors are
//! reported once per `±` pair, using the representative whose first nonzero
//! coordinate is positive, and sorted by `(Q[x], x)`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::form::{canonical_sign, IntVector, QuadForm, Rational};
use crate::linalg::{self, RowEchelon};
use crate::reduction;

/// A lattice vector together with its value under the form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShortVector {
    pub value: Rational,
    pub vector: IntVector,
}

/// `λ₁(Q)` and all minimal vectors up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalVectorSet {
    pub form_min: Rational,
    pub vectors: Vec<IntVector>,
}

impl MinimalVectorSet {
    /// Number of minimal vectors up to sign.
    pub fn count(&self) -> usize {
        self.vectors.len()
    }
}

/// The first `k` successive minima with linearly independent witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccessiveMinima {
    pub values: Vec<Rational>,
    pub witnesses: Vec<IntVector>,
}

struct Search<'a> {
    mu: &'a [Vec<Rational>],
    b: &'a [Rational],
    bound: &'a Rational,
    x: Vec<BigInt>,
    found: Vec<ShortVector>,
}

impl Search<'_> {
    fn descend(&mut self, level: usize, remaining: Rational, zero_above: bool) {
        let d = self.x.len();
        let mut center = Rational::zero();
        for i in level + 1..d {
            if !self.x[i].is_zero() {
                center += &self.mu[i][level] * Rational::from_integer(self.x[i].clone());
            }
        }
        let start = linalg::round(&-center.clone());
        // (k + center)² is convex in k, so the admissible k form an interval
        // around the rounded center; walk it in both directions
        for step in [BigInt::one(), -BigInt::one()] {
            let mut k = if step.is_positive() { start.clone() } else { &start - 1 };
            loop {
                if zero_above && k.is_negative() {
                    break;
                }
                let t = Rational::from_integer(k.clone()) + &center;
                let contribution = &self.b[level] * &t * &t;
                if contribution > remaining {
                    break;
                }
                let rest = &remaining - &contribution;
                self.x[level] = k.clone();
                let still_zero = zero_above && k.is_zero();
                if level == 0 {
                    if !still_zero {
                        self.found.push(ShortVector { value: self.bound - &rest, vector: self.x.clone() });
                    }
                } else {
                    self.descend(level - 1, rest, still_zero);
                }
                k += &step;
            }
        }
        self.x[level] = BigInt::zero();
    }
}

/// All `x ≠ 0` with `q[x] ≤ bound` up to sign, in the coordinates of `q`,
/// without any preprocessing.
pub(crate) fn enumerate_unreduced(q: &QuadForm, bound: &Rational) -> Result<Vec<ShortVector>> {
    let (mu, b) = linalg::gram_schmidt(q.entries()).ok_or(Error::NotPositiveDefinite)?;
    let d = q.dim();
    let mut search = Search { mu: &mu, b: &b, bound, x: vec![BigInt::zero(); d], found: Vec::new() };
    if !bound.is_negative() {
        search.descend(d - 1, bound.clone(), true);
    }
    Ok(search.found)
}

/// All nonzero `x` with `q[x] ≤ bound`, one per `±` pair, sorted by `(q[x], x)`.
pub fn vectors_below(q: &QuadForm, bound: &Rational) -> Result<Vec<ShortVector>> {
    q.require_positive_definite()?;
    if !bound.is_positive() {
        return Err(Error::OutOfRange("enumeration bound must be positive".to_string()));
    }
    let reduced = reduction::lll_reduce(q)?;
    let mut out: Vec<ShortVector> = enumerate_unreduced(&reduced.reduced, bound)?
        .into_iter()
        .map(|sv| ShortVector { value: sv.value, vector: canonical_sign(reduced.transform.apply(&sv.vector)) })
        .collect();
    out.sort();
    Ok(out)
}

/// `λ₁(q)` and the complete set of minimal vectors up to sign.
pub fn arithmetical_minimum(q: &QuadForm) -> Result<MinimalVectorSet> {
    q.require_positive_definite()?;
    let reduced = reduction::lll_reduce(q)?;
    // the shortest reduced basis vector bounds λ₁ from above
    let bound = (0..q.dim()).map(|i| reduced.reduced.get(i, i).clone()).min().expect("dim ≥ 1");
    let found = enumerate_unreduced(&reduced.reduced, &bound)?;
    let form_min = found.iter().map(|sv| sv.value.clone()).min().expect("basis vectors are within the bound");
    let mut vectors: Vec<IntVector> = found
        .into_iter()
        .filter(|sv| sv.value == form_min)
        .map(|sv| canonical_sign(reduced.transform.apply(&sv.vector)))
        .collect();
    vectors.sort();
    Ok(MinimalVectorSet { form_min, vectors })
}

/// Greedy rank extension over vectors sorted by `(q[x], x)`.
fn greedy_independent(d: usize, sorted: &[ShortVector], k: usize) -> SuccessiveMinima {
    let mut echelon = RowEchelon::new(d);
    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    for sv in sorted {
        if values.len() == k {
            break;
        }
        if echelon.insert_int(&sv.vector) {
            values.push(sv.value.clone());
            witnesses.push(sv.vector.clone());
        }
    }
    SuccessiveMinima { values, witnesses }
}

/// The first `k` successive minima `λ₁ ≤ … ≤ λ_k`.
pub fn successive_minima(q: &QuadForm, k: usize) -> Result<SuccessiveMinima> {
    q.require_positive_definite()?;
    let d = q.dim();
    if k == 0 || k > d {
        return Err(Error::OutOfRange("k must lie in 1..=d".to_string()));
    }
    let mut bound = arithmetical_minimum(q)?.form_min;
    loop {
        let vectors = vectors_below(q, &bound)?;
        let minima = greedy_independent(d, &vectors, k);
        if minima.values.len() == k {
            return Ok(minima);
        }
        bound *= Rational::from_integer(BigInt::from(2));
    }
}
