//! Voronoi domains, perfection certificates and the exact checks built on
//! them: the simplex volume lower bound, the disjointness inequality between
//! domains, and the integral-system argument bounding the minimum of
//! primitive integral perfect forms.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bounds;
use crate::cone;
use crate::enumeration::{self, MinimalVectorSet};
use crate::error::{Error, Result};
use crate::form::{index_pairs, sym_dim, IntVector, QuadForm, Rational};
use crate::linalg::{self, IntMatrix, RowEchelon};
use crate::reduction::{self, ReductionResult};
use crate::sqrt2::{self, QSqrt2};

/// Largest dimension for which facets are computed unless the caller raises it.
pub const DEFAULT_FACET_CAP: usize = 5;

/// `φ′(xxᵗ)`: the generator `xxᵗ` in integral coordinates.
pub fn generator_coordinates(x: &[BigInt]) -> IntVector {
    QuadForm::outer(x).phi_prime().expect("outer products of integer vectors are integral")
}

/// Facet normal in `φ′` coordinates to the symmetric matrix `F` with
/// `⟨F, xxᵗ⟩ = normal · φ′(xxᵗ)`.
fn functional_from_normal(d: usize, normal: &[BigInt]) -> QuadForm {
    let mut m = alloc::vec![alloc::vec![Rational::zero(); d]; d];
    for ((i, j), c) in index_pairs(d).zip(normal) {
        m[i][j] = Rational::from_integer(c.clone());
        m[j][i] = Rational::from_integer(c.clone());
    }
    QuadForm::new(m).expect("symmetric by construction")
}

/// The cone spanned by `xxᵗ` over the minimal vectors of a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiDomain {
    pub source: QuadForm,
    pub minimum: Rational,
    /// Minimal vectors `x`, one per `±` pair; the generators are `xxᵗ`.
    pub generators: Vec<IntVector>,
    pub rank: usize,
    /// Inward facet functionals `F` with `⟨F, xxᵗ⟩ ≥ 0` on every generator.
    pub facets: Option<Vec<QuadForm>>,
}

impl VoronoiDomain {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.n()
    }

    pub fn generator_forms(&self) -> Vec<QuadForm> {
        self.generators.iter().map(|x| QuadForm::outer(x)).collect()
    }

    /// Exact membership of a symmetric matrix in the (full-rank) domain.
    pub fn contains(&self, p: &QuadForm) -> Result<bool> {
        let facets = self
            .facets
            .as_ref()
            .ok_or_else(|| Error::OutOfRange("membership needs the facet description".into()))?;
        for f in facets {
            if f.trace_inner(p)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators on which the facet functional vanishes.
    pub fn facet_support(&self, facet: &QuadForm) -> Result<Vec<IntVector>> {
        let mut out = Vec::new();
        for x in &self.generators {
            if facet.evaluate(x)?.is_zero() {
                out.push(x.clone());
            }
        }
        Ok(out)
    }
}

pub fn voronoi_domain(q: &QuadForm, with_facets: bool) -> Result<VoronoiDomain> {
    voronoi_domain_with_cap(q, with_facets, DEFAULT_FACET_CAP)
}

pub fn voronoi_domain_with_cap(q: &QuadForm, with_facets: bool, cap: usize) -> Result<VoronoiDomain> {
    let d = q.dim();
    if with_facets && d > cap {
        return Err(Error::CapExceeded { dim: d, cap });
    }
    let MinimalVectorSet { form_min, vectors } = enumeration::arithmetical_minimum(q)?;
    domain_from_minimal_vectors(q, form_min, vectors, with_facets)
}

pub(crate) fn domain_from_minimal_vectors(
    q: &QuadForm,
    minimum: Rational,
    generators: Vec<IntVector>,
    with_facets: bool,
) -> Result<VoronoiDomain> {
    let coords: Vec<IntVector> = generators.iter().map(|x| generator_coordinates(x)).collect();
    let rank = linalg::integer_rank(&coords);
    let facets = if with_facets {
        if rank < q.n() {
            return Err(Error::NotPerfect { rank, expected: q.n() });
        }
        Some(cone::facets(&coords)?.iter().map(|h| functional_from_normal(q.dim(), h)).collect())
    } else {
        None
    };
    Ok(VoronoiDomain { source: q.clone(), minimum, generators, rank, facets })
}

/// Whether the minimal vectors determine the form, i.e. the Voronoi domain
/// has full rank `d(d+1)/2`.
pub fn is_perfect(q: &QuadForm) -> Result<bool> {
    let domain = voronoi_domain(q, false)?;
    // a full-rank domain needs at least n generators
    debug_assert!(!domain.is_full_rank() || domain.generators.len() >= domain.n());
    Ok(domain.is_full_rank())
}

/// `n` minimal vectors with linearly independent `φ(xxᵗ)`, and the exact
/// volume of the simplex spanned by `0` and the trace-normalized generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectionCertificate {
    pub subset: Vec<IntVector>,
    /// `det W` with rows `φ(xxᵗ / xᵗx)`.
    pub det_w: QSqrt2,
    /// `|det W| / n!`.
    pub simplex_volume: QSqrt2,
}

/// Rows `φ(xxᵗ / xᵗx)` of the certificate matrix.
pub fn normalized_generator_rows(subset: &[IntVector]) -> Vec<Vec<QSqrt2>> {
    subset
        .iter()
        .map(|x| {
            let norm = Rational::from_integer(x.iter().map(|c| c * c).sum());
            QuadForm::outer(x).scale(&norm.recip()).phi().coords().to_vec()
        })
        .collect()
}

pub fn perfection_certificate(q: &QuadForm) -> Result<PerfectionCertificate> {
    let minimal = enumeration::arithmetical_minimum(q)?;
    certificate_from_vectors(q.n(), &minimal.vectors)
}

/// Greedy lexicographic selection of `n` independent generators.
pub(crate) fn certificate_from_vectors(n: usize, vectors: &[IntVector]) -> Result<PerfectionCertificate> {
    let mut echelon = RowEchelon::new(n);
    let mut subset = Vec::with_capacity(n);
    let mut sorted = vectors.to_vec();
    sorted.sort();
    for x in sorted {
        if echelon.insert_int(&generator_coordinates(&x)) {
            subset.push(x);
            if subset.len() == n {
                break;
            }
        }
    }
    if subset.len() < n {
        return Err(Error::NotPerfect { rank: subset.len(), expected: n });
    }
    let det_w = sqrt2::determinant(&normalized_generator_rows(&subset));
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    let simplex_volume = det_w.abs().scale(&Rational::new(BigInt::one(), factorial));
    Ok(PerfectionCertificate { subset, det_w, simplex_volume })
}

/// Certificate volume of a small-vector representative against `ℓ_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeCheck {
    pub representative: ReductionResult,
    pub certificate: PerfectionCertificate,
    pub ell_d: QSqrt2,
}

impl VolumeCheck {
    pub fn holds(&self) -> bool {
        self.certificate.simplex_volume >= self.ell_d
    }
}

pub fn volume_lower_bound_check(q: &QuadForm) -> Result<VolumeCheck> {
    let d = q.dim();
    if d < 2 {
        return Err(Error::OutOfRange("volume bound needs d ≥ 2".into()));
    }
    let representative = reduction::small_minvec_representative(q)?;
    let certificate = perfection_certificate(&representative.reduced)?;
    Ok(VolumeCheck { representative, certificate, ell_d: bounds::ell_d_exact(d as u64) })
}

/// The two sides of `⟨R, Q₂⟩ ≥ ⟨R, Q₁⟩` for `R = Σ_{x ∈ Min Q₁} xxᵗ`, both
/// forms scaled to minimum one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessReport {
    pub interior_point: QuadForm,
    /// `⟨R, Q₁⟩`.
    pub own_value: Rational,
    /// `⟨R, Q₂⟩`.
    pub other_value: Rational,
    /// `Min Q₁ ⊆ Min Q₂` after normalization.
    pub minimal_vectors_contained: bool,
}

impl DisjointnessReport {
    pub fn ordering(&self) -> Ordering {
        self.other_value.cmp(&self.own_value)
    }

    /// The inequality holds, with equality exactly when `Min Q₁ ⊆ Min Q₂`.
    pub fn holds(&self) -> bool {
        match self.ordering() {
            Ordering::Less => false,
            Ordering::Equal => self.minimal_vectors_contained,
            Ordering::Greater => !self.minimal_vectors_contained,
        }
    }
}

pub fn disjointness_inequality(q1: &QuadForm, q2: &QuadForm) -> Result<DisjointnessReport> {
    let m1 = enumeration::arithmetical_minimum(q1)?;
    let m2 = enumeration::arithmetical_minimum(q2)?;
    for (q, m) in [(q1, &m1), (q2, &m2)] {
        let rank = linalg::integer_rank(&m.vectors.iter().map(|x| generator_coordinates(x)).collect::<Vec<_>>());
        if rank < q.n() {
            return Err(Error::NotPerfect { rank, expected: q.n() });
        }
    }
    let n1 = q1.scale(&m1.form_min.recip());
    let n2 = q2.scale(&m2.form_min.recip());
    let mut interior_point = QuadForm::outer(&m1.vectors[0]);
    for x in &m1.vectors[1..] {
        interior_point = interior_point.add(&QuadForm::outer(x))?;
    }
    let mut contained = true;
    for x in &m1.vectors {
        if !n2.evaluate(x)?.is_one() {
            contained = false;
        }
    }
    Ok(DisjointnessReport {
        own_value: interior_point.trace_inner(&n1)?,
        other_value: interior_point.trace_inner(&n2)?,
        interior_point,
        minimal_vectors_contained: contained,
    })
}

/// `A = (φ′(x_i x_iᵗ))_i` for the vectors of a perfection certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralSystem {
    pub matrix_a: IntMatrix,
    pub det_a: BigInt,
}

impl IntegralSystem {
    pub fn from_vectors(vectors: &[IntVector]) -> Self {
        let matrix_a: IntMatrix = vectors.iter().map(|x| generator_coordinates(x)).collect();
        let det_a = linalg::integer_determinant(&matrix_a);
        IntegralSystem { matrix_a, det_a }
    }

    /// Every row lies in `Zᵈ ⊕ 2Zⁿ⁻ᵈ` (off-diagonal coordinates even).
    pub fn rows_in_lattice(&self, d: usize) -> bool {
        let pairs: Vec<(usize, usize)> = index_pairs(d).collect();
        self.matrix_a
            .iter()
            .all(|row| row.iter().zip(&pairs).all(|(v, (i, j))| i == j || v.is_even()))
    }
}

/// Outcome of the integral-system argument for a primitive integral perfect form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub representative: ReductionResult,
    pub system: IntegralSystem,
    pub minimum: BigInt,
    /// `adj(A)·𝟙`, integral by construction.
    pub adjugate_row_sums: Vec<BigInt>,
    /// `(λ₁/det A)·adj(A)·𝟙` equals `(Q′_ij)_{i≤j}`.
    pub system_solves_to_form: bool,
    /// `(det A / λ₁)·Q` is integral.
    pub scaled_form_integral: bool,
    /// `λ₁ ≤ |det A|`.
    pub minimum_below_det: bool,
    /// `|det A| ≤ 2^{(n−d)/2}·(d³(d+7)/8)^{n/2}`, compared squared.
    pub hadamard_holds: bool,
    /// `λ₁ ≤ 2^{−(n+d/2)}·(d³(d+7))^{n/2}`, compared squared.
    pub minimum_bound_holds: bool,
}

impl PrimitivityReport {
    pub fn holds(&self) -> bool {
        self.system_solves_to_form
            && self.scaled_form_integral
            && self.minimum_below_det
            && self.hadamard_holds
            && self.minimum_bound_holds
    }
}

pub fn primitivity_scaling_check(q: &QuadForm) -> Result<PrimitivityReport> {
    let d = q.dim();
    let n = sym_dim(d);
    let content = q.content()?;
    if !content.is_one() {
        return Err(Error::NotPrimitive(alloc::string::ToString::to_string(&content)));
    }
    if !is_perfect(q)? {
        let rank = voronoi_domain(q, false)?.rank;
        return Err(Error::NotPerfect { rank, expected: n });
    }
    let representative = reduction::small_minvec_representative(q)?;
    let rep = &representative.reduced;
    let certificate = perfection_certificate(rep)?;
    let system = IntegralSystem::from_vectors(&certificate.subset);
    let minimum = enumeration::arithmetical_minimum(rep)?.form_min.to_integer();

    let a = linalg::to_rational(&system.matrix_a);
    let inverse = linalg::rational_inverse(&a).ok_or(Error::Singular)?;
    let det = Rational::from_integer(system.det_a.clone());
    let adjugate_row_sums: Vec<BigInt> = inverse
        .iter()
        .map(|row| (row.iter().fold(Rational::zero(), |acc, v| acc + v) * &det).to_integer())
        .collect();
    let lambda = Rational::from_integer(minimum.clone());
    let solved: Vec<Rational> = adjugate_row_sums
        .iter()
        .map(|s| Rational::from_integer(s.clone()) * &lambda / &det)
        .collect();
    let upper: Vec<Rational> = index_pairs(d).map(|(i, j)| rep.get(i, j).clone()).collect();

    let factor = &det / &lambda;
    let scaled_form_integral = q.scale(&factor).is_integral() && rep.scale(&factor).is_integral();

    let bound = reduction::short_vector_bound(d);
    let hadamard_rhs = Rational::from_integer(BigInt::one() << (n - d)) * num_traits::pow(bound, n);
    let det_sq = Rational::from_integer(&system.det_a * &system.det_a);

    let dd = BigInt::from(d);
    let core = &dd * &dd * &dd * (&dd + 7);
    let lambda_sq_bound = Rational::new(num_traits::pow(core, n), BigInt::one() << (2 * n + d));

    Ok(PrimitivityReport {
        system_solves_to_form: solved == upper,
        scaled_form_integral,
        minimum_below_det: minimum <= system.det_a.abs(),
        hadamard_holds: det_sq <= hadamard_rhs,
        minimum_bound_holds: &lambda * &lambda <= lambda_sq_bound,
        adjugate_row_sums,
        representative,
        system,
        minimum,
    })
}
