//! Voronoi's algorithm: contiguous perfect forms, equivalence up to scale and
//! the enumeration of perfect forms up to similarity in low dimension.
//!
//! Inside the walk forms are scaled to arithmetical minimum one. Returned
//! class representatives are primitive integral and LLL-reduced.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::catalog;
use crate::enumeration::{self, successive_minima, vectors_below};
use crate::error::{Error, Result};
use crate::form::{IntVector, QuadForm, Rational, UnimodularMatrix};
use crate::linalg::{self, RowEchelon};
use crate::perfection::{self, generator_coordinates, VoronoiDomain, DEFAULT_FACET_CAP};
use crate::reduction;

/// Largest dimension accepted when the caller explicitly raises the cap.
pub const OVERRIDE_CAP: usize = 6;

const SEARCH_STEPS: usize = 512;

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

fn normalize(q: &QuadForm) -> Result<QuadForm> {
    let m = enumeration::arithmetical_minimum(q)?.form_min;
    Ok(q.scale(&m.recip()))
}

/// Checks that `facet` is nonnegative on every generator of the domain and
/// vanishes on a set of rank `n − 1`.
fn validate_facet(domain: &VoronoiDomain, facet: &QuadForm) -> Result<()> {
    if facet.dim() != domain.source.dim() {
        return Err(Error::DimensionMismatch { expected: domain.source.dim(), found: facet.dim() });
    }
    let mut echelon = RowEchelon::new(domain.n());
    for x in &domain.generators {
        let v = facet.evaluate(x)?;
        if v.is_negative() {
            return Err(Error::InvalidFacet("functional is negative on a generator".to_string()));
        }
        if v.is_zero() {
            echelon.insert_int(&generator_coordinates(x));
        }
    }
    if echelon.rank() + 1 != domain.n() {
        return Err(Error::InvalidFacet("functional does not support a facet".to_string()));
    }
    Ok(())
}

/// The perfect form on the other side of a facet of `V(q)`.
///
/// `facet` is the functional `F` with `⟨F, xxᵗ⟩ ≥ 0` on the domain of `q`
/// (as returned in [`VoronoiDomain::facets`]). The result is `Q + t*·F` for
/// the normalized `Q` and the least `t* > 0` at which new minimal vectors
/// appear; it has minimum one.
pub fn contiguous_form(q: &QuadForm, facet: &QuadForm) -> Result<QuadForm> {
    let q = normalize(q)?;
    let domain = perfection::voronoi_domain_with_cap(&q, false, usize::MAX)?;
    if !domain.is_full_rank() {
        return Err(Error::NotPerfect { rank: domain.rank, expected: domain.n() });
    }
    validate_facet(&domain, facet)?;

    // bracket a point past t* where Q + tF is still positive definite
    let one = Rational::one();
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    let mut t = one.clone();
    let mut steps = 0;
    let mut below = loop {
        steps += 1;
        if steps > SEARCH_STEPS {
            return Err(Error::SearchFailed("no contiguous form along the facet direction".to_string()));
        }
        let candidate = q.add_scaled(facet, &t)?;
        if !candidate.is_positive_definite() {
            hi = Some(t.clone());
            t = (&lo + &t) / two();
            continue;
        }
        let min = enumeration::arithmetical_minimum(&candidate)?;
        if min.form_min < one {
            break min;
        }
        lo = t.clone();
        t = match &hi {
            Some(h) => (&lo + h) / two(),
            None => &t * two(),
        };
    };

    // walk back to t*: each step lands on the first crossing of a current
    // minimal vector, and t decreases strictly until the minimum is one again
    loop {
        steps += 1;
        if steps > SEARCH_STEPS {
            return Err(Error::SearchFailed("contiguity search did not converge".to_string()));
        }
        let mut next: Option<Rational> = None;
        for x in &below.vectors {
            let qx = q.evaluate(x)?;
            let fx = facet.evaluate(x)?;
            let crossing = (qx - &one) / (-fx);
            if next.as_ref().is_none_or(|n| crossing < *n) {
                next = Some(crossing);
            }
        }
        let t = next.expect("minimal vectors are nonempty");
        let candidate = q.add_scaled(facet, &t)?;
        let min = enumeration::arithmetical_minimum(&candidate)?;
        if min.form_min == one {
            if !perfection::is_perfect(&candidate)? {
                return Err(Error::SearchFailed("contiguous form is not perfect".to_string()));
            }
            return Ok(candidate);
        }
        below = min;
    }
}

/// `q₂ = scale · Uᵗ q₁ U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similarity {
    pub transform: UnimodularMatrix,
    pub scale: Rational,
}

fn column_matrix(columns: &[IntVector]) -> Vec<Vec<Rational>> {
    let d = columns.len();
    (0..d)
        .map(|i| (0..d).map(|j| Rational::from_integer(columns[j][i].clone())).collect())
        .collect()
}

struct Matcher<'a> {
    a: &'a QuadForm,
    b: &'a QuadForm,
    witnesses: Vec<IntVector>,
    witness_gram: Vec<Vec<Rational>>,
    options: Vec<Vec<IntVector>>,
    chosen: Vec<IntVector>,
    x_inverse: Vec<Vec<Rational>>,
}

impl Matcher<'_> {
    fn search(&mut self, i: usize) -> Result<Option<UnimodularMatrix>> {
        let d = self.witnesses.len();
        if i == d {
            return self.finish();
        }
        for k in 0..self.options[i].len() {
            let y = self.options[i][k].clone();
            let mut consistent = true;
            for j in 0..i {
                if self.a.bilinear(&self.chosen[j], &y)? != self.witness_gram[j][i] {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
            self.chosen.push(y);
            if let Some(u) = self.search(i + 1)? {
                return Ok(Some(u));
            }
            self.chosen.pop();
        }
        Ok(None)
    }

    /// `U = Y·X⁻¹` when it is integral, unimodular and carries `a` to `b`.
    fn finish(&self) -> Result<Option<UnimodularMatrix>> {
        let d = self.witnesses.len();
        let y = column_matrix(&self.chosen);
        let mut u = vec![vec![BigInt::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let v: Rational = (0..d).map(|k| &y[i][k] * &self.x_inverse[k][j]).sum();
                if !v.is_integer() {
                    return Ok(None);
                }
                u[i][j] = v.to_integer();
            }
        }
        let Ok(u) = UnimodularMatrix::new(u) else {
            return Ok(None);
        };
        Ok((self.a.apply_unimodular(&u)? == *self.b).then_some(u))
    }
}

/// A unimodular `U` and `α > 0` with `q₂ = α·Uᵗq₁U`, or `None` when the
/// forms are not similar.
///
/// Successive-minima witnesses `X` of the normalized `q₂` are matched against
/// vectors of the normalized `q₁` with equal values and consistent Gram
/// values; every isometry arises this way, so the search is exhaustive.
pub fn equivalent_up_to_scale(q1: &QuadForm, q2: &QuadForm) -> Result<Option<Similarity>> {
    q1.require_positive_definite()?;
    q2.require_positive_definite()?;
    let d = q1.dim();
    if q2.dim() != d {
        return Ok(None);
    }
    let m1 = enumeration::arithmetical_minimum(q1)?;
    let m2 = enumeration::arithmetical_minimum(q2)?;
    if m1.count() != m2.count() {
        return Ok(None);
    }
    let a = q1.scale(&m1.form_min.clone().recip());
    let b = q2.scale(&m2.form_min.clone().recip());
    if a.determinant() != b.determinant() {
        return Ok(None);
    }

    let minima = successive_minima(&b, d)?;
    let top = minima.values.last().expect("d ≥ 1").clone();
    let mut candidates: Vec<(Rational, IntVector)> = Vec::new();
    for sv in vectors_below(&a, &top)? {
        let neg: IntVector = sv.vector.iter().map(|c| -c).collect();
        candidates.push((sv.value.clone(), sv.vector));
        candidates.push((sv.value, neg));
    }
    let mut options: Vec<Vec<IntVector>> = Vec::with_capacity(d);
    for (i, value) in minima.values.iter().enumerate() {
        let mut opts: Vec<IntVector> = candidates
            .iter()
            .filter(|(v, _)| v == value)
            .map(|(_, x)| x.clone())
            .collect();
        if i == 0 {
            // U and −U are both isometries: fix the sign of the first image
            opts = opts.into_iter().step_by(2).collect();
        }
        if opts.is_empty() {
            return Ok(None);
        }
        options.push(opts);
    }

    let witnesses = minima.witnesses;
    let mut witness_gram = vec![vec![Rational::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            witness_gram[i][j] = b.bilinear(&witnesses[i], &witnesses[j])?;
        }
    }
    let x_inverse = linalg::rational_inverse(&column_matrix(&witnesses)).ok_or(Error::Singular)?;
    let mut matcher =
        Matcher { a: &a, b: &b, witnesses, witness_gram, options, chosen: Vec::with_capacity(d), x_inverse };
    Ok(matcher
        .search(0)?
        .map(|transform| Similarity { transform, scale: &m2.form_min / &m1.form_min }))
}

/// Similarity invariants: dimension, `det/λ₁ᵈ`, `|Min|/±` and the sorted
/// multiset of `|xᵗQy|/λ₁` over pairs of distinct minimal vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantKey {
    pub dim: usize,
    pub normalized_det: Rational,
    pub min_count: usize,
    pub gram_values: Vec<Rational>,
}

pub fn invariant_key(q: &QuadForm) -> Result<InvariantKey> {
    let min = enumeration::arithmetical_minimum(q)?;
    let d = q.dim();
    let normalized_det = q.determinant() / num_traits::pow(min.form_min.clone(), d);
    let mut gram_values = Vec::new();
    for (i, x) in min.vectors.iter().enumerate() {
        for y in &min.vectors[i + 1..] {
            gram_values.push(q.bilinear(x, y)?.abs() / &min.form_min);
        }
    }
    gram_values.sort();
    Ok(InvariantKey { dim: d, normalized_det, min_count: min.count(), gram_values })
}

/// A perfect form up to similarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectFormClass {
    /// Primitive integral, LLL-reduced.
    pub representative: QuadForm,
    pub lambda1: BigInt,
    pub min_count: usize,
    pub determinant: BigInt,
    pub key: InvariantKey,
    /// Number of facet crossings from the seed on the discovery path.
    pub path_length: usize,
}

impl PerfectFormClass {
    pub fn from_form(q: &QuadForm, path_length: usize) -> Result<Self> {
        let (primitive, _) = q.primitive_integral();
        let representative = reduction::lll_reduce(&primitive)?.reduced;
        let min = enumeration::arithmetical_minimum(&representative)?;
        Ok(PerfectFormClass {
            lambda1: min.form_min.to_integer(),
            min_count: min.count(),
            determinant: representative.determinant().to_integer(),
            key: invariant_key(&representative)?,
            representative,
            path_length,
        })
    }

    /// The representative scaled to minimum one.
    pub fn normalized(&self) -> QuadForm {
        self.representative.scale(&Rational::from_integer(self.lambda1.clone()).recip())
    }
}

/// State of the walk: classes found so far, grouped by invariant key, and the
/// facets still to be crossed.
#[derive(Clone, Debug)]
pub struct WalkFrontier {
    pub discovered: BTreeMap<InvariantKey, Vec<PerfectFormClass>>,
    /// `(class, facet)`: a facet of the normalized representative of `class`.
    pub pending: VecDeque<(PerfectFormClass, QuadForm)>,
    cap: usize,
}

impl WalkFrontier {
    pub fn new(seed: &QuadForm, cap: usize) -> Result<Self> {
        if seed.dim() > cap {
            return Err(Error::CapExceeded { dim: seed.dim(), cap });
        }
        let mut frontier = WalkFrontier { discovered: BTreeMap::new(), pending: VecDeque::new(), cap };
        let class = PerfectFormClass::from_form(seed, 0)?;
        frontier.admit(class)?;
        Ok(frontier)
    }

    pub fn is_done(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.discovered.values().map(Vec::len).sum()
    }

    fn admit(&mut self, class: PerfectFormClass) -> Result<()> {
        let domain = perfection::voronoi_domain_with_cap(&class.normalized(), true, self.cap)?;
        for facet in domain.facets.expect("facets requested") {
            self.pending.push_back((class.clone(), facet));
        }
        self.discovered.entry(class.key.clone()).or_default().push(class);
        Ok(())
    }

    fn find(&self, class: &PerfectFormClass) -> Result<bool> {
        if let Some(list) = self.discovered.get(&class.key) {
            for known in list {
                if equivalent_up_to_scale(&known.representative, &class.representative)?.is_some() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Crosses one pending facet; returns the class if it is new.
    pub fn step(&mut self) -> Result<Option<PerfectFormClass>> {
        let Some((parent, facet)) = self.pending.pop_front() else {
            return Ok(None);
        };
        let neighbor = contiguous_form(&parent.normalized(), &facet)?;
        let class = PerfectFormClass::from_form(&neighbor, parent.path_length + 1)?;
        if self.find(&class)? {
            return Ok(None);
        }
        self.admit(class.clone())?;
        Ok(Some(class))
    }

    /// Classes sorted by invariant key.
    pub fn into_classes(self) -> Vec<PerfectFormClass> {
        self.discovered.into_values().flatten().collect()
    }
}

/// All perfect forms of dimension `d` up to similarity, seeded from `A_d`.
pub fn enumerate_perfect_forms(d: usize) -> Result<Vec<PerfectFormClass>> {
    enumerate_perfect_forms_with(d, DEFAULT_FACET_CAP, |_| {})
}

/// As [`enumerate_perfect_forms`] with an explicit cap, reporting each class
/// as it is discovered (the seed first).
pub fn enumerate_perfect_forms_with(
    d: usize,
    cap: usize,
    mut on_class: impl FnMut(&PerfectFormClass),
) -> Result<Vec<PerfectFormClass>> {
    if d < 2 {
        return Err(Error::OutOfRange("enumeration needs d ≥ 2".to_string()));
    }
    if d > cap {
        return Err(Error::CapExceeded { dim: d, cap });
    }
    let mut frontier = WalkFrontier::new(&catalog::a_d(d), cap)?;
    for list in frontier.discovered.values() {
        list.iter().for_each(&mut on_class);
    }
    while !frontier.is_done() {
        if let Some(class) = frontier.step()? {
            on_class(&class);
        }
    }
    Ok(frontier.into_classes())
}

/// A cell of the binary partition: a perfect form and the rays of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCell {
    /// Primitive integral.
    pub form: QuadForm,
    /// Minimal vectors `x`, so the rays are `xxᵗ`.
    pub rays: Vec<IntVector>,
}

/// All binary perfect forms whose domains have rays `xxᵗ` with `xᵗx` at most
/// `max_norm`, reached from `(2,1;1,2)` through cells with the same property.
/// Forms are not identified up to equivalence: each cell is a distinct domain.
pub fn binary_cells(max_norm: u64) -> Result<Vec<PlaneCell>> {
    let bound = BigInt::from(max_norm);
    let within = |rays: &[IntVector]| rays.iter().all(|x| x.iter().map(|c| c * c).sum::<BigInt>() <= bound);
    let seed = catalog::a_d(2);
    let mut cells: BTreeMap<Vec<Rational>, PlaneCell> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let seed_rays = enumeration::arithmetical_minimum(&seed)?.vectors;
    if !within(&seed_rays) {
        return Ok(Vec::new());
    }
    queue.push_back(seed);
    while let Some(q) = queue.pop_front() {
        let (form, _) = q.primitive_integral();
        let key: Vec<Rational> = form.entries().iter().flatten().cloned().collect();
        if cells.contains_key(&key) {
            continue;
        }
        let domain = perfection::voronoi_domain(&form, true)?;
        let rays = domain.generators.clone();
        cells.insert(key, PlaneCell { form: form.clone(), rays });
        for facet in domain.facets.expect("facets requested") {
            let next = contiguous_form(&form, &facet)?;
            let next_rays = enumeration::arithmetical_minimum(&next)?.vectors;
            if within(&next_rays) {
                queue.push_back(next);
            }
        }
    }
    Ok(cells.into_values().collect())
}

/// Point of the ray `xxᵗ` on the unit circle of the trace plane.
pub fn ray_point(x: &[BigInt]) -> (Rational, Rational) {
    let (a, b) = (&x[0], &x[1]);
    let norm = a * a + b * b;
    (Rational::new(b * b - a * a, norm.clone()), Rational::new(BigInt::from(2) * a * b, norm))
}
