//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed here and not configurable.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use perfect_forms::commands;
use perfect_forms::plot;
use perfect_forms_core::bounds::{self, Evaluator};
use perfect_forms_core::catalog;
use perfect_forms_core::perfection::{self, disjointness_inequality, volume_lower_bound_check};
use perfect_forms_core::reduction::{hkz_reduce, small_representative_report, transference_check};
use perfect_forms_core::walk::{self, contiguous_form, PerfectFormClass};
use perfect_forms_core::{
    arithmetical_minimum, successive_minima, vectors_below, QuadForm, Rational, UnimodularMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_f0e5;
const COUNT_TIME_LIMIT: Duration = Duration::from_secs(300);
const CORPUS_SIZE: usize = 200;
const ORACLE_INSTANCES: usize = 500;
/// Relative agreement of the bound evaluations, as `10^{-DIGITS}`.
const DIGITS: u32 = 25;
const PRECISION_BITS: usize = 200;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn form(rows: &[Vec<i64>]) -> QuadForm {
    QuadForm::from_integers(rows).expect("symmetric")
}

fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> QuadForm {
    loop {
        let mut rows = vec![vec![0i64; d]; d];
        for i in 0..d {
            rows[i][i] = rng.gen_range(1..=12);
            for j in i + 1..d {
                let v = rng.gen_range(-4..=4);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let q = form(&rows);
        if q.is_positive_definite() {
            return q;
        }
    }
}

/// `BᵗB` for a random nonsingular integer `B`.
fn random_gram(rng: &mut ChaCha8Rng, d: usize) -> QuadForm {
    loop {
        let b: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let rows: Vec<Vec<i64>> =
            (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| b[k][i] * b[k][j]).sum()).collect()).collect();
        let q = form(&rows);
        if q.is_positive_definite() {
            return q;
        }
    }
}

/// Random PD integer forms with `2 ≤ d ≤ 5`, half of them Gram matrices.
fn corpus(rng: &mut ChaCha8Rng) -> Vec<QuadForm> {
    (0..CORPUS_SIZE)
        .map(|k| {
            let d = 2 + k % 4;
            if k % 2 == 0 {
                random_symmetric(rng, d)
            } else {
                random_gram(rng, d)
            }
        })
        .collect()
}

/// A product of transvations with large multipliers.
fn adversarial_unimodular(rng: &mut ChaCha8Rng, d: usize) -> UnimodularMatrix {
    let mut u = UnimodularMatrix::identity(d);
    for _ in 0..d {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let mut m: Vec<Vec<i64>> = (0..d).map(|r| (0..d).map(|c| i64::from(r == c)).collect()).collect();
        let t = rng.gen_range(5..=30);
        m[i][j] = if rng.gen_bool(0.5) { t } else { -t };
        u = u.mul(&UnimodularMatrix::from_rows(&m).expect("transvation"));
    }
    u
}

fn catalog_forms() -> Vec<(String, QuadForm)> {
    catalog::entries().into_iter().map(|e| (e.name, e.form)).collect()
}

fn criterion_counts(classes: &mut Vec<(usize, Vec<PerfectFormClass>)>) -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for d in 2..=5 {
        let found = walk::enumerate_perfect_forms(d).map_err(err)?;
        counts.push(found.len());
        classes.push((d, found));
    }
    let elapsed = start.elapsed();
    check(counts == [1, 1, 2, 3], || format!("counts {counts:?}, expected [1, 1, 2, 3]"))?;
    check(elapsed <= COUNT_TIME_LIMIT, || format!("took {elapsed:.1?}, limit {COUNT_TIME_LIMIT:?}"))?;
    Ok(format!("d=2..5 -> {counts:?} in {elapsed:.1?} (limit {COUNT_TIME_LIMIT:?})"))
}

fn criterion_hkz(corpus: &[QuadForm]) -> Outcome {
    let mut rows = 0;
    for q in corpus {
        let reduced = hkz_reduce(q).map_err(err)?.reduced;
        let minima = successive_minima(q, q.dim()).map_err(err)?.values;
        for (i, lambda) in minima.iter().enumerate() {
            let factor = Rational::new(int(i as i64 + 4), int(4));
            check(*reduced.get(i, i) <= factor * lambda, || {
                format!("Q'_{i}{i} = {} > ({}+3)/4·{lambda} for {:?}", reduced.get(i, i), i + 1, q.entries())
            })?;
            rows += 1;
        }
    }
    Ok(format!("{} forms, {rows} diagonal entries, 0 violations", corpus.len()))
}

fn criterion_transference(corpus: &[QuadForm]) -> Outcome {
    let mut products = 0;
    let catalog = catalog_forms();
    for q in corpus.iter().chain(catalog.iter().map(|(_, q)| q)) {
        let report = transference_check(q).map_err(err)?;
        check(report.holds(), || format!("violated for {:?}: {:?}", q.entries(), report.products))?;
        products += report.products.len();
    }
    Ok(format!("{} forms ({} catalog), {products} products <= d^2, 0 violations", corpus.len() + catalog.len(), catalog.len()))
}

fn criterion_small_representative(corpus: &[QuadForm], rng: &mut ChaCha8Rng) -> Outcome {
    let mut inputs: Vec<QuadForm> = corpus.to_vec();
    inputs.push(form(&[vec![2, 1], vec![1, 2]]).apply_unimodular(&UnimodularMatrix::from_rows(&[vec![1, 10], vec![0, 1]]).unwrap()).unwrap());
    let mut adversarial = 0;
    for (_, q) in catalog_forms() {
        for _ in 0..3 {
            let u = adversarial_unimodular(rng, q.dim());
            inputs.push(q.apply_unimodular(&u).map_err(err)?);
            adversarial += 1;
        }
    }
    for q in &inputs {
        let report = small_representative_report(q).map_err(err)?;
        check(report.max_norm <= report.bound, || {
            format!("max x^tx = {} > {} for {:?}", report.max_norm, report.bound, q.entries())
        })?;
        check(report.normalized_dual_trace <= report.bound, || {
            format!("Tr(Q'^-1) = {} > {} for {:?}", report.normalized_dual_trace, report.bound, q.entries())
        })?;
        // The reported vectors really are minimal vectors of the representative.
        let normalized = report.result.reduced.scale(&report.result.scale);
        let fresh = arithmetical_minimum(&normalized).map_err(err)?;
        check(fresh.form_min.is_one() && fresh.vectors == report.minimal_vectors, || {
            format!("representative of {:?} is not normalized", q.entries())
        })?;
    }
    Ok(format!("{} forms ({adversarial} conjugated catalog forms), x^tx and Tr(Q'^-1) <= d^3(d+7)/8", inputs.len()))
}

fn criterion_volume(classes: &[(usize, Vec<PerfectFormClass>)]) -> Outcome {
    let mut n = 0;
    for (d, list) in classes {
        for class in list {
            let v = volume_lower_bound_check(&class.representative).map_err(err)?;
            check(v.holds(), || {
                format!("d={d}: volume {} < ell_d {}", v.certificate.simplex_volume, v.ell_d)
            })?;
            n += 1;
        }
    }
    check(n == 7, || format!("expected 7 classes to check, got {n}"))?;
    Ok(format!("{n} classes at d=2..5, exact Q(sqrt2) comparison, 0 violations"))
}

fn strictly_disjoint(q1: &QuadForm, q2: &QuadForm) -> Result<(), String> {
    let r = disjointness_inequality(q1, q2).map_err(err)?;
    check(r.other_value > r.own_value && !r.minimal_vectors_contained, || {
        format!("<R,Q'> = {} vs <R,Q> = {} for {:?} / {:?}", r.other_value, r.own_value, q1.entries(), q2.entries())
    })
}

fn criterion_disjointness() -> Outcome {
    let binary: Vec<QuadForm> = walk::binary_cells(plot::MAX_RAY_NORM).map_err(err)?.into_iter().map(|c| c.form).collect();
    let mut pairs = 0;
    for (i, a) in binary.iter().enumerate() {
        for (j, b) in binary.iter().enumerate() {
            if i != j {
                strictly_disjoint(a, b)?;
                pairs += 1;
            }
        }
    }
    // D4 against the neighbours the walk reaches through its facets.
    let d4 = catalog::d_d(4);
    let domain = perfection::voronoi_domain(&d4, true).map_err(err)?;
    let mut forms = vec![d4.clone()];
    for facet in domain.facets.expect("facets requested") {
        let next = contiguous_form(&d4, &facet).map_err(err)?;
        if !forms.iter().any(|f| f.primitive_integral().0 == next.primitive_integral().0) {
            forms.push(next);
        }
    }
    let mut classes = BTreeSet::new();
    for f in &forms {
        classes.insert(arithmetical_minimum(f).map_err(err)?.count());
    }
    check(classes.len() == 2, || format!("walk from D4 reached classes with min counts {classes:?}"))?;
    let mut d4_pairs = 0;
    for (i, a) in forms.iter().enumerate() {
        for (j, b) in forms.iter().enumerate() {
            if i != j {
                strictly_disjoint(a, b)?;
                d4_pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} ordered pairs of {} binary forms, {d4_pairs} ordered pairs among D4 and its {} neighbours, all strict",
        binary.len(),
        forms.len() - 1
    ))
}

fn criterion_bound_identity() -> Outcome {
    let mut ev = Evaluator::new(PRECISION_BITS).map_err(err)?;
    for d in 2..=200u64 {
        let r = ev.report(d).map_err(err)?;
        let via_volumes = ev.sub(&r.log_u, &r.log_ell);
        check(ev.agrees(&r.log_pd_bound, &via_volumes, DIGITS), || format!("d={d}: ln bound and ln u - ln ell differ"))?;
    }
    let pi = ev.pi();
    let exact = ev.mul(&pi, &ev.from_rational(&Rational::new(int(373248), int(1024))));
    let closed = ev.closed_value(&bounds::pd_upper_bound_closed(2).map_err(err)?);
    let log2 = ev.log_pd_bound(2).map_err(err)?;
    let via_log = ev.exp(&log2);
    check(ev.agrees(&closed, &exact, DIGITS), || "d=2 closed form differs from pi*373248/1024".into())?;
    check(ev.agrees(&via_log, &exact, DIGITS), || "d=2 log path differs from pi*373248/1024".into())?;
    let log8 = ev.log_pd_bound(8).map_err(err)?;
    let ln_count = ev.ln_rational(&Rational::from_integer(int(10916)));
    check(log8.cmp(&ln_count).is_some_and(|c| c > 0), || "d=8 bound does not exceed 10916".into())?;
    let (mantissa, exponent) = ev.scientific(&log8);
    Ok(format!(
        "d=2..200 at 1e-{DIGITS} relative; d=2 = pi*373248/1024 = {}; d=8 bound {}e{exponent} > 10916",
        ev.decimal(&exact, 12),
        ev.decimal(&mantissa, 6)
    ))
}

fn criterion_primitivity() -> Outcome {
    let mut ev = Evaluator::new(PRECISION_BITS).map_err(err)?;
    let mut names = Vec::new();
    for (name, q) in catalog_forms() {
        let report = perfection::primitivity_scaling_check(&q).map_err(err)?;
        check(report.scaled_form_integral, || format!("{name}: (det A/lambda1)Q not integral"))?;
        check(report.system_solves_to_form, || format!("{name}: system does not recover Q"))?;
        check(report.minimum_below_det, || format!("{name}: lambda1 > |det A|"))?;
        check(report.hadamard_holds, || format!("{name}: |det A| above the Hadamard bound"))?;
        check(report.minimum_bound_holds, || format!("{name}: exact lambda1 bound fails"))?;
        let ln_min = ev.ln_rational(&Rational::from_integer(report.minimum.clone()));
        let ln_bound = ev.log_lambda1_bound(q.dim() as u64).map_err(err)?;
        check(ln_min.cmp(&ln_bound).is_some_and(|c| c <= 0), || format!("{name}: lambda1 > exp(bound)"))?;
        names.push(format!("{name}(det A={})", report.system.det_a.abs()));
    }
    Ok(format!("{} catalog forms: {}", names.len(), names.join(" ")))
}

/// Expected rays; `(−3,2)` is the ray between `(−1,1)` and `(−2,1)`.
const PLANE_RAYS: [[i64; 2]; 16] = [
    [0, 1], [1, 0], [1, 1], [-1, 1], [1, 2], [-1, 2], [2, 1], [-2, 1],
    [1, 3], [-1, 3], [3, 1], [-3, 1], [2, 3], [-2, 3], [3, 2], [-3, 2],
];

/// Expected cells as ray triples, labeled ones with their form.
fn plane_cells() -> Vec<(Option<[[i64; 2]; 2]>, [[i64; 2]; 3])> {
    vec![
        (Some([[2, -1], [-1, 2]]), [[1, 0], [0, 1], [1, 1]]),
        (Some([[2, 1], [1, 2]]), [[1, 0], [0, 1], [-1, 1]]),
        (Some([[6, -3], [-3, 2]]), [[1, 1], [1, 2], [0, 1]]),
        (Some([[2, -3], [-3, 6]]), [[1, 1], [2, 1], [1, 0]]),
        (Some([[2, 3], [3, 6]]), [[-1, 1], [-2, 1], [1, 0]]),
        (Some([[6, 3], [3, 2]]), [[-1, 1], [-1, 2], [0, 1]]),
        (None, [[1, 1], [2, 3], [1, 2]]),
        (None, [[1, 2], [1, 3], [0, 1]]),
        (None, [[0, 1], [-1, 3], [-1, 2]]),
        (None, [[-1, 2], [-2, 3], [-1, 1]]),
        (None, [[-1, 1], [-3, 2], [-2, 1]]),
        (None, [[-2, 1], [-3, 1], [1, 0]]),
        (None, [[1, 0], [3, 1], [2, 1]]),
        (None, [[2, 1], [3, 2], [1, 1]]),
    ]
}

fn criterion_plane_fixtures() -> Outcome {
    let a2 = r#"{"dim": 2, "entries": [2, 1, 1, 2]}"#;
    let result = commands::certify(a2, false, false);
    check(result.exit_code == commands::EXIT_OK, || format!("certify A2 exited {}", result.exit_code))?;
    let report: serde_json::Value = serde_json::from_str(&result.stdout).map_err(err)?;
    check(report["perfect"] == serde_json::json!(true), || "A2 not reported perfect".into())?;
    check(report["minimal_vectors"]["vectors"] == serde_json::json!([[0, 1], [1, -1], [1, 0]]), || {
        format!("A2 minimal vectors {}", report["minimal_vectors"]["vectors"])
    })?;

    let p = plot::partition().map_err(err)?;
    let rays: BTreeSet<[i64; 2]> = p.rays.iter().map(|r| r.vector).collect();
    let want_rays: BTreeSet<[i64; 2]> = PLANE_RAYS.into_iter().collect();
    check(rays == want_rays, || format!("ray set {rays:?}"))?;
    for r in &p.rays {
        let x = [int(r.vector[0]), int(r.vector[1])];
        check(r.point == walk::ray_point(&x), || format!("point of {:?}", r.vector))?;
    }

    let got: BTreeSet<(Option<String>, BTreeSet<[i64; 2]>)> = p
        .cells
        .iter()
        .map(|c| (c.labeled.then(|| plot::label(&c.form)), c.rays.iter().copied().collect()))
        .collect();
    let want: BTreeSet<(Option<String>, BTreeSet<[i64; 2]>)> = plane_cells()
        .into_iter()
        .map(|(label, rays)| {
            let label = label.map(|m| plot::label(&form(&[m[0].to_vec(), m[1].to_vec()])));
            (label, rays.into_iter().collect())
        })
        .collect();
    check(got == want, || format!("cells differ: got {got:?}"))?;

    // Incidence is exact cone membership: the rays of a cell are the
    // minimal vectors of its form, and its form is perfect.
    for c in &p.cells {
        let m = arithmetical_minimum(&c.form).map_err(err)?;
        let from_min: BTreeSet<[i64; 2]> = m
            .vectors
            .iter()
            .map(|x| {
                let (a, b) = (x[0].to_i64().unwrap(), x[1].to_i64().unwrap());
                if b < 0 || (b == 0 && a < 0) { [-a, -b] } else { [a, b] }
            })
            .collect();
        let rays: BTreeSet<[i64; 2]> = c.rays.iter().copied().collect();
        check(from_min == rays, || format!("cell {} rays {rays:?} vs Min {from_min:?}", plot::label(&c.form)))?;
        check(perfection::is_perfect(&c.form).map_err(err)?, || format!("{} not perfect", plot::label(&c.form)))?;
    }
    Ok(format!("A2 Min = {{(0,1),(1,-1),(1,0)}}; {} rays, {} cells (6 labeled), incidences match", p.rays.len(), p.cells.len()))
}

/// Exhaustive search over a box containing every `x` with `q[x] ≤ bound`.
fn box_oracle(rows: &[Vec<i64>], bound: i64) -> Vec<(i64, Vec<i64>)> {
    let d = rows.len();
    let inv = invert_f64(rows);
    let radius: Vec<i64> = (0..d).map(|i| (bound as f64 * inv[i][i]).max(0.0).sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let first = x.iter().find(|&&c| c != 0);
        if first.is_some_and(|&c| c > 0) {
            let v: i64 = (0..d).map(|i| (0..d).map(|j| rows[i][j] * x[i] * x[j]).sum::<i64>()).sum();
            if v <= bound {
                out.push((v, x.clone()));
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                out.sort();
                return out;
            }
            if x[k] < radius[k] {
                x[k] += 1;
                break;
            }
            x[k] = -radius[k];
            k += 1;
        }
    }
}

fn invert_f64(rows: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let d = rows.len();
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().map(|&v| v as f64).chain((0..d).map(|j| if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    for c in 0..d {
        let p = (c..d).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let pivot = a[c][c];
        a[c].iter_mut().for_each(|v| *v /= pivot);
        for r in 0..d {
            if r != c {
                let f = a[r][c];
                for k in 0..2 * d {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    a.into_iter().map(|r| r[d..].to_vec()).collect()
}

fn criterion_oracles(rng: &mut ChaCha8Rng) -> Outcome {
    let mut total = 0;
    for k in 0..ORACLE_INSTANCES {
        let d = 1 + k % 4;
        let q = if d == 1 { form(&[vec![rng.gen_range(1..=9)]]) } else { random_symmetric(rng, d) };
        let rows: Vec<Vec<i64>> =
            q.entries().iter().map(|r| r.iter().map(|v| v.to_integer().to_i64().unwrap()).collect()).collect();
        let max_diag = (0..d).map(|i| rows[i][i]).max().unwrap();
        let bound = rng.gen_range(1..=2 * max_diag + 4);
        let want = box_oracle(&rows, bound);
        let got: Vec<(i64, Vec<i64>)> = vectors_below(&q, &Rational::from_integer(int(bound)))
            .map_err(err)?
            .into_iter()
            .map(|sv| (sv.value.to_integer().to_i64().unwrap(), sv.vector.iter().map(|c| c.to_i64().unwrap()).collect()))
            .collect();
        check(got == want, || format!("bound {bound} on {rows:?}: {} vs {} vectors", got.len(), want.len()))?;
        total += want.len();
    }

    let mut ev = Evaluator::new(PRECISION_BITS).map_err(err)?;
    for d in 2..=6u64 {
        let r = ev.report(d).map_err(err)?;
        let closed = [
            bounds::ell_d_closed(d).map_err(err)?,
            bounds::u_d_closed(d).map_err(err)?,
            bounds::pd_upper_bound_closed(d).map_err(err)?,
            bounds::lambda1_upper_bound_closed(d).map_err(err)?,
        ];
        let logs = [&r.log_ell, &r.log_u, &r.log_pd_bound, &r.log_lambda1_bound];
        for (i, (c, log)) in closed.iter().zip(logs).enumerate() {
            let exact = ev.closed_value(c);
            let via_log = ev.exp(log);
            check(ev.agrees(&exact, &via_log, DIGITS), || format!("d={d}: bound #{i} paths disagree"))?;
        }
        // ℓ_d also has an exact value in Q(√2).
        let exact_ell = bounds::ell_d_exact(d);
        let as_float = ev.closed_value(&perfect_forms_core::bounds::ClosedForm {
            coefficient: exact_ell.a.clone(),
            radicand: Rational::one(),
            pi_power: 0,
        });
        let sqrt_part = ev.closed_value(&perfect_forms_core::bounds::ClosedForm {
            coefficient: exact_ell.b.clone(),
            radicand: Rational::from_integer(int(2)),
            pi_power: 0,
        });
        let ell = ev.add(&as_float, &sqrt_part);
        let via_log = ev.exp(&r.log_ell);
        check(ev.agrees(&ell, &via_log, DIGITS), || format!("d={d}: exact ell_d disagrees"))?;
    }
    Ok(format!("{ORACLE_INSTANCES} instances ({total} vectors) match the box search; d=2..6 paths agree at 1e-{DIGITS}"))
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]");
            true
        }
        Err(why) => {
            println!("FAIL {id:>2} {name}: {why} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let corpus = corpus(&mut rng);
    let mut classes = Vec::new();
    let results = [
        run(1, "perfect-form counts", || criterion_counts(&mut classes)),
        run(2, "HKZ diagonal bound", || criterion_hkz(&corpus)),
        run(3, "transference", || criterion_transference(&corpus)),
        run(4, "small-vector representative", || criterion_small_representative(&corpus, &mut rng)),
        run(5, "volume lower bound", || criterion_volume(&classes)),
        run(6, "domain disjointness", criterion_disjointness),
        run(7, "bound identity", criterion_bound_identity),
        run(8, "integral system and minimum bound", criterion_primitivity),
        run(9, "binary partition fixtures", criterion_plane_fixtures),
        run(10, "enumeration and bound oracles", || criterion_oracles(&mut rng)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
