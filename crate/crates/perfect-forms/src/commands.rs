//! The `perfectforms` subcommands as functions from inputs to a payload and
//! an exit code, so they can be tested without spawning a process.

use std::fmt::Write as _;

use perfect_forms_core::bounds::{self, BigFloat, Evaluator};
use perfect_forms_core::enumeration::arithmetical_minimum;
use perfect_forms_core::perfection::{self, DEFAULT_FACET_CAP};
use perfect_forms_core::reduction;
use perfect_forms_core::walk::{self, PerfectFormClass, OVERRIDE_CAP};
use perfect_forms_core::{Error, QuadForm};
use serde_json::{json, Value};

use crate::io::{self, ParseError};
use crate::plot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_POSITIVE_DEFINITE: i32 = 3;
pub const EXIT_NOT_PERFECT: i32 = 4;
pub const EXIT_CAP_EXCEEDED: i32 = 5;

pub const PRECISION_ENV: &str = "PERFECTFORMS_PRECISION_BITS";

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    /// Text for standard output, newline terminated.
    pub stdout: String,
    /// Diagnostic for standard error, if any.
    pub stderr: Option<String>,
}

impl CommandResult {
    fn json(v: &Value, pretty: bool, exit_code: i32) -> Self {
        CommandResult { exit_code, stdout: io::render(v, pretty) + "\n", stderr: None }
    }

    fn failure(exit_code: i32, message: impl Into<String>) -> Self {
        let message = message.into();
        let v = json!({ "error": message });
        CommandResult { exit_code, stdout: io::render(&v, false) + "\n", stderr: Some(message) }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotPositiveDefinite => EXIT_NOT_POSITIVE_DEFINITE,
        Error::NotPerfect { .. } => EXIT_NOT_PERFECT,
        Error::CapExceeded { .. } => EXIT_CAP_EXCEEDED,
        Error::DimensionMismatch { .. }
        | Error::NotSymmetric
        | Error::EmptyForm
        | Error::OutOfRange(_)
        | Error::UnknownEntry(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

fn from_error(err: Error) -> CommandResult {
    CommandResult::failure(exit_code_for(&err), err.to_string())
}

fn from_parse_error(err: ParseError) -> CommandResult {
    match err {
        ParseError::Form(e) => from_error(e),
        other => CommandResult::failure(EXIT_USAGE, other.to_string()),
    }
}

/// Precision from the environment, defaulting to 200 bits.
pub fn precision_from_env() -> Result<usize, String> {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&p| p >= 64)
            .ok_or_else(|| format!("{PRECISION_ENV} must be an integer of at least 64, got {s:?}")),
        Err(_) => Ok(bounds::DEFAULT_PRECISION_BITS),
    }
}

pub fn certify(text: &str, with_facets: bool, pretty: bool) -> CommandResult {
    let q = match io::parse_form_str(text) {
        Ok(q) => q,
        Err(e) => return from_parse_error(e),
    };
    match certify_form(&q, with_facets) {
        Ok((v, code)) => CommandResult::json(&v, pretty, code),
        Err(e) => from_error(e),
    }
}

fn certify_form(q: &QuadForm, with_facets: bool) -> Result<(Value, i32), Error> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let minimal = arithmetical_minimum(q)?;
    let domain = perfection::voronoi_domain(q, with_facets && perfection::is_perfect(q)?)?;
    let mut report = json!({
        "form": io::form_value(q),
        "minimal_vectors": io::minimal_vectors_value(&minimal),
        "min_count": minimal.count(),
        "domain": io::domain_value(&domain),
        "perfect": domain.is_full_rank(),
    });
    if !domain.is_full_rank() {
        return Ok((report, EXIT_NOT_PERFECT));
    }
    let certificate = perfection::perfection_certificate(q)?;
    report["certificate"] = io::certificate_value(&certificate);
    let mut code = EXIT_OK;
    if q.dim() >= 2 {
        let check = perfection::volume_lower_bound_check(q)?;
        report["volume_check"] = json!({
            "representative": io::reduction_value(&check.representative),
            "simplex_volume": io::sqrt2_value(&check.certificate.simplex_volume),
            "ell_d": io::sqrt2_value(&check.ell_d),
            "holds": check.holds(),
        });
        if !check.holds() {
            code = EXIT_CHECK_FAILED;
        }
    }
    Ok((report, code))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReduceMode {
    Lll,
    Hkz,
    Smallrep,
}

pub fn reduce(text: &str, mode: ReduceMode, pretty: bool) -> CommandResult {
    let q = match io::parse_form_str(text) {
        Ok(q) => q,
        Err(e) => return from_parse_error(e),
    };
    match reduce_form(&q, mode) {
        Ok((v, code)) => CommandResult::json(&v, pretty, code),
        Err(e) => from_error(e),
    }
}

fn reduce_form(q: &QuadForm, mode: ReduceMode) -> Result<(Value, i32), Error> {
    let (name, result) = match mode {
        ReduceMode::Lll => ("lll", reduction::lll_reduce(q)?),
        ReduceMode::Hkz => ("hkz", reduction::hkz_reduce(q)?),
        ReduceMode::Smallrep => ("smallrep", reduction::small_minvec_representative(q)?),
    };
    let mut v = json!({
        "mode": name,
        "result": io::reduction_value(&result),
        "minimal_vectors": io::minimal_vectors_value(&arithmetical_minimum(&result.reduced)?),
    });
    let mut code = EXIT_OK;
    match mode {
        ReduceMode::Hkz => {
            let holds = reduction::hkz_diagonal_bound_holds(q, &result.reduced)?;
            v["diagonal_bound_holds"] = json!(holds);
            if !holds {
                code = EXIT_CHECK_FAILED;
            }
        }
        ReduceMode::Smallrep => {
            let report = reduction::small_representative_report(q)?;
            v["short_vector_bound"] = io::rational_value(&report.bound);
            v["max_norm"] = io::rational_value(&report.max_norm);
            v["normalized_dual_trace"] = io::rational_value(&report.normalized_dual_trace);
            v["holds"] = json!(report.holds());
            if !report.holds() {
                code = EXIT_CHECK_FAILED;
            }
        }
        ReduceMode::Lll => {}
    }
    Ok((v, code))
}

/// One bound rendered as natural log, base-10 log and scientific notation.
fn bound_entry(ev: &mut Evaluator, ln_value: &BigFloat) -> Value {
    let log10 = ev.log10_of(ln_value);
    let (mantissa, exponent) = ev.scientific(ln_value);
    json!({
        "ln": ev.decimal(ln_value, 30),
        "log10": ev.decimal(&log10, 30),
        "scientific": format!("{}e{exponent}", ev.decimal(&mantissa, 20)),
    })
}

const BOUND_NAMES: [(&str, &str); 4] = [
    ("ell_d", "simplex volume lower bound"),
    ("u_d", "enclosing volume"),
    ("pd_bound", "bound on the number of perfect forms"),
    ("lambda1_bound", "bound on the minimum of a primitive integral perfect form"),
];

/// Closed forms are cross-checked against the log path up to this dimension.
pub const CLOSED_FORM_MAX_DIM: u64 = 6;

pub fn bound(d: u64, as_json: bool, precision: usize, pretty: bool) -> CommandResult {
    match bound_report(d, precision) {
        Ok(v) if as_json => CommandResult::json(&v, pretty, EXIT_OK),
        Ok(v) => CommandResult { exit_code: EXIT_OK, stdout: bound_text(&v), stderr: None },
        Err(e) => from_error(e),
    }
}

fn bound_report(d: u64, precision: usize) -> Result<Value, Error> {
    let mut ev = Evaluator::new(precision)?;
    let r = ev.report(d)?;
    let logs = [&r.log_ell, &r.log_u, &r.log_pd_bound, &r.log_lambda1_bound];
    let mut v = json!({ "d": d, "n": r.n, "precision_bits": precision });
    for ((key, _), log) in BOUND_NAMES.iter().zip(logs) {
        v[*key] = bound_entry(&mut ev, log);
    }
    if d <= CLOSED_FORM_MAX_DIM {
        let closed = [
            bounds::ell_d_closed(d)?,
            bounds::u_d_closed(d)?,
            bounds::pd_upper_bound_closed(d)?,
            bounds::lambda1_upper_bound_closed(d)?,
        ];
        let mut agree = true;
        for (c, log) in closed.iter().zip(logs) {
            let exact = ev.closed_value(c);
            let via_log = ev.exp(log);
            agree &= ev.agrees(&exact, &via_log, 25);
        }
        v["closed_form_agrees"] = json!(agree);
    }
    Ok(v)
}

fn bound_text(v: &Value) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "d = {}, n = {}, precision = {} bits", v["d"], v["n"], v["precision_bits"]);
    for (key, description) in BOUND_NAMES {
        let e = &v[key];
        let _ = writeln!(s, "{key}: {description}");
        let _ = writeln!(s, "  log10 = {}", e["log10"].as_str().unwrap_or_default());
        let _ = writeln!(s, "  value = {}", e["scientific"].as_str().unwrap_or_default());
    }
    if let Some(agree) = v.get("closed_form_agrees") {
        let _ = writeln!(s, "closed forms agree with the log path: {agree}");
    }
    s
}

pub fn class_value(index: usize, c: &PerfectFormClass) -> Value {
    json!({
        "class": index,
        "representative": io::form_value(&c.representative),
        "lambda1": io::int_value(&c.lambda1),
        "min_count": c.min_count,
        "det": io::int_value(&c.determinant),
        "path_length": c.path_length,
    })
}

/// Streams one JSON line per class through `emit`, then a summary line.
pub fn enumerate(d: usize, cap_override: bool, mut emit: impl FnMut(&str)) -> i32 {
    let cap = if cap_override { OVERRIDE_CAP } else { DEFAULT_FACET_CAP };
    let mut index = 0;
    let result = walk::enumerate_perfect_forms_with(d, cap, |c| {
        emit(&(io::render(&class_value(index, c), false) + "\n"));
        index += 1;
    });
    match result {
        Ok(classes) => {
            emit(&(io::render(&json!({ "dim": d, "count": classes.len() }), false) + "\n"));
            EXIT_OK
        }
        Err(e) => {
            let r = from_error(e);
            emit(&r.stdout);
            if let Some(msg) = r.stderr {
                eprintln!("error: {msg}");
            }
            r.exit_code
        }
    }
}

pub fn plot2d(csv: bool, pretty: bool) -> CommandResult {
    match plot::partition() {
        Ok(p) if csv => CommandResult { exit_code: EXIT_OK, stdout: plot::to_csv(&p), stderr: None },
        Ok(p) => CommandResult::json(&plot::to_json(&p), pretty, EXIT_OK),
        Err(e) => from_error(e),
    }
}
