//! JSON encodings of forms, vectors and the results built from them.
//!
//! Rationals are `[num, den]` pairs. Integers that fit in an `i64` are JSON
//! numbers; larger ones are decimal strings, and both are accepted on input.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use perfect_forms_core::enumeration::MinimalVectorSet;
use perfect_forms_core::perfection::{PerfectionCertificate, VoronoiDomain};
use perfect_forms_core::{QSqrt2, QuadForm, Rational, ReductionResult, UnimodularMatrix};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Form(#[from] perfect_forms_core::Error),
}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError::Format(msg.into())
}

pub fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

pub fn rational_value(r: &Rational) -> Value {
    json!([int_value(r.numer()), int_value(r.denom())])
}

pub fn vector_value(x: &[BigInt]) -> Value {
    Value::Array(x.iter().map(int_value).collect())
}

pub fn matrix_value(m: &[Vec<BigInt>]) -> Value {
    Value::Array(m.iter().map(|row| vector_value(row)).collect())
}

pub fn sqrt2_value(x: &QSqrt2) -> Value {
    json!({ "a": rational_value(&x.a), "b": rational_value(&x.b), "text": x.to_string() })
}

pub fn form_value(q: &QuadForm) -> Value {
    let entries: Vec<Value> = q.entries().iter().flatten().map(rational_value).collect();
    json!({ "dim": q.dim(), "entries": entries })
}

pub fn minimal_vectors_value(m: &MinimalVectorSet) -> Value {
    let vectors: Vec<Value> = m.vectors.iter().map(|x| vector_value(x)).collect();
    json!({ "lambda1": rational_value(&m.form_min), "vectors": vectors })
}

pub fn reduction_value(r: &ReductionResult) -> Value {
    json!({
        "reduced": form_value(&r.reduced),
        "transform": matrix_value(r.transform.entries()),
        "scale": rational_value(&r.scale),
    })
}

pub fn domain_value(dom: &VoronoiDomain) -> Value {
    let mut v = json!({
        "generators": dom.generators.iter().map(|x| vector_value(x)).collect::<Vec<_>>(),
        "rank": dom.rank,
        "n": dom.n(),
    });
    if let Some(facets) = &dom.facets {
        v["facets"] = Value::Array(facets.iter().map(form_value).collect());
    }
    v
}

pub fn certificate_value(c: &PerfectionCertificate) -> Value {
    json!({
        "subset": c.subset.iter().map(|x| vector_value(x)).collect::<Vec<_>>(),
        "det_w": sqrt2_value(&c.det_w),
        "simplex_volume": sqrt2_value(&c.simplex_volume),
    })
}

pub fn parse_int(v: &Value) -> Result<BigInt, ParseError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad(format!("not an integer: {n}")))
            }
        }
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad(format!("not an integer: {s:?}"))),
        other => Err(bad(format!("not an integer: {other}"))),
    }
}

/// `[num, den]`, or a bare integer.
pub fn parse_rational(v: &Value) -> Result<Rational, ParseError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let num = parse_int(&pair[0])?;
            let den = parse_int(&pair[1])?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
        Value::Array(_) => Err(bad("a rational is a [num, den] pair")),
        other => Ok(Rational::from_integer(parse_int(other)?)),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<BigInt>, ParseError> {
    v.as_array().ok_or_else(|| bad("expected an integer vector"))?.iter().map(parse_int).collect()
}

/// Reads `{"dim": d, "entries": [...]}` with `d²` row-major entries. The
/// upper triangle is used and mirrored; the lower triangle is ignored.
pub fn parse_form(v: &Value) -> Result<QuadForm, ParseError> {
    let obj = v.as_object().ok_or_else(|| bad("a form is a JSON object"))?;
    let d = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing or invalid \"dim\""))? as usize;
    if d == 0 {
        return Err(bad("\"dim\" must be positive"));
    }
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing or invalid \"entries\""))?;
    if entries.len() != d * d {
        return Err(bad(format!("expected {} entries for dim {d}, found {}", d * d, entries.len())));
    }
    let values: Vec<Rational> = entries.iter().map(parse_rational).collect::<Result<_, _>>()?;
    let rows: Vec<Vec<Rational>> = values.chunks(d).map(<[Rational]>::to_vec).collect();
    Ok(QuadForm::from_upper(&rows)?)
}

pub fn parse_form_str(s: &str) -> Result<QuadForm, ParseError> {
    parse_form(&serde_json::from_str(s)?)
}

pub fn parse_unimodular(v: &Value) -> Result<UnimodularMatrix, ParseError> {
    let rows = v.as_array().ok_or_else(|| bad("expected a matrix"))?;
    let m: Vec<Vec<BigInt>> = rows.iter().map(parse_vector).collect::<Result<_, _>>()?;
    Ok(UnimodularMatrix::new(m)?)
}

pub fn parse_reduction(v: &Value) -> Result<ReductionResult, ParseError> {
    Ok(ReductionResult {
        reduced: parse_form(v.get("reduced").ok_or_else(|| bad("missing \"reduced\""))?)?,
        transform: parse_unimodular(v.get("transform").ok_or_else(|| bad("missing \"transform\""))?)?,
        scale: parse_rational(v.get("scale").ok_or_else(|| bad("missing \"scale\""))?)?,
    })
}

pub fn parse_minimal_vectors(v: &Value) -> Result<MinimalVectorSet, ParseError> {
    let form_min = parse_rational(v.get("lambda1").ok_or_else(|| bad("missing \"lambda1\""))?)?;
    let vectors = v
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"vectors\""))?
        .iter()
        .map(parse_vector)
        .collect::<Result<_, _>>()?;
    Ok(MinimalVectorSet { form_min, vectors })
}

/// Serializes with sorted keys, compact or indented.
pub fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("values serialize")
    } else {
        serde_json::to_string(v).expect("values serialize")
    }
}
