//! The shipped catalog file, parsed into entries.

use perfect_forms_core::catalog::CatalogEntry;
use serde_json::Value;

use crate::io::{self, ParseError};

pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");
pub const CATALOG_VERSION: u64 = 1;

pub fn load() -> Result<Vec<CatalogEntry>, ParseError> {
    parse(CATALOG_JSON)
}

pub fn parse(text: &str) -> Result<Vec<CatalogEntry>, ParseError> {
    let doc: Value = serde_json::from_str(text)?;
    let version = doc.get("version").and_then(Value::as_u64);
    if version != Some(CATALOG_VERSION) {
        return Err(ParseError::Format(format!("unsupported catalog version {version:?}")));
    }
    let entries = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Format("missing \"entries\"".into()))?;
    entries
        .iter()
        .map(|e| {
            let field = |k: &str| e.get(k).ok_or_else(|| ParseError::Format(format!("entry without \"{k}\"")));
            let number = |k: &str| {
                field(k)?.as_u64().ok_or_else(|| ParseError::Format(format!("\"{k}\" must be a count")))
            };
            Ok(CatalogEntry {
                name: field("name")?
                    .as_str()
                    .ok_or_else(|| ParseError::Format("\"name\" must be a string".into()))?
                    .to_string(),
                form: io::parse_form(field("form")?)?,
                expected_lambda1: number("lambda1")?,
                expected_min_count: number("min_count")? as usize,
            })
        })
        .collect()
}
