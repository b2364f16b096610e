use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::IngestError;
use crate::doi::{normalize_doi, prefix_of};

/// One reference as registered in the work's metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub key: String,
    /// Lowercase and syntactically valid when present.
    pub doi: Option<String>,
    pub unstructured: Option<String>,
    /// Remaining string-valued fields (`author`, `article-title`, `year`, ...).
    /// A `DOI` value that failed validation is kept here verbatim.
    pub structured: BTreeMap<String, String>,
    pub position: usize,
}

impl ReferenceEntry {
    pub fn has_content(&self) -> bool {
        self.doi.is_some()
            || self.unstructured.as_deref().is_some_and(|s| !s.trim().is_empty())
            || self.structured.values().any(|v| !v.trim().is_empty())
    }
}

/// One registered work and its ordered reference list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossrefRecord {
    pub doi: String,
    pub prefix: String,
    pub work_type: String,
    /// `None` when the creation date is missing or unparsable.
    pub created: Option<DateTime<Utc>>,
    pub container_title: Option<String>,
    pub member_id: Option<String>,
    /// Full author names, "given family".
    pub authors: Vec<String>,
    pub references: Vec<ReferenceEntry>,
}

/// Parse one work message: either an API response (`{"message": {...}}`) or
/// a bare snapshot item.
pub fn parse_record(raw: &[u8]) -> Result<CrossrefRecord, IngestError> {
    let value: Value = serde_json::from_slice(raw).map_err(|e| json_error(raw, &e))?;
    record_from_value(&value)
}

pub fn record_from_value(value: &Value) -> Result<CrossrefRecord, IngestError> {
    let msg = match value.get("message") {
        Some(inner) if inner.is_object() => inner,
        _ => value,
    };
    let obj = msg.as_object().ok_or(IngestError::NotAnObject)?;

    let raw_doi = obj
        .get("DOI")
        .and_then(Value::as_str)
        .ok_or(IngestError::MissingDoi)?;
    let doi = normalize_doi(raw_doi).ok_or_else(|| IngestError::InvalidDoi(raw_doi.to_string()))?;
    let prefix = prefix_of(&doi).expect("validated DOI has a prefix");

    let work_type = obj
        .get("type")
        .and_then(Value::as_str)
        .unwrap_or("unknown")
        .to_string();

    let created = obj
        .get("created")
        .and_then(|c| c.get("date-time"))
        .and_then(Value::as_str)
        .and_then(|s| DateTime::parse_from_rfc3339(s).ok())
        .map(|dt| dt.with_timezone(&Utc));

    let container_title = match obj.get("container-title") {
        Some(Value::Array(items)) => items.iter().find_map(Value::as_str),
        Some(Value::String(s)) => Some(s.as_str()),
        _ => None,
    }
    .map(str::trim)
    .filter(|s| !s.is_empty())
    .map(String::from);

    let member_id = obj.get("member").and_then(scalar_string);

    let authors = obj
        .get("author")
        .and_then(Value::as_array)
        .map(|list| list.iter().filter_map(author_name).collect())
        .unwrap_or_default();

    let references = match obj.get("reference") {
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, item)| reference_from_value(item, i))
            .collect(),
        _ => Vec::new(),
    };

    Ok(CrossrefRecord {
        doi,
        prefix,
        work_type,
        created,
        container_title,
        member_id,
        authors,
        references,
    })
}

fn reference_from_value(item: &Value, position: usize) -> ReferenceEntry {
    let mut entry = ReferenceEntry {
        key: String::new(),
        doi: None,
        unstructured: None,
        structured: BTreeMap::new(),
        position,
    };
    let Some(obj) = item.as_object() else {
        if let Some(s) = item.as_str() {
            entry.unstructured = Some(s.to_string());
        }
        return entry;
    };
    for (field, v) in obj {
        let Some(text) = scalar_string(v) else {
            continue;
        };
        match field.as_str() {
            "key" => entry.key = text,
            "DOI" => match normalize_doi(&text) {
                Some(d) => entry.doi = Some(d),
                None => {
                    entry.structured.insert("DOI".into(), text);
                }
            },
            "unstructured" => entry.unstructured = Some(text),
            _ => {
                entry.structured.insert(field.clone(), text);
            }
        }
    }
    entry
}

fn scalar_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn author_name(v: &Value) -> Option<String> {
    if let Some(name) = v.get("name").and_then(Value::as_str) {
        return Some(name.trim().to_string()).filter(|s| !s.is_empty());
    }
    let given = v.get("given").and_then(Value::as_str).unwrap_or("").trim();
    let family = v.get("family").and_then(Value::as_str).unwrap_or("").trim();
    let full = format!("{given} {family}");
    let full = full.trim();
    (!full.is_empty()).then(|| full.to_string())
}

/// Serialize to the snapshot item layout read by [`record_from_value`].
pub fn to_item(record: &CrossrefRecord) -> Value {
    let mut obj = Map::new();
    obj.insert("DOI".into(), json!(record.doi));
    obj.insert("prefix".into(), json!(record.prefix));
    obj.insert("type".into(), json!(record.work_type));
    if let Some(created) = record.created {
        obj.insert(
            "created".into(),
            json!({ "date-time": created.to_rfc3339_opts(chrono::SecondsFormat::Secs, true) }),
        );
    }
    if let Some(title) = &record.container_title {
        obj.insert("container-title".into(), json!([title]));
    }
    if let Some(member) = &record.member_id {
        obj.insert("member".into(), json!(member));
    }
    if !record.authors.is_empty() {
        let authors: Vec<Value> = record.authors.iter().map(|a| json!({ "name": a })).collect();
        obj.insert("author".into(), Value::Array(authors));
    }
    let refs: Vec<Value> = record
        .references
        .iter()
        .map(|r| {
            let mut o = Map::new();
            o.insert("key".into(), json!(r.key));
            for (k, v) in &r.structured {
                o.insert(k.clone(), json!(v));
            }
            if let Some(d) = &r.doi {
                o.insert("DOI".into(), json!(d));
            }
            if let Some(u) = &r.unstructured {
                o.insert("unstructured".into(), json!(u));
            }
            Value::Object(o)
        })
        .collect();
    obj.insert("reference".into(), Value::Array(refs));
    obj.insert("reference-count".into(), json!(record.references.len()));
    Value::Object(obj)
}

fn json_error(raw: &[u8], err: &serde_json::Error) -> IngestError {
    IngestError::Json {
        offset: byte_offset(raw, err.line(), err.column()),
        message: err.to_string(),
    }
}

/// serde_json reports 1-based line and column; translate to a byte offset.
fn byte_offset(raw: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0;
    for _ in 1..line {
        match raw[offset..].iter().position(|&b| b == b'\n') {
            Some(nl) => offset += nl + 1,
            None => return raw.len(),
        }
    }
    (offset + column.saturating_sub(1)).min(raw.len())
}
