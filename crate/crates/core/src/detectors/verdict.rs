//! Per-DOI detector output and its JSON-lines / CSV forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{M0Estimate, M1Verdict, M2Verdict};
use crate::ingest::ReferenceEntry;
use crate::matchcore::reference_text;

pub const SNIPPET_CHARS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    M0,
    M1,
    M2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::M0, Method::M1, Method::M2];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::M0 => "m0",
            Method::M1 => "m1",
            Method::M2 => "m2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m0" => Ok(Method::M0),
            "m1" => Ok(Method::M1),
            "m2" => Ok(Method::M2),
            other => Err(format!("unknown detector {other:?} (expected m0, m1, m2 or all)")),
        }
    }
}

/// Whether the detector could run on this DOI at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The registered record carries no references.
    NoReferences,
    /// No PDF in the corpus.
    NoPdf,
    /// The PDF yielded no usable extracted list or text.
    NoInput,
    /// No registered record could be loaded.
    NoRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostRef {
    pub position: usize,
    pub doi: Option<String>,
    pub snippet: String,
}

impl GhostRef {
    pub fn of(entry: &ReferenceEntry) -> Self {
        let snippet = reference_text(entry)
            .map(|t| t.chars().take(SNIPPET_CHARS).collect())
            .unwrap_or_default();
        GhostRef {
            position: entry.position,
            doi: entry.doi.clone(),
            snippet,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub doi: String,
    pub method: Method,
    pub status: Status,
    /// M1 case label; absent for the other methods.
    pub case: Option<String>,
    pub n_registered: usize,
    pub n_extracted: usize,
    pub ghost: Vec<GhostRef>,
    pub undecidable_count: usize,
    #[serde(default)]
    pub cleaned_away: usize,
    /// M0 list-length estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<usize>,
    pub flagged: bool,
    pub warnings: Vec<String>,
}

impl DetectionVerdict {
    pub fn skipped(doi: &str, method: Method, status: Status, n_registered: usize, n_extracted: usize) -> Self {
        DetectionVerdict {
            doi: doi.to_string(),
            method,
            status,
            case: (method == Method::M1).then(|| super::M1Case::NoData.as_str().to_string()),
            n_registered,
            n_extracted,
            ghost: Vec::new(),
            undecidable_count: 0,
            cleaned_away: 0,
            estimate: None,
            flagged: false,
            warnings: Vec::new(),
        }
    }

    pub fn from_m0(doi: &str, m0: &M0Estimate) -> Self {
        let mut v = Self::skipped(doi, Method::M0, Status::Ok, m0.registered_count, m0.extracted_count);
        v.estimate = Some(m0.estimate);
        v.flagged = m0.flagged;
        v
    }

    pub fn from_m1(doi: &str, n_registered: usize, n_extracted: usize, m1: &M1Verdict) -> Self {
        let mut v = Self::skipped(doi, Method::M1, Status::Ok, n_registered, n_extracted);
        v.case = Some(m1.case_id.as_str().to_string());
        v.ghost = m1.ghost.iter().map(GhostRef::of).collect();
        v.cleaned_away = m1.cleaned_away;
        v.flagged = !v.ghost.is_empty();
        v.warnings = m1.warnings.clone();
        v
    }

    pub fn from_m2(doi: &str, n_registered: usize, n_extracted: usize, m2: &M2Verdict) -> Self {
        let mut v = Self::skipped(doi, Method::M2, Status::Ok, n_registered, n_extracted);
        v.ghost = m2.ghost.iter().map(GhostRef::of).collect();
        v.undecidable_count = m2.undecidable.len();
        v.flagged = !v.ghost.is_empty();
        v.warnings = m2.warnings.clone();
        v
    }

    /// Sneaked-reference count: the ghost list, or the estimate for M0.
    pub fn n_ghost(&self) -> usize {
        self.estimate.unwrap_or(self.ghost.len())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

pub const CSV_HEADER: &str = "doi,method,n_registered,n_extracted,n_ghost,case,flagged";

impl DetectionVerdict {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            csv_field(&self.doi),
            self.method,
            self.n_registered,
            self.n_extracted,
            self.n_ghost(),
            self.case.as_deref().unwrap_or(""),
            self.flagged
        )
    }
}

/// Quote a CSV field when it holds a delimiter, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{m0_from_counts, M1Case};
    use std::collections::BTreeMap;

    fn entry(pos: usize, doi: &str, text: &str) -> ReferenceEntry {
        ReferenceEntry {
            key: format!("k{pos}"),
            doi: Some(doi.into()),
            unstructured: Some(text.into()),
            structured: BTreeMap::new(),
            position: pos,
        }
    }

    #[test]
    fn json_round_trip() {
        let m1 = M1Verdict {
            case_id: M1Case::Case2,
            ghost: vec![entry(3, "10.38124/ijisrt/x", &"long text ".repeat(20))],
            cleaned_away: 1,
            matched_position: Some(1),
            warnings: vec![],
        };
        let v = DetectionVerdict::from_m1("10.1/a", 4, 2, &m1);
        assert_eq!(v.ghost[0].snippet.chars().count(), SNIPPET_CHARS);
        let line = v.to_json_line();
        assert!(!line.contains('\n'));
        let json: serde_json::Value = serde_json::from_str(&line).unwrap();
        for key in ["doi", "method", "case", "ghost", "undecidable_count", "warnings"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["case"], "case2");
        assert_eq!(json["ghost"][0]["position"], 3);
        assert_eq!(DetectionVerdict::from_json_line(&line).unwrap(), v);
    }

    #[test]
    fn csv_rows() {
        let v = DetectionVerdict::from_m0("10.1/a,b", &m0_from_counts(100, 94));
        assert_eq!(v.to_csv_row(), "\"10.1/a,b\",m0,100,94,6,,true");
        assert_eq!(CSV_HEADER.split(',').count(), v.to_csv_row().split(',').count() - 1);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("M2".parse::<Method>(), Ok(Method::M2));
        assert!("m9".parse::<Method>().is_err());
    }
}
