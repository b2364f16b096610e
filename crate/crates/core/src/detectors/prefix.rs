use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DetectError;
use crate::extract::ExtractedRef;
use crate::ingest::ReferenceEntry;
use crate::matchcore::{doi_prefix, refs_equal};

/// The DOI prefix of the suspected beneficiary. A bare registrant prefix
/// (`10.38124`) compares against the registrant part of each DOI; a value
/// containing `/` (`10.38124/ijisrt`) is matched as a leading DOI string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenefitPrefix(String);

impl BenefitPrefix {
    pub fn new(prefix: &str) -> Result<Self, DetectError> {
        let p = prefix.trim().to_lowercase();
        if !p.starts_with("10.") || p.len() < 4 {
            return Err(DetectError::InvalidPrefix(prefix.to_string()));
        }
        Ok(BenefitPrefix(p))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn matches_doi(&self, doi: &str) -> bool {
        if self.0.contains('/') {
            doi.starts_with(&self.0)
        } else {
            crate::doi::prefix_of(doi).is_some_and(|p| p == self.0)
        }
    }

    pub fn matches(&self, entry: &ReferenceEntry) -> bool {
        if self.0.contains('/') {
            entry.doi.as_deref().is_some_and(|d| self.matches_doi(d))
        } else {
            doi_prefix(entry).is_some_and(|p| p == self.0)
        }
    }
}

impl std::fmt::Display for BenefitPrefix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Prefix counts among the registered entries that follow the last entry
/// matching anything in the extracted list. Heuristic: intended for
/// summing over a corpus before taking the majority.
pub fn trailing_unmatched_prefixes(
    r_c: &[ReferenceEntry],
    r_g: &[ExtractedRef],
    theta_eq: f64,
) -> BTreeMap<String, u64> {
    let last_matched = r_c
        .iter()
        .rposition(|e| r_g.iter().any(|g| refs_equal(e, g, theta_eq) == Ok(true)));
    let start = last_matched.map_or(0, |i| i + 1);
    let mut counts = BTreeMap::new();
    for e in &r_c[start..] {
        if let Some(p) = doi_prefix(e) {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}

/// Heuristic auto-infer mode: the most frequent prefix in summed
/// [`trailing_unmatched_prefixes`] counts (ties go to the smallest prefix).
pub fn infer_benefit_prefix(counts: &BTreeMap<String, u64>) -> Option<BenefitPrefix> {
    let mut best: Option<(&String, u64)> = None;
    for (p, &c) in counts {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((p, c));
        }
    }
    best.and_then(|(p, _)| BenefitPrefix::new(p).ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn e(doi: Option<&str>) -> ReferenceEntry {
        ReferenceEntry {
            key: String::new(),
            doi: doi.map(String::from),
            unstructured: None,
            structured: BTreeMap::new(),
            position: 0,
        }
    }

    #[test]
    fn registrant_and_leading_string_forms() {
        let p = BenefitPrefix::new("10.38124").unwrap();
        assert!(p.matches(&e(Some("10.38124/ijisrt/x"))));
        assert!(!p.matches(&e(Some("10.381249/x"))));
        assert!(!p.matches(&e(None)));
        let q = BenefitPrefix::new("10.38124/IJISRT").unwrap();
        assert!(q.matches(&e(Some("10.38124/ijisrt/ijisrt24apr651"))));
        assert!(!q.matches(&e(Some("10.38124/other/1"))));
        assert!(BenefitPrefix::new("38124").is_err());
    }

    #[test]
    fn majority_inference() {
        let mut counts = BTreeMap::new();
        counts.insert("10.1000".to_string(), 3);
        counts.insert("10.38124".to_string(), 9);
        assert_eq!(infer_benefit_prefix(&counts).unwrap().as_str(), "10.38124");
        assert!(infer_benefit_prefix(&BTreeMap::new()).is_none());
    }
}
