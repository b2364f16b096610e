//! String normalization and similarity primitives used by the detectors.

mod normalize;
mod partial;
mod ratio;

use std::borrow::Cow;

pub use normalize::{collapse_whitespace, name_key, normalize};
pub use partial::{partial_ratio, partial_ratio_chars, PartialMatch};
pub use ratio::{indel_distance, ratio, ratio_chars, SimilarityScore};

use crate::extract::ExtractedRef;
use crate::ingest::ReferenceEntry;

/// Ratio threshold above which two reference strings are the same reference.
pub const DEFAULT_THETA_EQ: f64 = 90.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatchError {
    #[error("needle must not be empty")]
    EmptyNeedle,
    #[error("threshold {0} outside (0, 100]")]
    InvalidThreshold(f64),
    #[error("neither side carries comparable text or DOI")]
    Undecidable,
}

/// Structured fields joined in citation order when `unstructured` is absent.
const SYNTHESIS_FIELDS: &[&[&str]] = &[
    &["author"],
    &["article-title", "volume-title", "series-title"],
    &["journal-title"],
    &["year"],
];

/// The text a registered reference is compared by: `unstructured` when
/// present, else `author. title. container. year. doi` from what exists.
pub fn reference_text(entry: &ReferenceEntry) -> Option<Cow<'_, str>> {
    if let Some(u) = entry.unstructured.as_deref().filter(|u| !u.trim().is_empty()) {
        return Some(Cow::Borrowed(u));
    }
    let mut parts: Vec<&str> = SYNTHESIS_FIELDS
        .iter()
        .filter_map(|alts| {
            alts.iter()
                .find_map(|f| entry.structured.get(*f).map(|s| s.trim()).filter(|s| !s.is_empty()))
        })
        .collect();
    if let Some(doi) = entry.doi.as_deref() {
        parts.push(doi);
    }
    (!parts.is_empty()).then(|| Cow::Owned(parts.join(". ")))
}

/// Whether a registered and an extracted reference denote the same work:
/// equal DOIs, or normalized texts at least `theta_eq` similar.
pub fn refs_equal(a: &ReferenceEntry, b: &ExtractedRef, theta_eq: f64) -> Result<bool, MatchError> {
    if !(theta_eq > 0.0 && theta_eq <= 100.0) {
        return Err(MatchError::InvalidThreshold(theta_eq));
    }
    if let (Some(da), Some(db)) = (&a.doi, &b.doi) {
        if da == db {
            return Ok(true);
        }
    }
    let left = reference_text(a).map(|t| normalize(&t)).filter(|t| !t.is_empty());
    let right = Some(normalize(&b.raw)).filter(|t| !t.is_empty());
    match (left, right) {
        (Some(l), Some(r)) => Ok(ratio(&l, &r).value() >= theta_eq),
        _ => Err(MatchError::Undecidable),
    }
}

/// Registrant prefix of the entry's DOI.
pub fn doi_prefix(entry: &ReferenceEntry) -> Option<String> {
    entry.doi.as_deref().and_then(crate::doi::prefix_of)
}
