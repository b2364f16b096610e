//! The three detectors (list-length, last-element alignment, full-text
//! search) and the comparison between the latter two.

mod agreement;
mod m0;
mod m1;
mod m2;
mod prefix;
mod verdict;

pub use agreement::{compare_counts, compare_verdicts, AgreementRecord, LARGE_DISAGREEMENT};
pub use m0::{m0_estimate, m0_from_counts, M0Estimate};
pub use m1::{m1_classify, M1Case, M1Verdict, ALL_PREFIX_WARNING};
pub use m2::{m2_detect, EntryScore, M2Params, M2Verdict, DEFAULT_MIN_NEEDLE, DEFAULT_THETA};
pub use prefix::{infer_benefit_prefix, trailing_unmatched_prefixes, BenefitPrefix};
pub use verdict::{csv_field, DetectionVerdict, GhostRef, Method, Status, CSV_HEADER, SNIPPET_CHARS};

use crate::matchcore::MatchError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DetectError {
    #[error("invalid DOI prefix {0:?}")]
    InvalidPrefix(String),
    #[error(transparent)]
    Match(#[from] MatchError),
}
