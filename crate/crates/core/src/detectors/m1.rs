//! Last-element alignment between the registered list and the extracted one.
//!
//! * Case 1: the last registered entry equals the last extracted one; no
//!   sneaked references.
//! * Case 2: an earlier registered entry equals the last extracted one; the
//!   entries after it are candidates. Leading candidates without the
//!   beneficiary prefix are dropped (the extractor truncated the list).
//! * Case 3: nothing equals the last extracted entry, which is taken as an
//!   extraction artifact. The maximal trailing block of beneficiary-prefix
//!   entries is reported.

use serde::{Deserialize, Serialize};

use super::BenefitPrefix;
use crate::extract::ExtractedRef;
use crate::ingest::ReferenceEntry;
use crate::matchcore::{refs_equal, MatchError};

pub const ALL_PREFIX_WARNING: &str = "all-prefix list";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum M1Case {
    Case1,
    Case2,
    Case3,
    NoData,
}

impl M1Case {
    pub fn as_str(self) -> &'static str {
        match self {
            M1Case::Case1 => "case1",
            M1Case::Case2 => "case2",
            M1Case::Case3 => "case3",
            M1Case::NoData => "nodata",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M1Verdict {
    pub case_id: M1Case,
    /// Trailing block of the registered list judged sneaked.
    pub ghost: Vec<ReferenceEntry>,
    /// Case 2 candidates removed by cleaning.
    pub cleaned_away: usize,
    /// Position in the registered list matched to the last extracted entry.
    pub matched_position: Option<usize>,
    pub warnings: Vec<String>,
}

impl M1Verdict {
    fn new(case_id: M1Case) -> Self {
        M1Verdict {
            case_id,
            ghost: Vec::new(),
            cleaned_away: 0,
            matched_position: None,
            warnings: Vec::new(),
        }
    }
}

pub fn m1_classify(
    r_c: &[ReferenceEntry],
    r_g: &[ExtractedRef],
    prefix: &BenefitPrefix,
    theta_eq: f64,
) -> Result<M1Verdict, MatchError> {
    let (Some(last_c), Some(last_g)) = (r_c.last(), r_g.last()) else {
        return Ok(M1Verdict::new(M1Case::NoData));
    };
    // An undecidable comparison establishes no equality.
    let equal = |entry: &ReferenceEntry| -> Result<bool, MatchError> {
        match refs_equal(entry, last_g, theta_eq) {
            Err(MatchError::Undecidable) => Ok(false),
            other => other,
        }
    };

    if equal(last_c)? {
        let mut v = M1Verdict::new(M1Case::Case1);
        v.matched_position = Some(r_c.len() - 1);
        return Ok(v);
    }

    let mut matched = None;
    for (i, entry) in r_c[..r_c.len() - 1].iter().enumerate().rev() {
        if equal(entry)? {
            matched = Some(i);
            break;
        }
    }

    match matched {
        Some(i) => {
            let candidates = &r_c[i + 1..];
            let cleaned = candidates.iter().position(|e| prefix.matches(e)).unwrap_or(candidates.len());
            let mut v = M1Verdict::new(M1Case::Case2);
            v.matched_position = Some(i);
            v.cleaned_away = cleaned;
            v.ghost = candidates[cleaned..].to_vec();
            Ok(v)
        }
        None => {
            let trailing = r_c.iter().rev().take_while(|e| prefix.matches(e)).count();
            let mut v = M1Verdict::new(M1Case::Case3);
            v.ghost = r_c[r_c.len() - trailing..].to_vec();
            if trailing == r_c.len() {
                v.warnings.push(ALL_PREFIX_WARNING.to_string());
            }
            Ok(v)
        }
    }
}
