//! Per-reference search of the registered reference strings in the full text.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::extract::FullText;
use crate::ingest::ReferenceEntry;
use crate::matchcore::{normalize, partial_ratio_chars, reference_text, SimilarityScore};

pub const DEFAULT_THETA: f64 = 60.0;
pub const DEFAULT_MIN_NEEDLE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2Params {
    /// Best-substring similarity below which a reference counts as sneaked.
    pub theta: f64,
    /// Search strings shorter than this (in chars) are undecidable.
    pub min_needle: usize,
}

impl Default for M2Params {
    fn default() -> Self {
        M2Params {
            theta: DEFAULT_THETA,
            min_needle: DEFAULT_MIN_NEEDLE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryScore {
    pub position: usize,
    pub score: SimilarityScore,
    /// Char span of the best substring in the normalized text.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct M2Verdict {
    pub ghost: Vec<ReferenceEntry>,
    pub undecidable: Vec<ReferenceEntry>,
    /// Every decidable entry, in registered order.
    pub scores: Vec<EntryScore>,
    pub warnings: Vec<String>,
}

impl M2Verdict {
    /// Positions with a score at or above the threshold used.
    pub fn found_positions(&self, theta: f64) -> Vec<usize> {
        self.scores
            .iter()
            .filter(|s| s.score.value() >= theta)
            .map(|s| s.position)
            .collect()
    }
}

enum Outcome {
    Scored(EntryScore),
    Undecidable(String),
}

pub fn m2_detect(r_c: &[ReferenceEntry], fulltext: &FullText, params: &M2Params, exec: Execution) -> M2Verdict {
    let mut verdict = M2Verdict::default();
    if r_c.is_empty() {
        return verdict;
    }
    let haystack: Vec<char> = normalize(&fulltext.text).chars().collect();
    if haystack.is_empty() {
        verdict.undecidable = r_c.to_vec();
        verdict.warnings.push("document text is empty".into());
        return verdict;
    }

    let outcomes = exec::map(exec, r_c, |entry| {
        let Some(text) = reference_text(entry) else {
            return Outcome::Undecidable(format!("reference {} has no text", entry.position));
        };
        let needle: Vec<char> = normalize(&text).chars().collect();
        if needle.len() < params.min_needle {
            return Outcome::Undecidable(format!(
                "reference {} search string shorter than {} chars",
                entry.position, params.min_needle
            ));
        }
        match partial_ratio_chars(&needle, &haystack) {
            Ok(m) => Outcome::Scored(EntryScore {
                position: entry.position,
                score: m.score,
                span: m.span,
            }),
            Err(e) => Outcome::Undecidable(format!("reference {}: {e}", entry.position)),
        }
    });

    for (entry, outcome) in r_c.iter().zip(outcomes) {
        match outcome {
            Outcome::Scored(s) => {
                if s.score.value() < params.theta {
                    verdict.ghost.push(entry.clone());
                }
                verdict.scores.push(s);
            }
            Outcome::Undecidable(why) => {
                verdict.undecidable.push(entry.clone());
                verdict.warnings.push(why);
            }
        }
    }
    verdict
}
