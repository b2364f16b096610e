use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::detectors::{DetectionVerdict, M1Case, Method, Status};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusTally {
    pub processed: u64,
    pub no_record: u64,
    pub no_references: u64,
    pub no_pdf: u64,
    pub no_input: u64,
    /// Verdicts the detector actually ran on.
    pub analysed: u64,
    pub flagged: u64,
    pub total_sneaked: u64,
    /// Documents with at least one sneaked reference (the mean's divisor).
    pub with_sneaked: u64,
    pub min_per_doc: u64,
    pub max_per_doc: u64,
    pub mean_per_doc: f64,
    pub undecidable: u64,
    /// M1 only: case label -> documents, plus `case2_cleaned` / `case2_uncleaned`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub cases: BTreeMap<String, u64>,
    /// M1 only: sneaked references per case label.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub case_sneaked: BTreeMap<String, u64>,
    pub cleaned_away: u64,
}

impl CorpusTally {
    /// `(total_sneaked, with_sneaked)`: the mean as an exact fraction.
    pub fn mean_fraction(&self) -> (u64, u64) {
        (self.total_sneaked, self.with_sneaked)
    }
}

/// Corpus totals for the verdicts of one detector.
pub fn tally_corpus<'a>(verdicts: impl IntoIterator<Item = &'a DetectionVerdict>) -> CorpusTally {
    let mut t = CorpusTally::default();
    for v in verdicts {
        t.processed += 1;
        match v.status {
            Status::NoRecord => t.no_record += 1,
            Status::NoReferences => t.no_references += 1,
            Status::NoPdf => t.no_pdf += 1,
            Status::NoInput => t.no_input += 1,
            Status::Ok => t.analysed += 1,
        }
        if v.method == Method::M1 && v.status != Status::NoRecord {
            if let Some(case) = &v.case {
                *t.cases.entry(case.clone()).or_default() += 1;
                *t.case_sneaked.entry(case.clone()).or_default() += v.ghost.len() as u64;
                if case == M1Case::Case2.as_str() {
                    let split = if v.cleaned_away > 0 { "case2_cleaned" } else { "case2_uncleaned" };
                    *t.cases.entry(split.into()).or_default() += 1;
                    *t.case_sneaked.entry(split.into()).or_default() += v.ghost.len() as u64;
                }
            }
        }
        if v.flagged {
            t.flagged += 1;
        }
        t.undecidable += v.undecidable_count as u64;
        t.cleaned_away += v.cleaned_away as u64;
        let n = v.n_ghost() as u64;
        if n > 0 {
            t.total_sneaked += n;
            t.min_per_doc = if t.with_sneaked == 0 { n } else { t.min_per_doc.min(n) };
            t.max_per_doc = t.max_per_doc.max(n);
            t.with_sneaked += 1;
        }
    }
    if t.with_sneaked > 0 {
        t.mean_per_doc = t.total_sneaked as f64 / t.with_sneaked as f64;
    }
    t
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementSummary {
    pub compared: u64,
    pub agree: u64,
    pub disagree: u64,
    pub large_disagreement: u64,
}

/// M1 against M2 on every DOI with registered references and a PDF.
pub fn tally_agreement(verdicts: &[DetectionVerdict]) -> AgreementSummary {
    let mut by_doi: BTreeMap<&str, (Option<&DetectionVerdict>, Option<&DetectionVerdict>)> = BTreeMap::new();
    for v in verdicts {
        let slot = by_doi.entry(v.doi.as_str()).or_default();
        match v.method {
            Method::M1 => slot.0 = Some(v),
            Method::M2 => slot.1 = Some(v),
            Method::M0 => {}
        }
    }
    let mut s = AgreementSummary::default();
    for (m1, m2) in by_doi.values() {
        let (Some(m1), Some(m2)) = (m1, m2) else { continue };
        let comparable = |v: &DetectionVerdict| matches!(v.status, Status::Ok | Status::NoInput);
        if !comparable(m1) || !comparable(m2) {
            continue;
        }
        let rec = crate::detectors::compare_counts(m1.ghost.len(), m2.ghost.len());
        s.compared += 1;
        if rec.agree {
            s.agree += 1;
        } else {
            s.disagree += 1;
        }
        if rec.large_disagreement {
            s.large_disagreement += 1;
        }
    }
    s
}
