//! Who receives the sneaked references, and how soon after publication.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::detectors::DetectionVerdict;

/// Bucket for sneaked references that carry no DOI.
pub const NO_DOI: &str = "(no-doi)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeneficiaryRecord {
    pub cited_doi: String,
    pub undue_count: u64,
    pub cited_created: Option<DateTime<Utc>>,
}

/// Sneaked references grouped by cited DOI, most credited first (ties by DOI).
pub fn beneficiaries<'a>(verdicts: impl IntoIterator<Item = &'a DetectionVerdict>) -> Vec<BeneficiaryRecord> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for v in verdicts {
        for g in &v.ghost {
            *counts.entry(g.doi.as_deref().unwrap_or(NO_DOI)).or_default() += 1;
        }
    }
    let mut out: Vec<BeneficiaryRecord> = counts
        .into_iter()
        .map(|(d, n)| BeneficiaryRecord {
            cited_doi: d.to_string(),
            undue_count: n,
            cited_created: None,
        })
        .collect();
    out.sort_by(|a, b| b.undue_count.cmp(&a.undue_count).then_with(|| a.cited_doi.cmp(&b.cited_doi)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalPair {
    pub citing_doi: String,
    pub cited_doi: String,
    pub citing_created: DateTime<Utc>,
    pub cited_created: DateTime<Utc>,
    /// Calendar days between the UTC dates, citing minus cited.
    pub delta_days: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TemporalSummary {
    pub pairs: u64,
    /// Pairs dropped because a date (or the cited DOI) is unknown.
    pub excluded: u64,
    pub min: Option<i64>,
    pub max: Option<i64>,
    pub median: Option<f64>,
    /// Most frequent delta; the smallest on ties.
    pub mode: Option<i64>,
    pub negative: u64,
}

/// One sneaked reference with whatever dates are known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostDates {
    pub citing_doi: String,
    pub cited_doi: Option<String>,
    pub citing_created: Option<DateTime<Utc>>,
    pub cited_created: Option<DateTime<Utc>>,
}

pub fn day_delta(citing: DateTime<Utc>, cited: DateTime<Utc>) -> i64 {
    (citing.date_naive() - cited.date_naive()).num_days()
}

pub fn temporal_coherence(ghosts: &[GhostDates]) -> (Vec<TemporalPair>, TemporalSummary) {
    let mut pairs = Vec::new();
    let mut summary = TemporalSummary::default();
    for g in ghosts {
        match (&g.cited_doi, g.citing_created, g.cited_created) {
            (Some(cited), Some(a), Some(b)) => pairs.push(TemporalPair {
                citing_doi: g.citing_doi.clone(),
                cited_doi: cited.clone(),
                citing_created: a,
                cited_created: b,
                delta_days: day_delta(a, b),
            }),
            _ => summary.excluded += 1,
        }
    }
    pairs.sort_by(|a, b| (&a.citing_doi, &a.cited_doi, a.delta_days).cmp(&(&b.citing_doi, &b.cited_doi, b.delta_days)));

    let mut deltas: Vec<i64> = pairs.iter().map(|p| p.delta_days).collect();
    deltas.sort_unstable();
    summary.pairs = deltas.len() as u64;
    summary.negative = deltas.iter().filter(|&&d| d < 0).count() as u64;
    if !deltas.is_empty() {
        let n = deltas.len();
        summary.min = deltas.first().copied();
        summary.max = deltas.last().copied();
        summary.median = Some(if n % 2 == 1 {
            deltas[n / 2] as f64
        } else {
            (deltas[n / 2 - 1] + deltas[n / 2]) as f64 / 2.0
        });
        let mut freq: BTreeMap<i64, u64> = BTreeMap::new();
        for &d in &deltas {
            *freq.entry(d).or_default() += 1;
        }
        // BTreeMap iterates ascending, so the first maximum is the smallest delta
        let mut best: Option<(i64, u64)> = None;
        for (d, c) in freq {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((d, c));
            }
        }
        summary.mode = best.map(|(d, _)| d);
    }
    (pairs, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{DetectionVerdict, GhostRef, Method, Status};
    use chrono::TimeZone;

    fn verdict(ghost_dois: &[Option<&str>]) -> DetectionVerdict {
        let mut v = DetectionVerdict::skipped("10.1/c", Method::M2, Status::Ok, ghost_dois.len(), 0);
        v.ghost = ghost_dois
            .iter()
            .enumerate()
            .map(|(i, d)| GhostRef {
                position: i,
                doi: d.map(String::from),
                snippet: String::new(),
            })
            .collect();
        v
    }

    #[test]
    fn grouped_and_sorted() {
        let vs = [verdict(&[Some("10.1/x"), Some("10.1/y")]), verdict(&[Some("10.1/x"), None])];
        let b = beneficiaries(&vs);
        let flat: Vec<(&str, u64)> = b.iter().map(|r| (r.cited_doi.as_str(), r.undue_count)).collect();
        assert_eq!(flat, vec![("10.1/x", 2), (NO_DOI, 1), ("10.1/y", 1)]);
    }

    fn at(y: i32, m: u32, d: u32, h: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(y, m, d, h, 0, 0).unwrap()
    }

    fn dates(citing: Option<DateTime<Utc>>, cited: Option<DateTime<Utc>>) -> GhostDates {
        GhostDates {
            citing_doi: "10.1/c".into(),
            cited_doi: Some("10.1/d".into()),
            citing_created: citing,
            cited_created: cited,
        }
    }

    #[test]
    fn same_day_and_negative() {
        let (pairs, s) = temporal_coherence(&[
            dates(Some(at(2024, 5, 22, 23)), Some(at(2024, 5, 22, 1))),
            dates(Some(at(2024, 5, 1, 0)), Some(at(2024, 5, 3, 0))),
            dates(None, Some(at(2024, 5, 3, 0))),
        ]);
        assert_eq!(pairs.iter().map(|p| p.delta_days).collect::<Vec<_>>(), vec![-2, 0]);
        assert_eq!(s.negative, 1);
        assert_eq!(s.excluded, 1);
        assert_eq!(s.min, Some(-2));
        assert_eq!(s.median, Some(-1.0));
        assert_eq!(s.mode, Some(-2));
    }

    #[test]
    fn calendar_days_not_elapsed_hours() {
        assert_eq!(day_delta(at(2024, 5, 23, 0), at(2024, 5, 22, 23)), 1);
    }
}
