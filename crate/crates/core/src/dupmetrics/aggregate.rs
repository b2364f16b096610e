use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::ingest::{decode_batch, CrossrefRecord, IngestError, SnapshotSource, SnapshotStats};
use crate::matchcore::{name_key, normalize};

/// Journal key for documents without a container title.
pub const NO_JOURNAL: &str = "(none)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DupConfig {
    /// Citing work types left out of every measure.
    pub excluded_types: BTreeSet<String>,
    /// Keep per-(journal, cited DOI) counts and cited-work authors, needed
    /// only for author-journal scoring. Memory grows with distinct pairs.
    pub track_authors: bool,
}

impl Default for DupConfig {
    fn default() -> Self {
        DupConfig {
            excluded_types: ["book", "book-chapter"].into_iter().map(String::from).collect(),
            track_authors: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DupDocStats {
    pub doi: String,
    /// Surplus entries: sum over duplicated cited DOIs of (multiplicity - 1).
    pub nbrefdup_plus: u64,
    /// Cited DOIs occurring more than once.
    pub nbrefdup: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenefStats {
    pub benef_plus: u64,
    pub benef: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalStats {
    /// Display title; the smallest raw title seen under this key.
    pub title: String,
    pub jourdup_plus: u64,
    pub jourdup: u64,
    /// Distinct (document, cited DOI) references.
    pub ref_total: u64,
    /// Distinct duplicated references.
    pub dup_total: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub refs: u64,
    pub dups: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    pub records: u64,
    pub excluded_records: u64,
    /// Reference entries carrying a DOI, duplicates included.
    pub entries: u64,
    pub entries_without_doi: u64,
    /// Distinct (document, cited DOI) pairs.
    pub distinct: u64,
    /// Pairs occurring more than once.
    pub duplicated: u64,
    /// Sum of (multiplicity - 1) over duplicated pairs.
    pub surplus: u64,
}

impl SnapshotSummary {
    pub fn avg_duplicates(&self) -> f64 {
        ratio(self.surplus, self.duplicated)
    }

    pub fn duplicated_share(&self) -> f64 {
        ratio(self.duplicated, self.entries)
    }

    pub fn surplus_share(&self) -> f64 {
        ratio(self.surplus, self.entries)
    }

    /// `entries - distinct`, which equals `surplus` on any consistent count.
    pub fn derived_surplus(&self) -> i64 {
        self.entries as i64 - self.distinct as i64
    }

    fn add(&mut self, o: &SnapshotSummary) {
        self.records += o.records;
        self.excluded_records += o.excluded_records;
        self.entries += o.entries;
        self.entries_without_doi += o.entries_without_doi;
        self.distinct += o.distinct;
        self.duplicated += o.duplicated;
        self.surplus += o.surplus;
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Multiplicity of each cited DOI in the record's reference list.
pub fn cited_multiplicities(record: &CrossrefRecord) -> BTreeMap<&str, u64> {
    let mut counts = BTreeMap::new();
    for r in &record.references {
        if let Some(d) = r.doi.as_deref() {
            *counts.entry(d).or_insert(0) += 1;
        }
    }
    counts
}

pub fn doc_dup_stats(record: &CrossrefRecord) -> DupDocStats {
    let mut s = DupDocStats {
        doi: record.doi.clone(),
        nbrefdup_plus: 0,
        nbrefdup: 0,
    };
    for &n in cited_multiplicities(record).values() {
        if n > 1 {
            s.nbrefdup_plus += n - 1;
            s.nbrefdup += 1;
        }
    }
    s
}

pub fn journal_key(container_title: Option<&str>) -> String {
    container_title
        .map(normalize)
        .filter(|t| !t.is_empty())
        .unwrap_or_else(|| NO_JOURNAL.to_string())
}

/// Mergeable state of one pass over a stream of records. Maps hold only
/// non-zero rows: absent keys are implicit zeros.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DupAggregates {
    pub summary: SnapshotSummary,
    /// Citing documents with at least one duplicated reference.
    pub docs: HashMap<String, DupDocStats>,
    /// Cited DOIs receiving at least one duplicated reference.
    pub benef: HashMap<String, BenefStats>,
    pub journals: HashMap<String, JournalStats>,
    /// journal key -> cited DOI -> counts (only with `track_authors`).
    pub journal_cited: HashMap<String, HashMap<String, PairCounts>>,
    /// DOI -> author name keys, for every record seen (only with `track_authors`).
    pub authors: HashMap<String, BTreeSet<String>>,
}

impl DupAggregates {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_record(&mut self, record: &CrossrefRecord, cfg: &DupConfig) {
        self.summary.records += 1;
        if cfg.track_authors && !record.authors.is_empty() {
            let keys: BTreeSet<String> = record.authors.iter().map(|a| name_key(a)).filter(|k| !k.is_empty()).collect();
            if !keys.is_empty() {
                self.authors.entry(record.doi.clone()).or_default().extend(keys);
            }
        }
        if cfg.excluded_types.contains(&record.work_type) {
            self.summary.excluded_records += 1;
            return;
        }

        let counts = cited_multiplicities(record);
        let with_doi: u64 = counts.values().sum();
        self.summary.entries += with_doi;
        self.summary.entries_without_doi += record.references.len() as u64 - with_doi;
        self.summary.distinct += counts.len() as u64;

        let jkey = journal_key(record.container_title.as_deref());
        let journal = self.journals.entry(jkey.clone()).or_default();
        let raw_title = record.container_title.clone().unwrap_or_else(|| NO_JOURNAL.to_string());
        if journal.title.is_empty() || raw_title < journal.title {
            journal.title = raw_title;
        }
        journal.ref_total += counts.len() as u64;

        let mut doc = DupDocStats {
            doi: record.doi.clone(),
            nbrefdup_plus: 0,
            nbrefdup: 0,
        };
        for (&cited, &n) in &counts {
            if n > 1 {
                doc.nbrefdup_plus += n - 1;
                doc.nbrefdup += 1;
                let b = self.benef.entry(cited.to_string()).or_default();
                b.benef_plus += n - 1;
                b.benef += 1;
            }
        }
        self.summary.duplicated += doc.nbrefdup;
        self.summary.surplus += doc.nbrefdup_plus;
        journal.dup_total += doc.nbrefdup;
        journal.jourdup_plus += doc.nbrefdup_plus;
        if doc.nbrefdup > 0 {
            journal.jourdup += 1;
        }

        if cfg.track_authors && !counts.is_empty() {
            let pairs = self.journal_cited.entry(jkey).or_default();
            for (&cited, &n) in &counts {
                let p = pairs.entry(cited.to_string()).or_default();
                p.refs += 1;
                if n > 1 {
                    p.dups += 1;
                }
            }
        }
        if doc.nbrefdup > 0 {
            match self.docs.get_mut(&doc.doi) {
                Some(d) => {
                    d.nbrefdup_plus += doc.nbrefdup_plus;
                    d.nbrefdup += doc.nbrefdup;
                }
                None => {
                    self.docs.insert(doc.doi.clone(), doc);
                }
            }
        }
    }

    /// Field-wise sum. Associative and commutative with `new()` as unit.
    pub fn merge(mut self, other: DupAggregates) -> DupAggregates {
        // fold the smaller side into the larger
        let (mut big, small) = if self.size_hint() >= other.size_hint() {
            (std::mem::take(&mut self), other)
        } else {
            (other, self)
        };
        big.summary.add(&small.summary);
        for (k, v) in small.docs {
            let d = big.docs.entry(k).or_insert_with(|| DupDocStats {
                doi: v.doi.clone(),
                nbrefdup_plus: 0,
                nbrefdup: 0,
            });
            d.nbrefdup_plus += v.nbrefdup_plus;
            d.nbrefdup += v.nbrefdup;
        }
        for (k, v) in small.benef {
            let b = big.benef.entry(k).or_default();
            b.benef_plus += v.benef_plus;
            b.benef += v.benef;
        }
        for (k, v) in small.journals {
            let j = big.journals.entry(k).or_default();
            if j.title.is_empty() || (!v.title.is_empty() && v.title < j.title) {
                j.title = v.title;
            }
            j.jourdup_plus += v.jourdup_plus;
            j.jourdup += v.jourdup;
            j.ref_total += v.ref_total;
            j.dup_total += v.dup_total;
        }
        for (k, pairs) in small.journal_cited {
            let into = big.journal_cited.entry(k).or_default();
            for (cited, p) in pairs {
                let q = into.entry(cited).or_default();
                q.refs += p.refs;
                q.dups += p.dups;
            }
        }
        for (k, names) in small.authors {
            big.authors.entry(k).or_default().extend(names);
        }
        big
    }

    fn size_hint(&self) -> usize {
        self.docs.len() + self.benef.len() + self.journals.len() + self.journal_cited.len() + self.authors.len()
    }
}

pub fn aggregate<'a>(records: impl IntoIterator<Item = &'a CrossrefRecord>, cfg: &DupConfig) -> DupAggregates {
    let mut agg = DupAggregates::new();
    for r in records {
        agg.add_record(r, cfg);
    }
    agg
}

pub fn aggregate_benef<'a>(records: impl IntoIterator<Item = &'a CrossrefRecord>, cfg: &DupConfig) -> HashMap<String, BenefStats> {
    aggregate(records, cfg).benef
}

pub fn aggregate_journal<'a>(records: impl IntoIterator<Item = &'a CrossrefRecord>, cfg: &DupConfig) -> HashMap<String, JournalStats> {
    aggregate(records, cfg).journals
}

pub fn snapshot_summary<'a>(records: impl IntoIterator<Item = &'a CrossrefRecord>, cfg: &DupConfig) -> SnapshotSummary {
    aggregate(records, cfg).summary
}

/// One pass over a snapshot; batch files are decoded and folded on the
/// worker pool and the partial aggregates merged.
pub fn aggregate_snapshot(
    source: &SnapshotSource,
    cfg: &DupConfig,
    exec: Execution,
) -> Result<(DupAggregates, SnapshotStats), IngestError> {
    let batches = source.batches()?;
    let (agg, stats) = exec::fold_merge_iter(
        exec,
        batches,
        || (DupAggregates::new(), SnapshotStats::default()),
        |(agg, stats), raw| {
            let decoded = decode_batch(&raw);
            stats.absorb(&decoded);
            match decoded {
                Ok(batch) => {
                    for r in &batch.records {
                        agg.add_record(r, cfg);
                    }
                }
                Err(e) => log::warn!("skipping corrupt batch {e}"),
            }
        },
        |(a, mut sa), (b, sb)| {
            sa.merge(&sb);
            (a.merge(b), sa)
        },
    );
    Ok((agg, stats))
}
