//! End-to-end runs behind the CLI subcommands. Findings never turn into
//! errors: an `Err` here always means bad configuration or unusable I/O.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::analysis::{beneficiaries, temporal_coherence, GhostDates, TemporalSummary};
use super::config::{ConfigError, ConfigMap};
use super::histogram::{histogram, BinSpec, HistError};
use super::tally::{tally_agreement, tally_corpus, AgreementSummary, CorpusTally};
use crate::detectors::{
    csv_field, infer_benefit_prefix, m0_estimate, m1_classify, m2_detect, trailing_unmatched_prefixes, BenefitPrefix,
    DetectError, DetectionVerdict, M2Params, Method, Status, CSV_HEADER,
};
use crate::dupmetrics::{self, DupAggregates, DupConfig, SnapshotSummary};
use crate::exec::{self, Execution};
use crate::extract::{Corpus, ExtractError, ExtractStats, LoadOutcome, ReferenceService};
use crate::fsutil::write_atomic;
use crate::ingest::{CrossrefClient, CrossrefRecord, IngestError, RecordCache, SnapshotSource, SnapshotStats, Transport};
use crate::matchcore::DEFAULT_THETA_EQ;

pub const VERDICTS_JSONL: &str = "verdicts.jsonl";
pub const VERDICTS_CSV: &str = "verdicts.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const PARAMETERS_JSON: &str = "parameters.json";
pub const BENEFICIARIES_CSV: &str = "beneficiaries.csv";
pub const TEMPORAL_CSV: &str = "temporal.csv";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Histogram(#[from] HistError),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> PipelineError {
    let context = context.into();
    move |source| PipelineError::Io { context, source }
}

/// Which beneficiary prefix M1 works against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixChoice {
    Given(BenefitPrefix),
    /// Majority prefix among trailing unmatched registered entries (heuristic).
    Auto,
    Unset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    /// Bin width of the day-delta histogram.
    pub days_width: f64,
    /// Bin width of the per-document and per-beneficiary count histograms.
    pub count_width: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            days_width: 7.0,
            count_width: 1.0,
        }
    }
}

impl ReportConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self, ConfigError> {
        let d = ReportConfig::default();
        Ok(ReportConfig {
            days_width: map.parsed("hist_days_width")?.unwrap_or(d.days_width),
            count_width: map.parsed("hist_count_width")?.unwrap_or(d.count_width),
        })
    }
}

#[derive(Clone)]
pub struct DetectConfig {
    pub corpus: PathBuf,
    /// Record cache directory; defaults to `<corpus>/cache/records`.
    pub records: Option<PathBuf>,
    pub methods: Vec<Method>,
    pub prefix: PrefixChoice,
    pub theta: f64,
    pub theta_eq: f64,
    pub min_needle: usize,
    pub out: PathBuf,
    pub exec: Execution,
    /// Reference extractor used on TEI cache misses.
    pub service: Option<Arc<dyn ReferenceService>>,
    pub report: ReportConfig,
}

impl std::fmt::Debug for DetectConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DetectConfig")
            .field("corpus", &self.corpus)
            .field("records", &self.records)
            .field("methods", &self.methods)
            .field("prefix", &self.prefix)
            .field("theta", &self.theta)
            .field("theta_eq", &self.theta_eq)
            .field("min_needle", &self.min_needle)
            .field("out", &self.out)
            .field("service", &self.service.is_some())
            .finish()
    }
}

/// `m0`, `m1`, `m2`, `all`, or a comma-separated combination.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, ConfigError> {
    let mut set = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("all") {
            set.extend(Method::ALL);
        } else {
            set.insert(part.parse::<Method>().map_err(|message| ConfigError::Value {
                key: "method".into(),
                message,
            })?);
        }
    }
    if set.is_empty() {
        return Err(ConfigError::Value {
            key: "method".into(),
            message: "no detector selected".into(),
        });
    }
    Ok(set.into_iter().collect())
}

fn threshold(map: &ConfigMap, key: &str, default: f64) -> Result<f64, ConfigError> {
    let v = map.parsed::<f64>(key)?.unwrap_or(default);
    if !(v > 0.0 && v <= 100.0) {
        return Err(ConfigError::Value {
            key: key.into(),
            message: format!("{v} outside (0, 100]"),
        });
    }
    Ok(v)
}

impl DetectConfig {
    /// Keys: corpus, records, method, prefix, theta, theta_eq, min_needle,
    /// out, jobs (0 or 1 = sequential when `sequential=true`), hist widths.
    pub fn from_map(map: &ConfigMap) -> Result<Self, ConfigError> {
        let corpus = map.get("corpus").ok_or_else(|| ConfigError::Value {
            key: "corpus".into(),
            message: "missing".into(),
        })?;
        let methods = parse_methods(map.get("method").unwrap_or("all"))?;
        let prefix = match map.get("prefix") {
            None | Some("") => PrefixChoice::Unset,
            Some(p) if p.eq_ignore_ascii_case("auto") => PrefixChoice::Auto,
            Some(p) => PrefixChoice::Given(BenefitPrefix::new(p).map_err(|e| ConfigError::Value {
                key: "prefix".into(),
                message: e.to_string(),
            })?),
        };
        if methods.contains(&Method::M1) && prefix == PrefixChoice::Unset {
            return Err(ConfigError::Value {
                key: "prefix".into(),
                message: "m1 needs the beneficiary DOI prefix (or prefix=auto)".into(),
            });
        }
        let sequential = map.parsed::<bool>("sequential")?.unwrap_or(false);
        Ok(DetectConfig {
            corpus: corpus.into(),
            records: map.get("records").map(PathBuf::from),
            methods,
            prefix,
            theta: threshold(map, "theta", crate::detectors::DEFAULT_THETA)?,
            theta_eq: threshold(map, "theta_eq", DEFAULT_THETA_EQ)?,
            min_needle: map.parsed("min_needle")?.unwrap_or(crate::detectors::DEFAULT_MIN_NEEDLE),
            out: map.get("out").unwrap_or("out").into(),
            exec: if sequential { Execution::Sequential } else { Execution::Parallel },
            service: None,
            report: ReportConfig::from_map(map)?,
        })
    }
}

struct DocInput {
    doi: String,
    record: Result<Option<CrossrefRecord>, String>,
    outcome: Option<LoadOutcome>,
}

fn load_doc(corpus: &Corpus, cache: &RecordCache, doi: &str, service: Option<&dyn ReferenceService>) -> DocInput {
    let record = cache.load(doi).map_err(|e| e.to_string());
    let outcome = match &record {
        Ok(Some(r)) if !r.references.is_empty() => Some(corpus.load_or_extract(doi, service)),
        _ => None,
    };
    DocInput {
        doi: doi.to_string(),
        record,
        outcome,
    }
}

fn detect_doc(doc: &DocInput, cfg: &DetectConfig, prefix: Option<&BenefitPrefix>) -> Vec<DetectionVerdict> {
    let skip_all = |status: Status, n_c: usize, warning: Option<String>| -> Vec<DetectionVerdict> {
        cfg.methods
            .iter()
            .map(|&m| {
                let mut v = DetectionVerdict::skipped(&doc.doi, m, status, n_c, 0);
                v.warnings.extend(warning.clone());
                v
            })
            .collect()
    };
    let record = match &doc.record {
        Ok(Some(r)) => r,
        Ok(None) => return skip_all(Status::NoRecord, 0, Some("no registered record".into())),
        Err(e) => return skip_all(Status::NoRecord, 0, Some(e.clone())),
    };
    let r_c = &record.references;
    if r_c.is_empty() {
        return skip_all(Status::NoReferences, 0, None);
    }
    let outcome = doc.outcome.as_ref().expect("extraction ran for records with references");
    if outcome.no_pdf {
        return skip_all(Status::NoPdf, r_c.len(), None);
    }
    let r_g = outcome.refs.as_deref().unwrap_or(&[]);
    let n_g = r_g.len();

    let mut out = Vec::new();
    for &m in &cfg.methods {
        let mut v = match m {
            Method::M0 if !r_g.is_empty() => DetectionVerdict::from_m0(&doc.doi, &m0_estimate(r_c, r_g)),
            Method::M1 if !r_g.is_empty() => {
                let prefix = prefix.expect("prefix resolved before detection");
                match m1_classify(r_c, r_g, prefix, cfg.theta_eq) {
                    Ok(m1) => DetectionVerdict::from_m1(&doc.doi, r_c.len(), n_g, &m1),
                    Err(e) => {
                        let mut v = DetectionVerdict::skipped(&doc.doi, m, Status::NoInput, r_c.len(), n_g);
                        v.warnings.push(e.to_string());
                        v
                    }
                }
            }
            Method::M2 => match outcome.fulltext.as_ref().filter(|t| !t.text.trim().is_empty()) {
                Some(text) => {
                    let params = M2Params {
                        theta: cfg.theta,
                        min_needle: cfg.min_needle,
                    };
                    let m2 = m2_detect(r_c, text, &params, cfg.exec);
                    DetectionVerdict::from_m2(&doc.doi, r_c.len(), n_g, &m2)
                }
                None => DetectionVerdict::skipped(&doc.doi, m, Status::NoInput, r_c.len(), n_g),
            },
            _ => DetectionVerdict::skipped(&doc.doi, m, Status::NoInput, r_c.len(), n_g),
        };
        v.warnings.extend(outcome.warnings.iter().cloned());
        out.push(v);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub methods: BTreeMap<String, CorpusTally>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agreement: Option<AgreementSummary>,
    /// Distinct beneficiary DOIs per method.
    pub beneficiaries: BTreeMap<String, u64>,
    /// Beneficiaries whose cached record is a volume, issue, or other container.
    #[serde(default)]
    pub container_beneficiaries: BTreeMap<String, u64>,
    pub temporal: BTreeMap<String, TemporalSummary>,
}

#[derive(Debug)]
pub struct DetectOutcome {
    pub verdicts: Vec<DetectionVerdict>,
    pub summary: RunSummary,
    pub prefix: Option<BenefitPrefix>,
    pub extraction: ExtractStats,
}

pub fn run_detect(cfg: &DetectConfig) -> Result<DetectOutcome, PipelineError> {
    let corpus = Corpus::open(&cfg.corpus)?;
    let cache = match &cfg.records {
        Some(dir) => RecordCache::new(dir),
        None => RecordCache::under(corpus.root()),
    };
    let mut dois: BTreeSet<String> = cache.dois()?.into_iter().collect();
    dois.extend(corpus.pdf_dois().map_err(io_err("listing corpus PDFs"))?);
    let dois: Vec<String> = dois.into_iter().collect();
    log::info!("{} documents", dois.len());

    let service = cfg.service.as_deref();
    let docs = exec::map(cfg.exec, &dois, |doi| load_doc(&corpus, &cache, doi, service));
    let mut extraction = ExtractStats::default();
    for d in &docs {
        if let Some(o) = &d.outcome {
            extraction.record(o);
        }
    }

    let prefix = match &cfg.prefix {
        PrefixChoice::Given(p) => Some(p.clone()),
        PrefixChoice::Unset => None,
        PrefixChoice::Auto => {
            let mut counts = BTreeMap::new();
            for d in &docs {
                if let (Ok(Some(r)), Some(o)) = (&d.record, &d.outcome) {
                    if let Some(r_g) = o.refs.as_deref().filter(|g| !g.is_empty()) {
                        for (p, n) in trailing_unmatched_prefixes(&r.references, r_g, cfg.theta_eq) {
                            *counts.entry(p).or_insert(0) += n;
                        }
                    }
                }
            }
            let inferred = infer_benefit_prefix(&counts);
            match &inferred {
                Some(p) => log::info!("inferred beneficiary prefix {p}"),
                None if cfg.methods.contains(&Method::M1) => {
                    return Err(ConfigError::Value {
                        key: "prefix".into(),
                        message: "could not infer a beneficiary prefix from the corpus".into(),
                    }
                    .into())
                }
                None => {}
            }
            inferred
        }
    };

    let mut verdicts: Vec<DetectionVerdict> = exec::map(cfg.exec, &docs, |d| detect_doc(d, cfg, prefix.as_ref()))
        .into_iter()
        .flatten()
        .collect();
    verdicts.sort_by(|a, b| (&a.doi, a.method).cmp(&(&b.doi, b.method)));

    std::fs::create_dir_all(&cfg.out).map_err(io_err(format!("creating {}", cfg.out.display())))?;
    write_verdicts(&verdicts, &cfg.out)?;
    let params = serde_json::json!({
        "methods": cfg.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
        "prefix": prefix.as_ref().map(|p| p.as_str().to_string()),
        "theta": cfg.theta,
        "theta_eq": cfg.theta_eq,
        "min_needle": cfg.min_needle,
        "distance": "indel",
    });
    write_atomic(&cfg.out.join(PARAMETERS_JSON), pretty(&params).as_bytes()).map_err(io_err(PARAMETERS_JSON))?;
    let summary = write_reports(&verdicts, Some(&cache), &cfg.out, &cfg.report)?;
    Ok(DetectOutcome {
        verdicts,
        summary,
        prefix,
        extraction,
    })
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_verdicts(verdicts: &[DetectionVerdict], out: &Path) -> Result<(), PipelineError> {
    let mut jsonl = String::new();
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for v in verdicts {
        jsonl.push_str(&v.to_json_line());
        jsonl.push('\n');
        csv.push_str(&v.to_csv_row());
        csv.push('\n');
    }
    write_atomic(&out.join(VERDICTS_JSONL), jsonl.as_bytes()).map_err(io_err(VERDICTS_JSONL))?;
    write_atomic(&out.join(VERDICTS_CSV), csv.as_bytes()).map_err(io_err(VERDICTS_CSV))?;
    Ok(())
}

/// Verdicts from a JSON-lines file; unparsable lines are logged and skipped.
pub fn read_verdicts(path: &Path) -> Result<Vec<DetectionVerdict>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(io_err(format!("reading {}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match DetectionVerdict::from_json_line(line) {
            Ok(v) => out.push(v),
            Err(e) => log::warn!("{}:{}: skipping verdict: {e}", path.display(), i + 1),
        }
    }
    out.sort_by(|a, b| (&a.doi, a.method).cmp(&(&b.doi, b.method)));
    Ok(out)
}

fn iso(t: &Option<DateTime<Utc>>) -> String {
    t.map(|t| t.to_rfc3339_opts(SecondsFormat::Secs, true)).unwrap_or_default()
}

/// Creation date and work type looked up in the record cache, memoized.
struct Dates<'a> {
    cache: Option<&'a RecordCache>,
    seen: HashMap<String, (Option<DateTime<Utc>>, Option<String>)>,
}

impl Dates<'_> {
    fn lookup(&mut self, doi: &str) -> (Option<DateTime<Utc>>, Option<String>) {
        let Some(cache) = self.cache else { return (None, None) };
        self.seen
            .entry(doi.to_string())
            .or_insert_with(|| match cache.load(doi).ok().flatten() {
                Some(r) => (r.created, Some(r.work_type).filter(|t| !t.is_empty())),
                None => (None, None),
            })
            .clone()
    }

    fn get(&mut self, doi: &str) -> Option<DateTime<Utc>> {
        self.lookup(doi).0
    }
}

/// Work types naming a container rather than an individual article. Only
/// recognised when the cited record is in the cache.
pub const CONTAINER_TYPES: &[&str] = &[
    "journal", "journal-volume", "journal-issue", "book-series", "book-set", "proceedings-series", "report-series",
];

/// summary.json, beneficiaries.csv, temporal.csv and the histograms.
pub fn write_reports(
    verdicts: &[DetectionVerdict],
    records: Option<&RecordCache>,
    out: &Path,
    cfg: &ReportConfig,
) -> Result<RunSummary, PipelineError> {
    std::fs::create_dir_all(out).map_err(io_err(format!("creating {}", out.display())))?;
    let mut dates = Dates {
        cache: records,
        seen: HashMap::new(),
    };
    let mut summary = RunSummary::default();
    let methods: BTreeSet<Method> = verdicts.iter().map(|v| v.method).collect();
    let mut benef_csv = String::from("method,cited_doi,undue_count,cited_created,cited_type\n");
    let mut temporal_csv = String::from("method,citing_doi,cited_doi,citing_created,cited_created,delta_days\n");

    for &m in &methods {
        let mv: Vec<&DetectionVerdict> = verdicts.iter().filter(|v| v.method == m).collect();
        let tally = tally_corpus(mv.iter().copied());
        let per_doc: Vec<f64> = mv.iter().map(|v| v.n_ghost()).filter(|&n| n > 0).map(|n| n as f64).collect();
        let h = histogram(&per_doc, &BinSpec::Width(cfg.count_width))?;
        write_atomic(&out.join(format!("hist_{m}_per_doc.csv")), h.to_csv().as_bytes()).map_err(io_err("histogram"))?;
        summary.methods.insert(m.to_string(), tally);
        if m == Method::M0 {
            continue;
        }

        let mut benef = beneficiaries(mv.iter().copied());
        for b in &mut benef {
            let (created, work_type) = dates.lookup(&b.cited_doi);
            b.cited_created = created;
            let work_type = work_type.unwrap_or_default();
            if CONTAINER_TYPES.contains(&work_type.as_str()) {
                *summary.container_beneficiaries.entry(m.to_string()).or_default() += 1;
            }
            let _ = writeln!(
                benef_csv,
                "{m},{},{},{},{}",
                csv_field(&b.cited_doi),
                b.undue_count,
                iso(&b.cited_created),
                csv_field(&work_type)
            );
        }
        let counts: Vec<f64> = benef.iter().map(|b| b.undue_count as f64).collect();
        let h = histogram(&counts, &BinSpec::Width(cfg.count_width))?;
        write_atomic(&out.join(format!("hist_{m}_beneficiary.csv")), h.to_csv().as_bytes()).map_err(io_err("histogram"))?;
        summary.beneficiaries.insert(m.to_string(), benef.len() as u64);

        let mut ghosts = Vec::new();
        for v in &mv {
            let citing = dates.get(&v.doi);
            for g in &v.ghost {
                ghosts.push(GhostDates {
                    citing_doi: v.doi.clone(),
                    cited_doi: g.doi.clone(),
                    citing_created: citing,
                    cited_created: g.doi.as_deref().and_then(|d| dates.get(d)),
                });
            }
        }
        let (pairs, tsum) = temporal_coherence(&ghosts);
        for p in &pairs {
            let _ = writeln!(
                temporal_csv,
                "{m},{},{},{},{},{}",
                csv_field(&p.citing_doi),
                csv_field(&p.cited_doi),
                iso(&Some(p.citing_created)),
                iso(&Some(p.cited_created)),
                p.delta_days
            );
        }
        let deltas: Vec<f64> = pairs.iter().map(|p| p.delta_days as f64).collect();
        let h = histogram(&deltas, &BinSpec::Width(cfg.days_width))?;
        write_atomic(&out.join(format!("hist_{m}_delta_days.csv")), h.to_csv().as_bytes()).map_err(io_err("histogram"))?;
        summary.temporal.insert(m.to_string(), tsum);
    }
    if methods.contains(&Method::M1) && methods.contains(&Method::M2) {
        summary.agreement = Some(tally_agreement(verdicts));
    }

    write_atomic(&out.join(BENEFICIARIES_CSV), benef_csv.as_bytes()).map_err(io_err(BENEFICIARIES_CSV))?;
    write_atomic(&out.join(TEMPORAL_CSV), temporal_csv.as_bytes()).map_err(io_err(TEMPORAL_CSV))?;
    write_atomic(&out.join(SUMMARY_JSON), pretty(&summary).as_bytes()).map_err(io_err(SUMMARY_JSON))?;
    Ok(summary)
}

/// Rebuild the reports from a directory holding `verdicts.jsonl`.
pub fn run_report(
    verdicts_dir: &Path,
    records: Option<&Path>,
    out: &Path,
    cfg: &ReportConfig,
) -> Result<RunSummary, PipelineError> {
    let verdicts = read_verdicts(&verdicts_dir.join(VERDICTS_JSONL))?;
    let cache = records.map(RecordCache::new);
    write_reports(&verdicts, cache.as_ref(), out, cfg)
}

/// Run the extractors over every PDF in the corpus, filling the cache.
pub fn run_extract(
    corpus_dir: &Path,
    service: Option<&dyn ReferenceService>,
    exec_mode: Execution,
) -> Result<ExtractStats, PipelineError> {
    let corpus = Corpus::open(corpus_dir)?;
    let dois = corpus.pdf_dois().map_err(io_err("listing corpus PDFs"))?;
    let outcomes = exec::map(exec_mode, &dois, |doi| corpus.load_or_extract(doi, service));
    let mut stats = ExtractStats::default();
    for (doi, o) in dois.iter().zip(&outcomes) {
        for w in &o.warnings {
            log::warn!("{doi}: {w}");
        }
        stats.record(o);
    }
    Ok(stats)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchStats {
    pub requested: u64,
    pub invalid: u64,
    pub already_cached: u64,
    pub fetched: u64,
    pub not_registered: u64,
    pub failed: u64,
}

/// Fetch every DOI of a list (one per line, `#` comments allowed) into the
/// record cache. Politeness delays make this sequential on purpose.
pub fn run_fetch<T: Transport>(
    doi_list: &str,
    client: &CrossrefClient<T>,
    cache: &RecordCache,
    refresh: bool,
) -> FetchStats {
    let mut stats = FetchStats::default();
    for line in doi_list.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        stats.requested += 1;
        let Some(doi) = crate::doi::normalize_doi(line) else {
            log::warn!("not a DOI: {line:?}");
            stats.invalid += 1;
            continue;
        };
        if !refresh && cache.contains(&doi) {
            stats.already_cached += 1;
            continue;
        }
        match client.fetch_raw(&doi).and_then(|body| {
            crate::ingest::parse_record(&body)?;
            cache.store_raw(&doi, &body)
        }) {
            Ok(()) => stats.fetched += 1,
            Err(IngestError::NotRegistered { .. }) => {
                log::warn!("{doi}: not registered");
                stats.not_registered += 1;
            }
            Err(e) => {
                log::warn!("{doi}: {e}");
                stats.failed += 1;
            }
        }
    }
    stats
}

#[derive(Debug, Clone, PartialEq)]
pub struct DupsConfig {
    pub min_dup_refs: u64,
    pub top: usize,
    /// Earlier aggregate directory to fold into this run.
    pub resume: Option<PathBuf>,
    pub dup: DupConfig,
}

impl Default for DupsConfig {
    fn default() -> Self {
        DupsConfig {
            min_dup_refs: dupmetrics::DEFAULT_MIN_DUP_REFS,
            top: 10,
            resume: None,
            dup: DupConfig::default(),
        }
    }
}

impl DupsConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self, ConfigError> {
        let d = DupsConfig::default();
        let mut dup = d.dup.clone();
        if let Some(types) = map.get("exclude_types") {
            dup.excluded_types = types.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect();
        }
        if let Some(track) = map.parsed::<bool>("track_authors")? {
            dup.track_authors = track;
        }
        let top = map.parsed("top")?.unwrap_or(d.top);
        if top == 0 {
            return Err(ConfigError::Value {
                key: "top".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(DupsConfig {
            min_dup_refs: map.parsed("min_dup_refs")?.unwrap_or(d.min_dup_refs),
            top,
            resume: map.get("resume").map(PathBuf::from),
            dup,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DupsSummary {
    pub snapshot: SnapshotSummary,
    pub files: u64,
    pub skipped_files: u64,
    pub skipped_items: u64,
    pub avg_duplicates: f64,
    pub duplicated_share: f64,
    pub surplus_share: f64,
    pub derived_surplus: i64,
    pub journals: u64,
    pub beneficiaries: u64,
    pub documents_with_duplicates: u64,
}

pub const AGGREGATES_DIR: &str = "aggregates";

pub fn run_dups(snapshot: &Path, cfg: &DupsConfig, out: &Path, exec_mode: Execution) -> Result<(DupAggregates, DupsSummary), PipelineError> {
    let source = SnapshotSource::open(snapshot)?;
    let (mut agg, stats): (DupAggregates, SnapshotStats) = dupmetrics::aggregate_snapshot(&source, &cfg.dup, exec_mode)?;
    if let Some(prev) = &cfg.resume {
        let earlier = dupmetrics::load(prev).map_err(io_err(format!("loading aggregates from {}", prev.display())))?;
        agg = agg.merge(earlier);
    }
    dupmetrics::persist(&agg, &out.join(AGGREGATES_DIR)).map_err(io_err("writing aggregates"))?;
    dupmetrics::write_leaderboards(&agg, out, cfg.top, cfg.min_dup_refs).map_err(io_err("writing leaderboards"))?;
    let s = agg.summary;
    let summary = DupsSummary {
        snapshot: s,
        files: stats.files,
        skipped_files: stats.skipped_files,
        skipped_items: stats.skipped_items,
        avg_duplicates: s.avg_duplicates(),
        duplicated_share: s.duplicated_share(),
        surplus_share: s.surplus_share(),
        derived_surplus: s.derived_surplus(),
        journals: agg.journals.len() as u64,
        beneficiaries: agg.benef.len() as u64,
        documents_with_duplicates: agg.docs.len() as u64,
    };
    write_atomic(&out.join(SUMMARY_JSON), pretty(&summary).as_bytes()).map_err(io_err(SUMMARY_JSON))?;
    Ok((agg, summary))
}
