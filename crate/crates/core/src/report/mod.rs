//! Corpus-level tallies, beneficiary and timing analyses, histogram data,
//! and the end-to-end runs behind the command line.

mod analysis;
mod config;
mod histogram;
mod pipeline;
mod tally;

pub use analysis::{beneficiaries, day_delta, temporal_coherence, BeneficiaryRecord, GhostDates, TemporalPair, TemporalSummary, NO_DOI};
pub use config::{canonical_key, load_config, parse_config, ConfigError, ConfigMap};
pub use histogram::{histogram, Bin, BinSpec, HistError, Histogram};
pub use pipeline::{
    parse_methods, read_verdicts, run_detect, run_dups, run_extract, run_fetch, run_report, write_reports,
    write_verdicts, DetectConfig, DetectOutcome, DupsConfig, DupsSummary, FetchStats, PipelineError, PrefixChoice,
    ReportConfig, RunSummary, AGGREGATES_DIR, BENEFICIARIES_CSV, CONTAINER_TYPES, PARAMETERS_JSON, SUMMARY_JSON, TEMPORAL_CSV,
    VERDICTS_CSV, VERDICTS_JSONL,
};
pub use tally::{tally_agreement, tally_corpus, AgreementSummary, CorpusTally};
