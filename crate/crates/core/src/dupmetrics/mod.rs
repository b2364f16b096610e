//! Duplicate-reference analytics: per citing document, per cited document,
//! per journal, and author-journal anomaly scores. All state is a
//! mergeable value so shards can be aggregated independently.

mod aggregate;
mod persist;
mod score;

pub use aggregate::{
    aggregate, aggregate_benef, aggregate_journal, aggregate_snapshot, cited_multiplicities, doc_dup_stats,
    journal_key, snapshot_summary, BenefStats, DupAggregates, DupConfig, DupDocStats, JournalStats, PairCounts,
    SnapshotSummary, NO_JOURNAL,
};
pub use persist::{
    load, persist, write_leaderboards, AUTHORS_TSV, BENEF_TSV, DOCS_TSV, JOURNALS_TSV, JOURNAL_CITED_TSV,
    LEADERBOARD_AUTHORS, LEADERBOARD_BENEF, LEADERBOARD_DOCS, LEADERBOARD_JOURNALS, SUMMARY_TSV,
};
pub use score::{score_author_journal, top_k, AuthorJournalScore, DEFAULT_MIN_DUP_REFS};
