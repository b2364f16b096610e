//! Registered metadata: single-record API fetches, bulk snapshot streaming
//! and the ordered reference list of each work.

mod cache;
mod client;
mod record;
mod snapshot;

use std::path::PathBuf;

pub use cache::RecordCache;
#[cfg(feature = "http")]
pub use client::ReqwestTransport;
pub use client::{CrossrefClient, EndpointConfig, HttpResponse, Transport};
pub use record::{parse_record, record_from_value, to_item, CrossrefRecord, ReferenceEntry};
pub use snapshot::{
    decode_batch, stream_snapshot, DecodedBatch, RawBatch, SnapshotSource, SnapshotStats, SnapshotStream,
};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },
    #[error("work message is not a JSON object")]
    NotAnObject,
    #[error("record has no DOI field")]
    MissingDoi,
    #[error("invalid DOI {0:?}")]
    InvalidDoi(String),
    #[error("{doi} is not registered")]
    NotRegistered { doi: String },
    #[error("{doi}: transport failure: {message}")]
    Transport { doi: String, message: String },
    #[error("cannot read snapshot source {path:?}: {message}")]
    Source { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
