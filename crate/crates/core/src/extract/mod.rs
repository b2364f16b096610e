//! Document-side inputs: the reference list recovered from the PDF by an
//! extraction service, and the PDF's plain text.

mod corpus;
mod pdf;
mod service;
mod tei;

use serde::{Deserialize, Serialize};

pub use corpus::{Corpus, ExtractStats, LoadOutcome};
pub use pdf::{extract_fulltext, normalize_fulltext};
#[cfg(feature = "http")]
pub use service::GrobidClient;
pub use service::{ReferenceService, ServiceConfig};
pub use tei::parse_tei;

/// One entry of the extracted bibliography, flattened to a single line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedRef {
    pub raw: String,
    pub doi: Option<String>,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullText {
    pub text: String,
    pub page_count: usize,
    pub extraction_warnings: Vec<String>,
}

/// Run the service on a PDF and parse its TEI response.
pub fn extract_structured_refs(
    pdf_bytes: &[u8],
    service: &dyn ReferenceService,
) -> Result<Vec<ExtractedRef>, ExtractError> {
    if pdf_bytes.is_empty() {
        return Err(ExtractError::Service("empty PDF".into()));
    }
    parse_tei(&service.process_references(pdf_bytes)?)
}

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("extraction service error: {0}")]
    Service(String),
    #[error("malformed TEI: {0}")]
    MalformedTei(String),
    #[error("unreadable PDF: {0}")]
    UnreadablePdf(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
