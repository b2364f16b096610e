use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::record::{parse_record, to_item, CrossrefRecord};
use super::IngestError;
use crate::doi::{decode_from_path, encode_for_path};
use crate::fsutil::write_atomic;

/// One JSON file per DOI: `<dir>/<percent-encoded-doi>.json`.
#[derive(Debug, Clone)]
pub struct RecordCache {
    dir: PathBuf,
}

impl RecordCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RecordCache { dir: dir.into() }
    }

    /// The conventional location under a corpus root: `cache/records`.
    pub fn under(root: &Path) -> Self {
        Self::new(root.join("cache").join("records"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, doi: &str) -> PathBuf {
        self.dir.join(format!("{}.json", encode_for_path(doi)))
    }

    pub fn contains(&self, doi: &str) -> bool {
        self.path(doi).is_file()
    }

    pub fn load(&self, doi: &str) -> Result<Option<CrossrefRecord>, IngestError> {
        match fs::read(self.path(doi)) {
            Ok(bytes) => parse_record(&bytes).map(Some),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(IngestError::Io(e)),
        }
    }

    /// Store a response body exactly as received.
    pub fn store_raw(&self, doi: &str, body: &[u8]) -> Result<(), IngestError> {
        write_atomic(&self.path(doi), body).map_err(IngestError::Io)
    }

    pub fn store(&self, record: &CrossrefRecord) -> Result<(), IngestError> {
        let body = serde_json::to_vec_pretty(&to_item(record)).expect("record serializes");
        self.store_raw(&record.doi, &body)
    }

    /// Cached DOIs, sorted.
    pub fn dois(&self) -> Result<Vec<String>, IngestError> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(IngestError::Io(e)),
        };
        let mut dois: Vec<String> = entries
            .filter_map(Result::ok)
            .filter_map(|e| {
                let name = e.file_name().to_string_lossy().into_owned();
                name.strip_suffix(".json").and_then(decode_from_path)
            })
            .collect();
        dois.sort();
        Ok(dois)
    }
}
