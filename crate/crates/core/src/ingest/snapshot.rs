//! Bulk snapshot reading: a directory (or tar archive) of gzip-compressed
//! batch files, each `{"items": [...]}`.

use std::fs::{self, File};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;

use flate2::read::GzDecoder;
use serde::Deserialize;
use serde_json::value::RawValue;

use super::record::{parse_record, CrossrefRecord};
use super::IngestError;

#[derive(Debug, Clone)]
pub enum SnapshotSource {
    Dir(PathBuf),
    Tar(PathBuf),
}

impl SnapshotSource {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let meta = fs::metadata(path).map_err(|e| IngestError::Source {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if meta.is_dir() {
            Ok(SnapshotSource::Dir(path.to_path_buf()))
        } else {
            Ok(SnapshotSource::Tar(path.to_path_buf()))
        }
    }

    /// Compressed batch files in order. Directory entries sort naturally
    /// (`2.json.gz` before `10.json.gz`); tar entries keep archive order.
    pub fn batches(&self) -> Result<Box<dyn Iterator<Item = RawBatch> + Send>, IngestError> {
        match self {
            SnapshotSource::Dir(dir) => {
                let mut files: Vec<PathBuf> = fs::read_dir(dir)
                    .map_err(|e| IngestError::Source {
                        path: dir.clone(),
                        message: e.to_string(),
                    })?
                    .filter_map(Result::ok)
                    .map(|e| e.path())
                    .filter(|p| p.is_file() && is_batch_name(&p.to_string_lossy()))
                    .collect();
                files.sort_by_key(|p| natural_key(&p.file_name().unwrap_or_default().to_string_lossy()));
                Ok(Box::new(files.into_iter().map(|path| {
                    let name = path.to_string_lossy().into_owned();
                    let bytes = fs::read(&path).map_err(|e| e.to_string());
                    RawBatch { name, bytes }
                })))
            }
            SnapshotSource::Tar(path) => {
                let file = File::open(path).map_err(|e| IngestError::Source {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                Ok(Box::new(tar_batches(file)))
            }
        }
    }
}

/// One compressed batch file as read from the source.
#[derive(Debug)]
pub struct RawBatch {
    pub name: String,
    pub bytes: Result<Vec<u8>, String>,
}

/// Decoded contents of one batch file.
#[derive(Debug, Default)]
pub struct DecodedBatch {
    pub records: Vec<CrossrefRecord>,
    pub skipped_items: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SnapshotStats {
    pub files: u64,
    pub skipped_files: u64,
    pub records: u64,
    pub skipped_items: u64,
}

impl SnapshotStats {
    pub fn merge(&mut self, other: &SnapshotStats) {
        self.files += other.files;
        self.skipped_files += other.skipped_files;
        self.records += other.records;
        self.skipped_items += other.skipped_items;
    }

    pub fn absorb(&mut self, decoded: &Result<DecodedBatch, String>) {
        self.files += 1;
        match decoded {
            Ok(batch) => {
                self.records += batch.records.len() as u64;
                self.skipped_items += batch.skipped_items;
            }
            Err(_) => self.skipped_files += 1,
        }
    }
}

#[derive(Deserialize)]
struct BatchFile<'a> {
    #[serde(borrow)]
    items: Vec<&'a RawValue>,
}

/// Decompress and parse one batch. A file-level failure (bad gzip, bad
/// envelope) is an `Err`; a bad item only bumps `skipped_items`.
pub fn decode_batch(batch: &RawBatch) -> Result<DecodedBatch, String> {
    let compressed = batch.bytes.as_ref().map_err(Clone::clone)?;
    let mut json = Vec::new();
    if batch.name.ends_with(".gz") {
        GzDecoder::new(compressed.as_slice())
            .read_to_end(&mut json)
            .map_err(|e| format!("{}: {e}", batch.name))?;
    } else {
        json.extend_from_slice(compressed);
    }
    let file: BatchFile = serde_json::from_slice(&json).map_err(|e| format!("{}: {e}", batch.name))?;
    let mut out = DecodedBatch::default();
    for item in file.items {
        match parse_record(item.get().as_bytes()) {
            Ok(rec) => out.records.push(rec),
            Err(e) => {
                log::debug!("{}: skipping item: {e}", batch.name);
                out.skipped_items += 1;
            }
        }
    }
    Ok(out)
}

/// Every record of the snapshot, one batch in memory at a time.
pub fn stream_snapshot(source: &SnapshotSource) -> Result<SnapshotStream, IngestError> {
    Ok(SnapshotStream {
        batches: source.batches()?,
        current: Vec::new().into_iter(),
        stats: SnapshotStats::default(),
    })
}

pub struct SnapshotStream {
    batches: Box<dyn Iterator<Item = RawBatch> + Send>,
    current: std::vec::IntoIter<CrossrefRecord>,
    stats: SnapshotStats,
}

impl SnapshotStream {
    pub fn stats(&self) -> SnapshotStats {
        self.stats
    }
}

impl Iterator for SnapshotStream {
    type Item = CrossrefRecord;

    fn next(&mut self) -> Option<CrossrefRecord> {
        loop {
            if let Some(rec) = self.current.next() {
                return Some(rec);
            }
            let raw = self.batches.next()?;
            let decoded = decode_batch(&raw);
            self.stats.absorb(&decoded);
            match decoded {
                Ok(batch) => self.current = batch.records.into_iter(),
                Err(e) => log::warn!("skipping corrupt batch {e}"),
            }
        }
    }
}

fn is_batch_name(name: &str) -> bool {
    name.ends_with(".json.gz") || name.ends_with(".json")
}

fn natural_key(name: &str) -> (u64, String) {
    let digits: String = name.chars().take_while(char::is_ascii_digit).collect();
    (digits.parse().unwrap_or(u64::MAX), name.to_string())
}

fn tar_batches(file: File) -> impl Iterator<Item = RawBatch> + Send {
    let (tx, rx) = mpsc::sync_channel::<RawBatch>(2);
    thread::spawn(move || {
        let mut archive = tar::Archive::new(file);
        let entries = match archive.entries() {
            Ok(e) => e,
            Err(e) => {
                let _ = tx.send(RawBatch { name: "<archive>".into(), bytes: Err(e.to_string()) });
                return;
            }
        };
        for entry in entries {
            let batch = match entry {
                Ok(mut entry) => {
                    let name = entry.path().map(|p| p.to_string_lossy().into_owned()).unwrap_or_default();
                    if !entry.header().entry_type().is_file() || !is_batch_name(&name) {
                        continue;
                    }
                    let mut bytes = Vec::new();
                    let bytes = entry.read_to_end(&mut bytes).map(|_| bytes).map_err(|e| e.to_string());
                    RawBatch { name, bytes }
                }
                Err(e) => RawBatch { name: "<archive>".into(), bytes: Err(e.to_string()) },
            };
            let failed = batch.bytes.is_err() && batch.name == "<archive>";
            if tx.send(batch).is_err() || failed {
                return;
            }
        }
    });
    rx.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut names = vec!["10.json.gz", "2.json.gz", "1.json.gz"];
        names.sort_by_key(|n| natural_key(n));
        assert_eq!(names, vec!["1.json.gz", "2.json.gz", "10.json.gz"]);
    }

    #[test]
    fn missing_source_is_fatal() {
        assert!(SnapshotSource::open("/nonexistent/snapshot").is_err());
    }
}
