use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{extract_fulltext, parse_tei, ExtractError, ExtractedRef, FullText, ReferenceService};
use crate::doi::{decode_from_path, encode_for_path};
use crate::fsutil::write_atomic;

/// On-disk corpus: `pdf/<doi>.pdf`, `tei/<doi>.tei.xml`, `txt/<doi>.txt`,
/// with DOIs percent-encoded. Small JSON sidecars keep the service version
/// and the page metadata of extracted text.
#[derive(Debug, Clone)]
pub struct Corpus {
    root: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
struct TeiMeta {
    service_version: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TextMeta {
    page_count: usize,
    extraction_warnings: Vec<String>,
}

#[derive(Debug, Default)]
pub struct LoadOutcome {
    pub refs: Option<Vec<ExtractedRef>>,
    pub fulltext: Option<FullText>,
    pub no_pdf: bool,
    pub tei_cached: bool,
    pub text_cached: bool,
    pub service_calls: u32,
    pub text_extractions: u32,
    pub warnings: Vec<String>,
}

/// Mergeable counters over many [`LoadOutcome`]s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractStats {
    pub documents: u64,
    pub no_pdf: u64,
    pub tei_cache_hits: u64,
    pub text_cache_hits: u64,
    pub service_calls: u64,
    pub text_extractions: u64,
    pub warnings: u64,
}

impl ExtractStats {
    pub fn record(&mut self, outcome: &LoadOutcome) {
        self.documents += 1;
        self.no_pdf += outcome.no_pdf as u64;
        self.tei_cache_hits += outcome.tei_cached as u64;
        self.text_cache_hits += outcome.text_cached as u64;
        self.service_calls += outcome.service_calls as u64;
        self.text_extractions += outcome.text_extractions as u64;
        self.warnings += outcome.warnings.len() as u64;
    }

    pub fn merge(&mut self, other: &ExtractStats) {
        self.documents += other.documents;
        self.no_pdf += other.no_pdf;
        self.tei_cache_hits += other.tei_cache_hits;
        self.text_cache_hits += other.text_cache_hits;
        self.service_calls += other.service_calls;
        self.text_extractions += other.text_extractions;
        self.warnings += other.warnings;
    }
}

impl Corpus {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, ExtractError> {
        let root = root.into();
        if !root.is_dir() {
            return Err(ExtractError::Io(io::Error::new(
                io::ErrorKind::NotFound,
                format!("corpus directory {} does not exist", root.display()),
            )));
        }
        Ok(Corpus { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// DOIs with a PDF under `pdf/`, sorted.
    pub fn pdf_dois(&self) -> io::Result<Vec<String>> {
        let entries = match fs::read_dir(self.root.join("pdf")) {
            Ok(e) => e,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let mut dois: Vec<String> = entries
            .filter_map(Result::ok)
            .filter_map(|e| {
                let name = e.file_name().to_string_lossy().into_owned();
                name.strip_suffix(".pdf").and_then(decode_from_path)
            })
            .collect();
        dois.sort();
        dois.dedup();
        Ok(dois)
    }

    pub fn pdf_path(&self, doi: &str) -> PathBuf {
        self.root.join("pdf").join(format!("{}.pdf", encode_for_path(doi)))
    }

    pub fn tei_path(&self, doi: &str) -> PathBuf {
        self.root.join("tei").join(format!("{}.tei.xml", encode_for_path(doi)))
    }

    pub fn txt_path(&self, doi: &str) -> PathBuf {
        self.root.join("txt").join(format!("{}.txt", encode_for_path(doi)))
    }

    fn tei_meta_path(&self, doi: &str) -> PathBuf {
        self.root.join("tei").join(format!("{}.meta.json", encode_for_path(doi)))
    }

    fn txt_meta_path(&self, doi: &str) -> PathBuf {
        self.root.join("txt").join(format!("{}.meta.json", encode_for_path(doi)))
    }

    pub fn load_cached_refs(&self, doi: &str) -> Result<Option<Vec<ExtractedRef>>, ExtractError> {
        match fs::read_to_string(self.tei_path(doi)) {
            Ok(xml) => parse_tei(&xml).map(Some),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn load_cached_text(&self, doi: &str) -> Result<Option<FullText>, ExtractError> {
        let text = match fs::read_to_string(self.txt_path(doi)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let meta = fs::read(self.txt_meta_path(doi))
            .ok()
            .and_then(|b| serde_json::from_slice::<TextMeta>(&b).ok())
            .unwrap_or(TextMeta {
                page_count: 1,
                extraction_warnings: Vec::new(),
            });
        Ok(Some(FullText {
            text,
            page_count: meta.page_count,
            extraction_warnings: meta.extraction_warnings,
        }))
    }

    pub fn store_tei(&self, doi: &str, xml: &str, service_version: Option<String>) -> io::Result<()> {
        write_atomic(&self.tei_path(doi), xml.as_bytes())?;
        let meta = serde_json::to_vec(&TeiMeta { service_version }).expect("meta serializes");
        write_atomic(&self.tei_meta_path(doi), &meta)
    }

    pub fn store_text(&self, doi: &str, text: &FullText) -> io::Result<()> {
        write_atomic(&self.txt_path(doi), text.text.as_bytes())?;
        let meta = TextMeta {
            page_count: text.page_count,
            extraction_warnings: text.extraction_warnings.clone(),
        };
        write_atomic(&self.txt_meta_path(doi), &serde_json::to_vec(&meta).expect("meta serializes"))
    }

    /// Cached artifacts first; extractors run only for what is missing, and
    /// their results are written back. Failures become warnings.
    pub fn load_or_extract(&self, doi: &str, service: Option<&dyn ReferenceService>) -> LoadOutcome {
        let mut out = LoadOutcome::default();

        match self.load_cached_refs(doi) {
            Ok(Some(refs)) => {
                out.refs = Some(refs);
                out.tei_cached = true;
            }
            Ok(None) => {}
            Err(e) => out.warnings.push(format!("cached TEI unusable: {e}")),
        }
        match self.load_cached_text(doi) {
            Ok(Some(text)) => {
                out.fulltext = Some(text);
                out.text_cached = true;
            }
            Ok(None) => {}
            Err(e) => out.warnings.push(format!("cached text unusable: {e}")),
        }
        if out.refs.is_some() && out.fulltext.is_some() {
            return out;
        }

        let pdf = match fs::read(self.pdf_path(doi)) {
            Ok(bytes) if !bytes.is_empty() => bytes,
            Ok(_) | Err(_) => {
                out.no_pdf = true;
                return out;
            }
        };

        if out.refs.is_none() {
            match service {
                Some(service) => {
                    out.service_calls += 1;
                    match service.process_references(&pdf).and_then(|xml| parse_tei(&xml).map(|r| (xml, r))) {
                        Ok((xml, refs)) => {
                            if let Err(e) = self.store_tei(doi, &xml, service.version()) {
                                log::warn!("{doi}: cannot cache TEI: {e}");
                                out.warnings.push(format!("cache write failed: {e}"));
                            }
                            out.refs = Some(refs);
                        }
                        Err(e) => out.warnings.push(format!("reference extraction failed: {e}")),
                    }
                }
                None => out.warnings.push("no extraction service configured".into()),
            }
        }

        if out.fulltext.is_none() {
            out.text_extractions += 1;
            match extract_fulltext(&pdf) {
                Ok(text) => {
                    if let Err(e) = self.store_text(doi, &text) {
                        log::warn!("{doi}: cannot cache text: {e}");
                        out.warnings.push(format!("cache write failed: {e}"));
                    }
                    out.fulltext = Some(text);
                }
                Err(e) => out.warnings.push(format!("text extraction failed: {e}")),
            }
        }
        out
    }
}
