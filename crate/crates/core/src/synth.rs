//! Seeded synthetic corpora with known ground truth: genuine references that
//! appear in the document text and the extracted list, plus alien trailing
//! references registered under a beneficiary prefix. Used by tests and
//! benchmarks; also handy for trying the CLI without real data.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extract::{Corpus, ExtractedRef, FullText};
use crate::ingest::{CrossrefRecord, RecordCache, ReferenceEntry};

const BODY_WORDS: &[&str] = &[
    "lattice", "thermal", "diffusion", "boundary", "coefficient", "spectral", "sample", "measured", "gradient",
    "observed", "regime", "transport", "coupling", "density", "kinetic", "surface", "equilibrium", "phonon",
    "crystal", "anisotropy", "magnetic", "scattering", "interface", "relaxation", "isotope", "entropy",
    "simulation", "variance", "stability", "oscillation", "pressure", "vortex", "turbulent", "laminar",
    "viscosity", "grain", "alloy", "fracture", "strain", "tensile", "electron", "quantum", "band", "gap",
    "doping", "carrier", "mobility", "film", "substrate", "deposition", "annealing", "model", "the", "of",
    "and", "in", "with", "for", "results", "show", "that", "we", "our", "this", "is", "are", "was", "a",
];

const ALIEN_WORDS: &[&str] = &[
    "marketing", "consumer", "loyalty", "smartphone", "adoption", "banking", "fintech", "cloud", "blockchain",
    "agriculture", "yield", "farmer", "rural", "student", "teacher", "pedagogy", "curriculum", "hospital",
    "nursing", "patient", "satisfaction", "diabetes", "herbal", "extract", "tourism", "hotel", "cyber",
    "phishing", "chatbot", "retail", "ecommerce", "supply", "chain", "women", "empowerment", "microfinance",
    "survey", "questionnaire", "district", "employee", "motivation", "leadership", "startup", "ayurvedic",
];

const FAMILY_SYLLABLES: &[&str] = &[
    "ka", "ro", "mi", "tan", "ber", "lo", "sen", "va", "dor", "ni", "gu", "pel", "ash", "quist", "mor", "zh",
    "li", "wen", "ok", "afor", "ru", "iz", "hal", "berg", "son", "ov", "ska", "ta", "nu", "ez",
];

const VENUES: &[&str] = &[
    "Phys Rev B", "J Appl Phys", "Acta Mater", "Nano Lett", "J Chem Phys", "Appl Phys Lett", "Int J Heat Mass Transf",
    "J Fluid Mech", "Mater Sci Eng A", "Surf Sci",
];

const ALIEN_VENUES: &[&str] = &[
    "Int J Innov Sci Res Technol", "Int J Res Manag", "J Emerg Technol", "Int J Bus Adm Stud",
];

pub const DEFAULT_BENEFIT_PREFIX: &str = "10.38124";

/// One generated work and everything the detectors see about it.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthDoc {
    pub record: CrossrefRecord,
    /// The reference list as an extractor would return it.
    pub extracted: Vec<ExtractedRef>,
    pub fulltext: FullText,
    /// Registered positions of the alien references.
    pub injected: Vec<usize>,
}

impl SynthDoc {
    pub fn doi(&self) -> &str {
        &self.record.doi
    }

    pub fn genuine_count(&self) -> usize {
        self.record.references.len() - self.injected.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub genuine: std::ops::RangeInclusive<usize>,
    pub body_words: std::ops::RangeInclusive<usize>,
    pub benefit_prefix: String,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            genuine: 8..=30,
            body_words: 150..=400,
            benefit_prefix: DEFAULT_BENEFIT_PREFIX.into(),
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    params: SynthParams,
    serial: u64,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self::with_params(seed, SynthParams::default())
    }

    pub fn with_params(seed: u64, params: SynthParams) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            params,
            serial: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn family(&mut self) -> String {
        let n = self.rng.gen_range(2..=3);
        let mut s: String = (0..n).map(|_| *FAMILY_SYLLABLES.choose(&mut self.rng).unwrap()).collect();
        let first = s.remove(0).to_ascii_uppercase();
        s.insert(0, first);
        s
    }

    fn initial(&mut self) -> char {
        (b'A' + self.rng.gen_range(0..26)) as char
    }

    fn words(&mut self, pool: &[&str], n: usize) -> String {
        let mut out: Vec<&str> = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(pool.choose(&mut self.rng).unwrap());
        }
        out.join(" ")
    }

    fn title(&mut self, pool: &[&str]) -> String {
        let n = self.rng.gen_range(5..=10);
        let mut t = self.words(pool, n);
        if let Some(first) = t.get(0..1) {
            let up = first.to_ascii_uppercase();
            t.replace_range(0..1, &up);
        }
        t
    }

    /// A registrant prefix that is never the beneficiary one.
    fn other_prefix(&mut self) -> String {
        loop {
            let p = format!("10.{}", self.rng.gen_range(1000..9999));
            if p != self.params.benefit_prefix {
                return p;
            }
        }
    }

    fn suffix(&mut self) -> String {
        self.serial += 1;
        format!("s{}.{}", self.serial, self.rng.gen_range(100_000..999_999))
    }

    fn citation(&mut self, alien: bool) -> (String, String, BTreeMap<String, String>) {
        let (pool, venues) = if alien { (ALIEN_WORDS, ALIEN_VENUES) } else { (BODY_WORDS, VENUES) };
        let authors = self.rng.gen_range(1..=3);
        let names: Vec<String> = (0..authors).map(|_| format!("{} {}", self.family(), self.initial())).collect();
        let title = self.title(pool);
        let venue = *venues.choose(&mut self.rng).unwrap();
        let year = self.rng.gen_range(1985..=2024);
        let vol = self.rng.gen_range(1..=120);
        let p1 = self.rng.gen_range(1..=900);
        let doi = if alien {
            let suffix = self.suffix();
            format!("{}/ijisrt/{suffix}", self.params.benefit_prefix)
        } else {
            format!("{}/{}", self.other_prefix(), self.suffix())
        };
        let text = format!(
            "{}. {}. {} {}:{}-{}, {}.",
            names.join(", "),
            title,
            venue,
            vol,
            p1,
            p1 + self.rng.gen_range(3..=25),
            year
        );
        let mut structured = BTreeMap::new();
        structured.insert("author".to_string(), names[0].clone());
        structured.insert("article-title".to_string(), title);
        structured.insert("journal-title".to_string(), venue.to_string());
        structured.insert("year".to_string(), year.to_string());
        (text, doi, structured)
    }

    fn entry(&mut self, position: usize, alien: bool) -> ReferenceEntry {
        let (text, doi, structured) = self.citation(alien);
        ReferenceEntry {
            key: format!("ref{position}"),
            doi: Some(doi),
            unstructured: Some(text),
            structured,
            position,
        }
    }

    /// A document with `genuine` cited references and `aliens` sneaked ones
    /// appended after them.
    pub fn document_with(&mut self, genuine: usize, aliens: usize) -> SynthDoc {
        let mut refs: Vec<ReferenceEntry> = (0..genuine).map(|i| self.entry(i, false)).collect();
        refs.extend((genuine..genuine + aliens).map(|i| self.entry(i, true)));

        let body_len = self.rng.gen_range(self.params.body_words.clone());
        let mut text = self.title(BODY_WORDS);
        text.push_str(". ");
        let mut written = 0;
        while written < body_len {
            let n = self.rng.gen_range(8..=20).min(body_len - written).max(1);
            text.push_str(&self.words(BODY_WORDS, n));
            text.push_str(". ");
            written += n;
        }
        text.push_str("References ");
        for (i, r) in refs[..genuine].iter().enumerate() {
            text.push_str(&format!("[{}] {} ", i + 1, r.unstructured.as_deref().unwrap()));
        }
        let text = crate::matchcore::collapse_whitespace(text.chars());

        let extracted = refs[..genuine]
            .iter()
            .map(|r| ExtractedRef {
                raw: r.unstructured.clone().unwrap(),
                doi: None,
                position: r.position,
            })
            .collect();

        let doi = format!("10.5555/synth.{}", self.suffix());
        let record = CrossrefRecord {
            prefix: "10.5555".into(),
            doi,
            work_type: "journal-article".into(),
            created: None,
            container_title: Some("Synthetic Letters".into()),
            member_id: None,
            authors: vec![],
            references: refs,
        };
        SynthDoc {
            record,
            extracted,
            fulltext: FullText {
                text,
                page_count: 1,
                extraction_warnings: Vec::new(),
            },
            injected: (genuine..genuine + aliens).collect(),
        }
    }

    pub fn document(&mut self, aliens: usize) -> SynthDoc {
        let genuine = self.rng.gen_range(self.params.genuine.clone());
        self.document_with(genuine, aliens)
    }

    /// A stand-alone alien reference string (never part of any document).
    pub fn alien_reference(&mut self) -> String {
        self.citation(true).0
    }

    pub fn genuine_reference(&mut self) -> String {
        self.citation(false).0
    }

    /// Filler prose of about `chars` characters.
    pub fn prose(&mut self, chars: usize) -> String {
        let mut s = String::new();
        while s.len() < chars {
            let n = self.rng.gen_range(8..=20);
            s.push_str(&self.words(BODY_WORDS, n));
            s.push_str(". ");
        }
        s.truncate(chars);
        s
    }
}

/// TEI in the shape of a references-only extractor response.
pub fn tei_for(refs: &[ExtractedRef]) -> String {
    let mut s = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<TEI xmlns=\"http://www.tei-c.org/ns/1.0\"><text><back><div type=\"references\"><listBibl>\n",
    );
    for r in refs {
        s.push_str("<biblStruct><note type=\"raw_reference\">");
        s.push_str(&xml_escape(&r.raw));
        s.push_str("</note>");
        if let Some(d) = &r.doi {
            s.push_str("<idno type=\"DOI\">");
            s.push_str(&xml_escape(d));
            s.push_str("</idno>");
        }
        s.push_str("</biblStruct>\n");
    }
    s.push_str("</listBibl></div></back></text></TEI>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A PDF with one page per entry of `pages`, each wrapped at `width` chars
/// per line in a base-14 font.
pub fn pdf_from_pages(pages: &[String], width: usize) -> Vec<u8> {
    use lopdf::content::{Content, Operation};
    use lopdf::{dictionary, Document, Object, Stream};

    let mut doc = Document::with_version("1.5");
    let pages_id = doc.new_object_id();
    let font_id = doc.add_object(dictionary! {
        "Type" => "Font",
        "Subtype" => "Type1",
        "BaseFont" => "Helvetica",
        "Encoding" => "WinAnsiEncoding",
    });
    let resources_id = doc.add_object(dictionary! {
        "Font" => dictionary! { "F1" => font_id },
    });
    let mut kids = Vec::new();
    for page in pages {
        let mut ops = vec![
            Operation::new("BT", vec![]),
            Operation::new("Tf", vec!["F1".into(), 9.into()]),
            Operation::new("TL", vec![11.into()]),
            Operation::new("Td", vec![40.into(), 800.into()]),
        ];
        for line in wrap(page, width) {
            ops.push(Operation::new("Tj", vec![Object::string_literal(line)]));
            ops.push(Operation::new("T*", vec![]));
        }
        ops.push(Operation::new("ET", vec![]));
        let content = Content { operations: ops };
        let content_id = doc.add_object(Stream::new(dictionary! {}, content.encode().expect("content encodes")));
        let page_id = doc.add_object(dictionary! {
            "Type" => "Page",
            "Parent" => pages_id,
            "Contents" => content_id,
        });
        kids.push(page_id.into());
    }
    let count = kids.len() as i64;
    doc.objects.insert(
        pages_id,
        Object::Dictionary(dictionary! {
            "Type" => "Pages",
            "Kids" => kids,
            "Count" => count,
            "Resources" => resources_id,
            "MediaBox" => vec![0.into(), 0.into(), 595.into(), 842.into()],
        }),
    );
    let catalog_id = doc.add_object(dictionary! {
        "Type" => "Catalog",
        "Pages" => pages_id,
    });
    doc.trailer.set("Root", catalog_id);
    let mut out = Vec::new();
    doc.save_to(&mut out).expect("in-memory PDF write");
    out
}

/// Greedy word wrap; words longer than `width` are split with a hyphen.
fn wrap(text: &str, width: usize) -> Vec<String> {
    let width = width.max(8);
    let mut lines = Vec::new();
    let mut cur = String::new();
    for word in text.split_whitespace() {
        let mut word = word.to_string();
        while word.chars().count() > width {
            if !cur.is_empty() {
                lines.push(std::mem::take(&mut cur));
            }
            let head: String = word.chars().take(width - 1).collect();
            word = word.chars().skip(width - 1).collect();
            lines.push(format!("{head}-"));
        }
        if !cur.is_empty() && cur.chars().count() + 1 + word.chars().count() > width {
            lines.push(std::mem::take(&mut cur));
        }
        if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(&word);
    }
    if !cur.is_empty() {
        lines.push(cur);
    }
    lines
}

/// Write documents as a corpus: records into the record cache, TEI and text
/// into the extraction cache, and (optionally) PDFs.
pub fn write_corpus(root: &Path, docs: &[SynthDoc], with_pdf: bool) -> io::Result<()> {
    for sub in ["pdf", "tei", "txt"] {
        std::fs::create_dir_all(root.join(sub))?;
    }
    let corpus = Corpus::open(root).map_err(|e| io::Error::other(e.to_string()))?;
    let cache = RecordCache::under(root);
    for d in docs {
        cache.store(&d.record).map_err(|e| io::Error::other(e.to_string()))?;
        corpus.store_tei(d.doi(), &tei_for(&d.extracted), Some("synthetic".into()))?;
        corpus.store_text(d.doi(), &d.fulltext)?;
        if with_pdf {
            crate::fsutil::write_atomic(&corpus.pdf_path(d.doi()), &pdf_from_pages(std::slice::from_ref(&d.fulltext.text), 90))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = Generator::new(7).document(3);
        let b = Generator::new(7).document(3);
        assert_eq!(a, b);
        assert_eq!(a.injected.len(), 3);
        assert_eq!(a.extracted.len(), a.genuine_count());
        for r in &a.record.references[..a.genuine_count()] {
            assert!(a.fulltext.text.contains(r.unstructured.as_deref().unwrap()));
        }
        for &i in &a.injected {
            assert!(a.record.references[i].doi.as_deref().unwrap().starts_with("10.38124/"));
        }
    }

    #[test]
    fn wrap_splits_long_words() {
        let lines = wrap("aaaaaaaaaaaaaaaaaaaa bb", 8);
        assert!(lines.iter().all(|l| l.chars().count() <= 8));
        assert_eq!(lines.concat().replace('-', ""), "aaaaaaaaaaaaaaaaaaaabb");
    }
}
