use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{ExtractError, ExtractedRef};
use crate::doi::normalize_doi;
use crate::matchcore::collapse_whitespace;

/// Read the bibliography of a TEI document. Works on full-document and
/// references-only responses; only `listBibl` children are read, so header
/// `biblStruct`s describing the document itself are ignored.
pub fn parse_tei(xml: &str) -> Result<Vec<ExtractedRef>, ExtractError> {
    let mut reader = Reader::from_str(xml);
    let mut refs = Vec::new();

    let mut list_depth = 0usize;
    // Nesting depth inside the current top-level entry; 0 = not in one.
    let mut entry_depth = 0usize;
    let mut text = String::new();
    let mut entry_doi: Option<String> = None;
    let mut in_doi_idno = false;
    let mut doi_text = String::new();

    loop {
        let event = reader
            .read_event()
            .map_err(|e| ExtractError::MalformedTei(format!("at byte {}: {e}", reader.buffer_position())))?;
        match event {
            Event::Start(e) => {
                let name = local_name(&e);
                if entry_depth > 0 {
                    entry_depth += 1;
                    text.push(' ');
                    if name == "idno" && is_doi_idno(&e) {
                        in_doi_idno = true;
                        doi_text.clear();
                    }
                } else if name == "listBibl" {
                    list_depth += 1;
                } else if list_depth > 0 && (name == "biblStruct" || name == "bibl") {
                    entry_depth = 1;
                    text.clear();
                    entry_doi = None;
                }
            }
            Event::Empty(_) => {
                if entry_depth > 0 {
                    text.push(' ');
                }
            }
            Event::End(e) => {
                let name = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
                if entry_depth > 0 {
                    if in_doi_idno && name == "idno" {
                        in_doi_idno = false;
                        if entry_doi.is_none() {
                            entry_doi = normalize_doi(&doi_text);
                        }
                    }
                    entry_depth -= 1;
                    text.push(' ');
                    if entry_depth == 0 {
                        let mut raw = collapse_whitespace(text.chars());
                        if raw.is_empty() {
                            if let Some(d) = &entry_doi {
                                raw = d.clone();
                            }
                        }
                        if !raw.is_empty() {
                            refs.push(ExtractedRef {
                                raw,
                                doi: entry_doi.take(),
                                position: refs.len(),
                            });
                        }
                    }
                } else if name == "listBibl" {
                    list_depth = list_depth.saturating_sub(1);
                }
            }
            Event::Text(t) => {
                if entry_depth > 0 {
                    let s = t
                        .unescape()
                        .map_err(|e| ExtractError::MalformedTei(e.to_string()))?;
                    text.push_str(&s);
                    if in_doi_idno {
                        doi_text.push_str(&s);
                    }
                }
            }
            Event::CData(t) => {
                if entry_depth > 0 {
                    let s = String::from_utf8_lossy(&t).into_owned();
                    text.push_str(&s);
                    if in_doi_idno {
                        doi_text.push_str(&s);
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if entry_depth > 0 || list_depth > 0 {
        return Err(ExtractError::MalformedTei("unexpected end of document".into()));
    }
    Ok(refs)
}

fn local_name(e: &BytesStart<'_>) -> String {
    String::from_utf8_lossy(e.local_name().as_ref()).into_owned()
}

fn is_doi_idno(e: &BytesStart<'_>) -> bool {
    e.attributes()
        .flatten()
        .any(|a| a.key.local_name().as_ref() == b"type" && a.value.eq_ignore_ascii_case(b"doi"))
}
