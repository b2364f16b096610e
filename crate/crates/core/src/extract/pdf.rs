use std::collections::BTreeMap;

use lopdf::content::Content;
use lopdf::{Document, Encoding, Object, ObjectId};

use super::{ExtractError, FullText};
use crate::matchcore::collapse_whitespace;

const SOFT_HYPHEN: char = '\u{00AD}';

/// Page texts concatenated in page order, then [`normalize_fulltext`].
/// A page that fails to decode is skipped with a warning.
pub fn extract_fulltext(pdf_bytes: &[u8]) -> Result<FullText, ExtractError> {
    let doc = Document::load_mem(pdf_bytes).map_err(|e| ExtractError::UnreadablePdf(e.to_string()))?;
    if doc.is_encrypted() {
        return Err(ExtractError::UnreadablePdf("document is encrypted".into()));
    }
    let pages = doc.get_pages();
    if pages.is_empty() {
        return Err(ExtractError::UnreadablePdf("document has no pages".into()));
    }
    let mut raw = String::new();
    let mut warnings = Vec::new();
    for &number in pages.keys() {
        match page_text(&doc, pages[&number]) {
            Ok(text) => {
                raw.push_str(&text);
                raw.push('\n');
            }
            Err(e) => warnings.push(format!("page {number}: {e}")),
        }
    }
    Ok(FullText {
        text: normalize_fulltext(&raw),
        page_count: pages.len(),
        extraction_warnings: warnings,
    })
}

/// Text of one page. Unlike a plain concatenation of the shown strings,
/// line-positioning operators end the current line, so words at line ends
/// stay separated and hyphenation repair can see the break.
fn page_text(doc: &Document, page: ObjectId) -> lopdf::Result<String> {
    let encodings: BTreeMap<Vec<u8>, Encoding> = doc
        .get_page_fonts(page)?
        .into_iter()
        .map(|(name, font)| font.get_font_encoding(doc).map(|e| (name, e)))
        .collect::<lopdf::Result<_>>()?;
    let content = Content::decode(&doc.get_page_content(page)?)?;
    let mut text = String::new();
    let mut encoding: Option<&Encoding> = None;
    let newline = |text: &mut String| {
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
    };
    for op in &content.operations {
        match op.operator.as_str() {
            "Tf" => {
                encoding = op.operands.first().and_then(|o| o.as_name().ok()).and_then(|n| encodings.get(n));
            }
            "Tj" | "TJ" => shown_text(&mut text, encoding, &op.operands),
            "'" | "\"" => {
                newline(&mut text);
                shown_text(&mut text, encoding, &op.operands);
            }
            "T*" | "Td" | "TD" | "Tm" | "ET" => newline(&mut text),
            _ => {}
        }
    }
    Ok(text)
}

fn shown_text(text: &mut String, encoding: Option<&Encoding>, operands: &[Object]) {
    let Some(encoding) = encoding else {
        log::debug!("text shown without a decodable font");
        return;
    };
    for operand in operands {
        match operand {
            Object::String(bytes, _) => {
                if let Ok(s) = Document::decode_text(encoding, bytes) {
                    text.push_str(&s);
                }
            }
            Object::Array(items) => shown_text(text, Some(encoding), items),
            // a large negative kerning adjustment is a word gap
            Object::Integer(i) if *i < -100 => text.push(' '),
            Object::Real(r) if *r < -100.0 => text.push(' '),
            _ => {}
        }
    }
}

/// Remove soft hyphens, rejoin words hyphenated across a line break
/// (`exam-\nple` becomes `example`) and collapse whitespace. Idempotent.
pub fn normalize_fulltext(raw: &str) -> String {
    let chars: Vec<char> = raw.chars().filter(|&c| c != SOFT_HYPHEN).collect();
    let mut joined = String::with_capacity(chars.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '-' && i > 0 && chars[i - 1].is_alphabetic() {
            if let Some(next) = after_line_break(&chars, i + 1) {
                if chars[next].is_alphabetic() {
                    i = next;
                    continue;
                }
            }
        }
        joined.push(c);
        i += 1;
    }
    collapse_whitespace(joined.chars())
}

/// Index of the first non-blank char after horizontal blanks, one line
/// break and more horizontal blanks; `None` if there is no line break.
fn after_line_break(chars: &[char], mut i: usize) -> Option<usize> {
    let horizontal = |c: char| c == ' ' || c == '\t';
    while i < chars.len() && horizontal(chars[i]) {
        i += 1;
    }
    match chars.get(i) {
        Some('\n') => i += 1,
        Some('\r') => {
            i += 1;
            if chars.get(i) == Some(&'\n') {
                i += 1;
            }
        }
        _ => return None,
    }
    while i < chars.len() && horizontal(chars[i]) {
        i += 1;
    }
    (i < chars.len()).then_some(i)
}
