//! DOI normalization and prefix helpers.
//!
//! DOIs are compared case-insensitively, so everything that leaves this
//! module is lowercase. Resolver prefixes (`https://doi.org/`, `doi:`) are
//! stripped before validation.

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

const RESOLVER_PREFIXES: &[&str] = &[
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi.org/",
    "doi:",
];

/// Characters left untouched when a DOI becomes a file name.
const FILE_SAFE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'.').remove(b'-').remove(b'_');

/// Normalize a raw DOI string. Returns `None` unless the result matches
/// `10.<digits>/<suffix>` with a non-empty suffix.
pub fn normalize_doi(raw: &str) -> Option<String> {
    let mut s = raw.trim();
    for prefix in RESOLVER_PREFIXES {
        if s.len() >= prefix.len() && s[..prefix.len()].eq_ignore_ascii_case(prefix) {
            s = s[prefix.len()..].trim_start();
            break;
        }
    }
    let lowered = s.to_lowercase();
    if is_valid_doi(&lowered) {
        Some(lowered)
    } else {
        None
    }
}

/// `10.<digits>/<suffix>`; the suffix must be non-empty and free of whitespace.
pub fn is_valid_doi(doi: &str) -> bool {
    let Some(rest) = doi.strip_prefix("10.") else {
        return false;
    };
    let Some((registrant, suffix)) = rest.split_once('/') else {
        return false;
    };
    !registrant.is_empty()
        && registrant.bytes().all(|b| b.is_ascii_digit() || b == b'.')
        && registrant.as_bytes()[0].is_ascii_digit()
        && !suffix.is_empty()
        && !suffix.chars().any(char::is_whitespace)
}

/// The registrant prefix: everything before the first `/`, lowercased.
pub fn prefix_of(doi: &str) -> Option<String> {
    let (prefix, rest) = doi.split_once('/')?;
    if prefix.is_empty() || rest.is_empty() {
        return None;
    }
    Some(prefix.to_lowercase())
}

/// Percent-encode a DOI into a single path component.
pub fn encode_for_path(doi: &str) -> String {
    utf8_percent_encode(doi, FILE_SAFE).to_string()
}

pub fn decode_from_path(name: &str) -> Option<String> {
    percent_decode_str(name)
        .decode_utf8()
        .ok()
        .map(|s| s.into_owned())
}
