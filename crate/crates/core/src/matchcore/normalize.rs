use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Compatibility-fold, lowercase and collapse whitespace. Punctuation is kept.
pub fn normalize(text: &str) -> String {
    let lowered: String = text.nfkc().flat_map(char::to_lowercase).collect();
    // Lowercasing can produce sequences that NFKC recomposes differently.
    collapse_whitespace(lowered.nfkc())
}

/// Collapse every whitespace run to a single space and strip both ends.
pub fn collapse_whitespace<I: IntoIterator<Item = char>>(chars: I) -> String {
    let mut out = String::new();
    let mut pending_space = false;
    for c in chars {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// Name key used for author identity: diacritics removed, lowercase,
/// punctuation turned into spaces. "David F. Hendry" becomes "david f hendry".
pub fn name_key(name: &str) -> String {
    let folded = name
        .nfkd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' });
    collapse_whitespace(folded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collapses_and_lowercases() {
        assert_eq!(normalize("  Foo\tBAR\n"), "foo bar");
    }

    #[test]
    fn folds_ligatures() {
        assert_eq!(normalize("\u{FB01}le"), "file");
    }

    #[test]
    fn keeps_punctuation() {
        assert_eq!(normalize("Doi: 10.38124/IJISRT."), "doi: 10.38124/ijisrt.");
    }

    #[test]
    fn name_keys() {
        assert_eq!(name_key("David F. Hendry"), "david f hendry");
        assert_eq!(name_key("Timofey  Krakhmal'nyy"), "timofey krakhmal nyy");
        assert_eq!(name_key("Ästrid Müller"), "astrid muller");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn normalize_is_idempotent(s in any::<String>()) {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once);
        }

        #[test]
        fn normalize_is_idempotent_on_text_like_input(s in "[ \\t\\nA-Za-zÀ-ÿﬀ-ﬆ.,;:()0-9-]{0,80}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once);
        }
    }
}
