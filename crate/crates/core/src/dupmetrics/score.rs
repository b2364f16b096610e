use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::DupAggregates;

pub const DEFAULT_MIN_DUP_REFS: u64 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorJournalScore {
    pub journal: String,
    pub author: String,
    pub dup_to_author: u64,
    pub dup_total: u64,
    pub ref_to_author: u64,
    pub ref_total: u64,
    pub s1a: f64,
    pub s1b: f64,
    pub s1: f64,
}

impl AuthorJournalScore {
    /// Score from the four counts; a zero denominator zeroes its share.
    pub fn from_counts(journal: &str, author: &str, dup_to_author: u64, dup_total: u64, ref_to_author: u64, ref_total: u64) -> Self {
        let share = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let s1a = share(ref_to_author, ref_total);
        let s1b = share(dup_to_author, dup_total);
        AuthorJournalScore {
            journal: journal.to_string(),
            author: author.to_string(),
            dup_to_author,
            dup_total,
            ref_to_author,
            ref_total,
            s1a,
            s1b,
            s1: (s1b - s1a) * dup_to_author as f64,
        }
    }
}

/// Author-journal pairs by decreasing s1 (ties: journal, then author).
/// Journals with fewer than `min_dup_refs` duplicated references are skipped.
/// Needs aggregates built with author tracking.
pub fn score_author_journal(agg: &DupAggregates, min_dup_refs: u64) -> Vec<AuthorJournalScore> {
    let mut out = Vec::new();
    for (jkey, pairs) in &agg.journal_cited {
        let Some(j) = agg.journals.get(jkey) else { continue };
        if j.dup_total < min_dup_refs {
            continue;
        }
        let mut per_author: HashMap<&str, (u64, u64)> = HashMap::new();
        for (cited, p) in pairs {
            let Some(names) = agg.authors.get(cited) else { continue };
            for a in names {
                let e = per_author.entry(a).or_default();
                e.0 += p.dups;
                e.1 += p.refs;
            }
        }
        let title = if j.title.is_empty() { jkey.as_str() } else { j.title.as_str() };
        for (author, (dups, refs)) in per_author {
            out.push(AuthorJournalScore::from_counts(title, author, dups, j.dup_total, refs, j.ref_total));
        }
    }
    out.sort_by(|a, b| {
        b.s1.partial_cmp(&a.s1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.journal.cmp(&b.journal))
            .then_with(|| a.author.cmp(&b.author))
    });
    out
}

/// The `k` largest entries by metric, ties broken by key ascending.
pub fn top_k<K: Ord, M: PartialOrd>(items: impl IntoIterator<Item = (K, M)>, k: usize) -> Vec<(K, M)> {
    let mut v: Vec<(K, M)> = items.into_iter().collect();
    v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then_with(|| a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_break_by_key() {
        let m = vec![("c", 1), ("b", 3), ("a", 3)];
        assert_eq!(top_k(m.clone(), 2), vec![("a", 3), ("b", 3)]);
        assert_eq!(top_k(m, 10), vec![("a", 3), ("b", 3), ("c", 1)]);
    }

    #[test]
    fn hendry_row() {
        let s = AuthorJournalScore::from_counts("j", "david f hendry", 76, 104, 204, 1391);
        assert!((s.s1 - 44.4).abs() < 0.05, "{}", s.s1);
        assert!(s.s1a <= 1.0 && s.s1b <= 1.0);
    }

    #[test]
    fn zero_denominators() {
        let s = AuthorJournalScore::from_counts("j", "a", 0, 0, 5, 10);
        assert_eq!(s.s1, 0.0);
        assert_eq!(s.s1b, 0.0);
    }
}
