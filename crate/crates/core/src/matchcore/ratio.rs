use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Similarity on the 0..=100 scale. Always derived from an indel distance
/// and the combined length of the two compared strings.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub const MAX: SimilarityScore = SimilarityScore(100.0);
    pub const MIN: SimilarityScore = SimilarityScore(0.0);

    /// `100 * (1 - distance / total)`; two empty strings are identical.
    pub fn from_distance(distance: usize, total: usize) -> Self {
        debug_assert!(distance <= total);
        if total == 0 {
            return Self::MAX;
        }
        SimilarityScore(100.0 * (1.0 - distance as f64 / total as f64))
    }

    /// Score from an LCS length and the two string lengths.
    pub fn from_lcs(lcs: usize, len_a: usize, len_b: usize) -> Self {
        let total = len_a + len_b;
        Self::from_distance(total - 2 * lcs, total)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for SimilarityScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.0)
    }
}

/// Indel similarity of two strings, compared by Unicode scalar value.
pub fn ratio(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    ratio_chars(&a, &b)
}

pub fn ratio_chars(a: &[char], b: &[char]) -> SimilarityScore {
    if a.is_empty() || b.is_empty() {
        return SimilarityScore::from_lcs(0, a.len(), b.len());
    }
    // The shorter side becomes the bit pattern.
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let lcs = Pattern::new(short).lcs(long);
    SimilarityScore::from_lcs(lcs, a.len(), b.len())
}

/// Indel distance (insertions and deletions only).
pub fn indel_distance(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return a.len() + b.len();
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    a.len() + b.len() - 2 * Pattern::new(short).lcs(long)
}

/// Precomputed match masks for a bit-parallel LCS against many texts.
pub(crate) struct Pattern {
    len: usize,
    words: usize,
    ascii: Vec<u64>,
    other: HashMap<char, Vec<u64>>,
    zeros: Vec<u64>,
}

impl Pattern {
    pub(crate) fn new(chars: &[char]) -> Self {
        let len = chars.len();
        let words = len.div_ceil(64).max(1);
        let mut ascii = vec![0u64; 128 * words];
        let mut other: HashMap<char, Vec<u64>> = HashMap::new();
        for (i, &c) in chars.iter().enumerate() {
            let (w, bit) = (i / 64, 1u64 << (i % 64));
            if (c as u32) < 128 {
                ascii[c as usize * words + w] |= bit;
            } else {
                other.entry(c).or_insert_with(|| vec![0; words])[w] |= bit;
            }
        }
        Pattern {
            len,
            words,
            ascii,
            other,
            zeros: vec![0; words],
        }
    }

    fn mask(&self, c: char) -> &[u64] {
        if (c as u32) < 128 {
            let start = c as usize * self.words;
            &self.ascii[start..start + self.words]
        } else {
            self.other.get(&c).map_or(&self.zeros, Vec::as_slice)
        }
    }

    /// Length of the longest common subsequence with `text`.
    pub(crate) fn lcs(&self, text: &[char]) -> usize {
        if self.len == 0 {
            return 0;
        }
        let mut v = vec![!0u64; self.words];
        for &c in text {
            let pm = self.mask(c);
            let mut carry = 0u64;
            for (vw, &m) in v.iter_mut().zip(pm) {
                let u = *vw & m;
                let (s1, c1) = vw.overflowing_add(u);
                let (s2, c2) = s1.overflowing_add(carry);
                carry = (c1 || c2) as u64;
                *vw = s2 | (*vw & !m);
            }
        }
        let mut zeros = 0usize;
        for (w, &vw) in v.iter().enumerate() {
            let bits = if w + 1 == self.words && self.len % 64 != 0 {
                self.len % 64
            } else {
                64
            };
            let mask = if bits == 64 { !0u64 } else { (1u64 << bits) - 1 };
            zeros += (!vw & mask).count_ones() as usize;
        }
        zeros
    }
}
