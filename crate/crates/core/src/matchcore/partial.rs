//! Best-substring similarity.
//!
//! `partial_ratio(needle, haystack)` is the maximum of `ratio(needle, s)` over
//! every contiguous substring `s` of the haystack, of any length. Candidate
//! spans are seeded from needle-length alignment windows, then refined with a
//! parametric search: for the current best ratio `t = p/q`, a local-alignment
//! pass maximizes `2q * lcs(needle, s) - p * |s|` over all substrings. A
//! positive margin over `p * |needle|` yields a strictly better substring;
//! otherwise `t` is the exact optimum. All arithmetic is integral.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::ratio::{Pattern, SimilarityScore};
use super::MatchError;

/// Winning substring of a best-substring search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialMatch {
    pub score: SimilarityScore,
    /// Char offsets into the haystack.
    pub span: Range<usize>,
}

pub fn partial_ratio(needle: &str, haystack: &str) -> Result<PartialMatch, MatchError> {
    let needle: Vec<char> = needle.chars().collect();
    let haystack: Vec<char> = haystack.chars().collect();
    partial_ratio_chars(&needle, &haystack)
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    lcs: usize,
    start: usize,
    end: usize,
}

impl Candidate {
    fn len(&self) -> usize {
        self.end - self.start
    }

    /// Strict comparison of `2 * lcs / (m + len)` via cross-multiplication.
    fn beats(&self, other: &Candidate, m: usize) -> bool {
        self.lcs * (m + other.len()) > other.lcs * (m + self.len())
    }
}

pub fn partial_ratio_chars(needle: &[char], haystack: &[char]) -> Result<PartialMatch, MatchError> {
    let m = needle.len();
    if m == 0 {
        return Err(MatchError::EmptyNeedle);
    }
    if haystack.is_empty() {
        return Ok(PartialMatch {
            score: SimilarityScore::from_lcs(0, m, 0),
            span: 0..0,
        });
    }
    if let Some(pos) = find_verbatim(needle, haystack) {
        return Ok(PartialMatch {
            score: SimilarityScore::MAX,
            span: pos..pos + m,
        });
    }

    let pattern = Pattern::new(needle);
    let mut best = Candidate {
        lcs: pattern.lcs(haystack),
        start: 0,
        end: haystack.len(),
    };
    let step = (m / 4).max(1);
    for start in (0..haystack.len()).step_by(step) {
        let end = (start + m).min(haystack.len());
        let cand = Candidate {
            lcs: pattern.lcs(&haystack[start..end]),
            start,
            end,
        };
        if cand.beats(&best, m) {
            best = cand;
        }
    }

    let mut scratch = Scratch::new(m);
    loop {
        let p = 2 * best.lcs as i64;
        let q = (m + best.len()) as i64;
        let (objective, start, end) = scratch.max_objective(needle, haystack, p, q);
        if objective <= p * m as i64 {
            break;
        }
        let cand = Candidate {
            lcs: pattern.lcs(&haystack[start..end]),
            start,
            end,
        };
        if !cand.beats(&best, m) {
            debug_assert!(false, "parametric step failed to improve");
            break;
        }
        best = cand;
    }

    Ok(PartialMatch {
        score: SimilarityScore::from_lcs(best.lcs, m, best.len()),
        span: best.start..best.end,
    })
}

fn find_verbatim(needle: &[char], haystack: &[char]) -> Option<usize> {
    if needle.len() > haystack.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| w == needle)
}

#[derive(Clone, Copy, Default)]
struct Cell {
    val: i64,
    start: u32,
}

struct Scratch {
    prev: Vec<Cell>,
    cur: Vec<Cell>,
}

impl Scratch {
    fn new(m: usize) -> Self {
        Scratch {
            prev: vec![Cell::default(); m + 1],
            cur: vec![Cell::default(); m + 1],
        }
    }

    /// Maximize `2q * matches - p * |s|` over substrings `s = hay[start..end]`
    /// and common subsequences of `needle` and `s`. Returns the maximum and
    /// its span. Ties prefer the later start, i.e. the shorter span.
    fn max_objective(&mut self, needle: &[char], hay: &[char], p: i64, q: i64) -> (i64, usize, usize) {
        let m = needle.len();
        let gain = 2 * q - p;
        self.prev.iter_mut().for_each(|c| *c = Cell::default());
        let mut best = (0i64, 0usize, 0usize);

        for j in 1..=hay.len() {
            let c = hay[j - 1];
            let fresh = Cell { val: 0, start: j as u32 };
            let prev = &self.prev;
            let cur = &mut self.cur;
            cur[0] = fresh;
            let mut left = fresh;
            for k in 1..=m {
                // skip needle[k-1]
                let mut best_cell = left;
                // hay[j-1] joins the substring unmatched
                let up = prev[k];
                let ext = up.val - p;
                if ext > best_cell.val || (ext == best_cell.val && up.start > best_cell.start) {
                    best_cell = Cell { val: ext, start: up.start };
                }
                if needle[k - 1] == c {
                    let diag = prev[k - 1];
                    let hit = diag.val + gain;
                    if hit > best_cell.val || (hit == best_cell.val && diag.start > best_cell.start) {
                        best_cell = Cell { val: hit, start: diag.start };
                    }
                }
                // fresh empty substring at j
                if best_cell.val <= 0 {
                    best_cell = fresh;
                }
                cur[k] = best_cell;
                left = best_cell;
            }
            if left.val > best.0 {
                best = (left.val, left.start as usize, j);
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
        }
        best
    }
}
