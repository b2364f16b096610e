use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sneakref::matchcore::{normalize, partial_ratio_chars, ratio, ratio_chars, SimilarityScore};
use sneakref::synth::Generator;

/// Quadratic LCS table.
fn lcs_dp(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    for &ca in a {
        let mut cur = vec![0usize; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Insertion/deletion distance by its own recurrence, not via LCS.
fn indel_dp(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] } else { 1 + prev[j + 1].min(cur[j]) };
        }
        prev = cur;
    }
    prev[b.len()]
}

fn oracle_ratio(a: &[char], b: &[char]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 100.0;
    }
    100.0 * (1.0 - indel_dp(a, b) as f64 / total as f64)
}

/// Best (lcs, len) over every substring of `h`, comparing exact rationals.
fn oracle_partial(n: &[char], h: &[char]) -> (usize, usize) {
    let m = n.len();
    let mut best = (0usize, 0usize);
    for i in 0..h.len() {
        // column-wise LCS of n against h[i..j] for every j
        let mut col = vec![0usize; m + 1];
        for j in i..h.len() {
            let mut diag = 0;
            for k in 1..=m {
                let up = col[k];
                col[k] = if n[k - 1] == h[j] { diag + 1 } else { col[k].max(col[k - 1]) };
                diag = up;
            }
            let (l, len) = (col[m], j + 1 - i);
            if l * (m + best.1) > best.0 * (m + len) {
                best = (l, len);
            }
        }
    }
    best
}

fn random_string(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> Vec<char> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

const SMALL: &[char] = &['a', 'b', 'c', 'd'];
const WIDE: &[char] = &['a', 'e', 'i', 'o', 'n', 's', 't', ' ', '.', 'é', 'ß', '中', '1', '9'];

#[test]
fn ratio_matches_dp_oracle_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..500 {
        let alphabet = if case % 2 == 0 { SMALL } else { WIDE };
        let a = random_string(&mut rng, alphabet, 64);
        let b = random_string(&mut rng, alphabet, 64);
        let got = ratio_chars(&a, &b).value();
        assert_eq!(got, oracle_ratio(&a, &b), "case {case}: {a:?} / {b:?}");
        assert_eq!(lcs_dp(&a, &b) * 2 + indel_dp(&a, &b), a.len() + b.len());
    }
}

#[test]
fn ratio_long_inputs_cross_word_boundaries() {
    // bit-parallel path with several 64-bit words
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let a = random_string(&mut rng, WIDE, 300);
        let b = random_string(&mut rng, WIDE, 300);
        assert_eq!(ratio_chars(&a, &b).value(), oracle_ratio(&a, &b));
    }
}

#[test]
fn ratio_edge_cases() {
    assert_eq!(ratio("abc", "abc").value(), 100.0);
    assert_eq!(ratio("abc", "").value(), 0.0);
    assert_eq!(ratio("", "abc").value(), 0.0);
    assert_eq!(ratio("", "").value(), 100.0);
}

#[test]
fn partial_ratio_matches_exhaustive_substring_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    for case in 0..200 {
        let alphabet = if case % 3 == 0 { WIDE } else { SMALL };
        let mut n = random_string(&mut rng, alphabet, 32);
        if n.is_empty() {
            n.push('a');
        }
        let h = random_string(&mut rng, alphabet, 256);
        let got = partial_ratio_chars(&n, &h).unwrap();
        let (l, len) = oracle_partial(&n, &h);
        assert_eq!(got.score, SimilarityScore::from_lcs(l, n.len(), len), "case {case}: {n:?} in {h:?}");
        // the reported span achieves the score
        assert_eq!(ratio_chars(&n, &h[got.span.clone()]).value(), got.score.value(), "case {case}");
    }
}

#[test]
fn partial_ratio_on_realistic_text_matches_oracle() {
    let mut g = Generator::new(404);
    for _ in 0..15 {
        let n: Vec<char> = normalize(&g.genuine_reference()).chars().take(32).collect();
        let h: Vec<char> = normalize(&g.prose(256)).chars().collect();
        let got = partial_ratio_chars(&n, &h).unwrap();
        let (l, len) = oracle_partial(&n, &h);
        assert_eq!(got.score, SimilarityScore::from_lcs(l, n.len(), len));
    }
}

#[test]
fn verbatim_containment_scores_100() {
    let h: Vec<char> = "alpha beta gamma".chars().collect();
    let n: Vec<char> = "beta gam".chars().collect();
    let got = partial_ratio_chars(&n, &h).unwrap();
    assert_eq!(got.score.value(), 100.0);
    assert_eq!(&h[got.span], n.as_slice());
}

#[test]
fn short_haystack_falls_back_to_whole_ratio() {
    let n: Vec<char> = "abcdefgh".chars().collect();
    let h: Vec<char> = "abcd".chars().collect();
    assert_eq!(partial_ratio_chars(&n, &h).unwrap().score, ratio_chars(&n, &h));
    assert!(partial_ratio_chars(&[], &h).is_err());
}

/// Registered-reference-shaped needles against 10k chars of unrelated prose.
/// Scores of 60 or more would be false positives; they are printed, and a
/// small rate is tolerated.
#[test]
fn unrelated_text_stays_below_threshold() {
    let mut g = Generator::new(2024);
    let haystacks: Vec<Vec<char>> = (0..4).map(|_| normalize(&g.prose(10_000)).chars().collect()).collect();
    let mut counterexamples = Vec::new();
    let mut max = 0.0f64;
    let trials = 200;
    for i in 0..trials {
        let needle: Vec<char> = normalize(&g.genuine_reference()).chars().collect();
        let score = partial_ratio_chars(&needle, &haystacks[i % haystacks.len()]).unwrap().score.value();
        max = max.max(score);
        if score >= 60.0 {
            counterexamples.push((score, needle.iter().collect::<String>()));
        }
    }
    for (score, needle) in &counterexamples {
        println!("counterexample {score:.2}: {needle}");
    }
    println!("max score over {trials} unrelated needles: {max:.2}");
    assert!(counterexamples.len() * 100 <= trials, "{} of {trials} at or above 60", counterexamples.len());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn normalize_is_idempotent(s in "\\PC{0,40}|[ \\t\\nA-Za-zﬁﬂÅé]{0,40}") {
        let once = normalize(&s);
        prop_assert_eq!(normalize(&once), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn ratio_is_symmetric(a in "[abcd ]{0,50}", b in "[abcd ]{0,50}") {
        prop_assert_eq!(ratio(&a, &b), ratio(&b, &a));
    }

    #[test]
    fn partial_never_below_whole_ratio(n in "[abc]{1,20}", h in "[abc]{0,60}") {
        let (n, h): (Vec<char>, Vec<char>) = (n.chars().collect(), h.chars().collect());
        prop_assert!(partial_ratio_chars(&n, &h).unwrap().score >= ratio_chars(&n, &h));
    }

    #[test]
    fn contained_needle_scores_100(pre in "[a-z ]{0,40}", n in "[a-z ]{1,20}", post in "[a-z ]{0,40}") {
        let h: Vec<char> = format!("{pre}{n}{post}").chars().collect();
        let n: Vec<char> = n.chars().collect();
        prop_assert_eq!(partial_ratio_chars(&n, &h).unwrap().score.value(), 100.0);
    }
}
