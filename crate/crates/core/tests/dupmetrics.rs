use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sneakref::dupmetrics::{
    aggregate, aggregate_benef, aggregate_journal, aggregate_snapshot, doc_dup_stats, journal_key, load, persist,
    score_author_journal, snapshot_summary, top_k, AuthorJournalScore, DupAggregates, DupConfig,
};
use sneakref::exec::Execution;
use sneakref::ingest::{to_item, CrossrefRecord, ReferenceEntry, SnapshotSource};

fn record(doi: &str, journal: Option<&str>, work_type: &str, cited: &[String]) -> CrossrefRecord {
    CrossrefRecord {
        doi: doi.into(),
        prefix: doi.split('/').next().unwrap().into(),
        work_type: work_type.into(),
        created: None,
        container_title: journal.map(String::from),
        member_id: None,
        authors: vec![],
        references: cited
            .iter()
            .enumerate()
            .map(|(i, d)| ReferenceEntry {
                key: format!("r{i}"),
                doi: Some(d.clone()),
                unstructured: None,
                structured: Default::default(),
                position: i,
            })
            .collect(),
    }
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

const JOURNALS: [&str; 4] = ["Widget Journal", "widget  journal", "Annals of Gears", "Sprocket Letters"];

/// Random multigraph on at most 50 nodes and 400 edges; some citing
/// records are books and some lack a journal.
fn random_graph(rng: &mut ChaCha8Rng) -> Vec<CrossrefRecord> {
    let nodes = rng.gen_range(2..=50);
    let edges = rng.gen_range(0..=400);
    let mut out: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for _ in 0..edges {
        let c = rng.gen_range(0..nodes);
        let d = rng.gen_range(0..nodes);
        out.entry(c).or_default().push(format!("10.1/n{d}"));
    }
    (0..nodes)
        .map(|c| {
            let journal = match rng.gen_range(0..6) {
                5 => None,
                j => Some(JOURNALS[j % JOURNALS.len()]),
            };
            let kind = if rng.gen_bool(0.1) { "book-chapter" } else { "journal-article" };
            let mut cited = out.remove(&c).unwrap_or_default();
            cited.shuffle(rng);
            record(&format!("10.1/n{c}"), journal, kind, &cited)
        })
        .collect()
}

#[derive(Default, Debug, PartialEq)]
struct Oracle {
    nbrefdup: HashMap<String, (u64, u64)>,
    benef: HashMap<String, (u64, u64)>,
    journal_plus: HashMap<String, u64>,
}

/// Direct enumeration over all (citing, cited) pairs.
fn oracle(records: &[CrossrefRecord]) -> Oracle {
    let mut o = Oracle::default();
    for r in records.iter().filter(|r| r.work_type != "book" && r.work_type != "book-chapter") {
        let mut mult: HashMap<&str, u64> = HashMap::new();
        for e in &r.references {
            *mult.entry(e.doi.as_deref().unwrap()).or_default() += 1;
        }
        for (d, n) in mult {
            if n > 1 {
                let s = o.nbrefdup.entry(r.doi.clone()).or_default();
                s.0 += n - 1;
                s.1 += 1;
                let b = o.benef.entry(d.to_string()).or_default();
                b.0 += n - 1;
                b.1 += 1;
                *o.journal_plus.entry(journal_key(r.container_title.as_deref())).or_default() += n - 1;
            }
        }
    }
    o
}

#[test]
fn conservation_on_random_multigraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let cfg = DupConfig::default();
    for _ in 0..50 {
        let records = random_graph(&mut rng);
        let agg = aggregate(&records, &cfg);
        let want = oracle(&records);

        let docs: HashMap<String, (u64, u64)> =
            agg.docs.iter().map(|(k, v)| (k.clone(), (v.nbrefdup_plus, v.nbrefdup))).collect();
        let benef: HashMap<String, (u64, u64)> =
            agg.benef.iter().map(|(k, v)| (k.clone(), (v.benef_plus, v.benef))).collect();
        assert_eq!(docs, want.nbrefdup);
        assert_eq!(benef, want.benef);

        let sum_benef: u64 = agg.benef.values().map(|b| b.benef_plus).sum();
        let sum_docs: u64 = agg.docs.values().map(|d| d.nbrefdup_plus).sum();
        assert_eq!(sum_benef, sum_docs);
        assert_eq!(sum_docs, agg.summary.surplus);

        for (j, stats) in &agg.journals {
            assert_eq!(stats.jourdup_plus, want.journal_plus.get(j).copied().unwrap_or(0), "journal {j}");
        }
        for r in &records {
            if let Some(d) = agg.docs.get(&r.doi) {
                assert_eq!(d, &doc_dup_stats(r));
            }
        }
    }
}

fn shard_and_merge(records: &[CrossrefRecord], p: usize, rng: &mut ChaCha8Rng, cfg: &DupConfig) -> DupAggregates {
    let mut shards: Vec<Vec<&CrossrefRecord>> = vec![Vec::new(); p];
    for r in records {
        shards[rng.gen_range(0..p)].push(r);
    }
    let mut partials: Vec<DupAggregates> = shards.into_iter().map(|s| aggregate(s, cfg)).collect();
    partials.shuffle(rng);
    partials.into_iter().fold(DupAggregates::new(), DupAggregates::merge)
}

#[test]
fn shard_merge_equals_single_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = DupConfig::default();
    for _ in 0..20 {
        let mut records = random_graph(&mut rng);
        for r in records.iter_mut().step_by(3) {
            r.authors = vec!["Ann Author".into(), format!("Bo Writer{}", r.references.len() % 4)];
        }
        let single = aggregate(&records, &cfg);
        for p in [1, 2, 7] {
            assert_eq!(shard_and_merge(&records, p, &mut rng, &cfg), single, "p={p}");
        }
    }
}

#[test]
fn snapshot_aggregation_is_mode_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let records = random_graph(&mut rng);
    let tmp = tempfile::tempdir().unwrap();
    for (i, chunk) in records.chunks(7).enumerate() {
        let items: Vec<_> = chunk.iter().map(to_item).collect();
        std::fs::write(tmp.path().join(format!("{i}.json")), serde_json::to_vec(&serde_json::json!({ "items": items })).unwrap())
            .unwrap();
    }
    let source = SnapshotSource::open(tmp.path()).unwrap();
    let cfg = DupConfig::default();
    let (seq, seq_stats) = aggregate_snapshot(&source, &cfg, Execution::Sequential).unwrap();
    let (par, par_stats) = aggregate_snapshot(&source, &cfg, Execution::Parallel).unwrap();
    assert_eq!(seq, aggregate(&records, &cfg));
    assert_eq!(seq, par);
    assert_eq!(seq_stats, par_stats);
}

#[test]
fn persisted_aggregates_resume_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = DupConfig::default();
    let records = random_graph(&mut rng);
    let (a, b) = records.split_at(records.len() / 2);
    let tmp = tempfile::tempdir().unwrap();
    persist(&aggregate(a, &cfg), tmp.path()).unwrap();
    let resumed = load(tmp.path()).unwrap().merge(aggregate(b, &cfg));
    assert_eq!(resumed, aggregate(&records, &cfg));
}

#[test]
fn tiny_graph_enumerations() {
    let cfg = DupConfig::default();
    let d = record("10.1/d", Some("J"), "journal-article", &strs(&["10.2/r1", "10.2/r1", "10.2/r2", "10.2/r1"]));
    let s = doc_dup_stats(&d);
    assert_eq!((s.nbrefdup_plus, s.nbrefdup), (2, 1));
    let clean = record("10.1/c", Some("J"), "journal-article", &strs(&["10.2/r1", "10.2/r2"]));
    let s = doc_dup_stats(&clean);
    assert_eq!((s.nbrefdup_plus, s.nbrefdup), (0, 0));

    let sum = snapshot_summary([&d], &cfg);
    assert_eq!((sum.entries, sum.distinct, sum.duplicated, sum.surplus), (4, 2, 1, 2));
    assert_eq!(sum.avg_duplicates(), 2.0);
    assert_eq!(snapshot_summary(std::iter::empty(), &cfg), Default::default());

    let c1 = record("10.1/c1", Some("J"), "journal-article", &strs(&["10.2/d", "10.2/d", "10.2/d"]));
    let c2 = record("10.1/c2", Some("J"), "journal-article", &strs(&["10.2/d", "10.2/e"]));
    let benef = aggregate_benef([&c1, &c2], &cfg);
    assert_eq!((benef["10.2/d"].benef_plus, benef["10.2/d"].benef), (2, 1));
    assert!(!benef.contains_key("10.2/e"));
    assert!(!benef.contains_key("10.2/nobody"));
}

#[test]
fn journal_totals_over_its_documents() {
    let cfg = DupConfig::default();
    let docs = [
        record("10.1/a", Some("Gear Review"), "journal-article", &strs(&["10.2/x", "10.2/x", "10.2/y", "10.2/y"])),
        record("10.1/b", Some("Gear Review"), "journal-article", &strs(&["10.2/z"])),
        record("10.1/c", Some("GEAR  Review"), "journal-article", &strs(&["10.2/x"; 6])),
    ];
    let j = aggregate_journal(&docs, &cfg);
    assert_eq!(j.len(), 1);
    let g = &j["gear review"];
    assert_eq!((g.jourdup_plus, g.jourdup), (7, 2));
    assert_eq!(g.title, "GEAR  Review");
}

#[test]
fn excluded_types_do_not_count() {
    let cfg = DupConfig::default();
    let cited = strs(&["10.2/x", "10.2/x"]);
    let book = record("10.1/b", Some("Big Book"), "book", &cited);
    let chapter = record("10.1/c", Some("Big Book"), "book-chapter", &cited);
    let agg = aggregate([&book, &chapter], &cfg);
    assert!(agg.docs.is_empty() && agg.benef.is_empty() && agg.journals.is_empty());
    assert_eq!(agg.summary.excluded_records, 2);
    let keep_all = DupConfig {
        excluded_types: Default::default(),
        ..DupConfig::default()
    };
    assert_eq!(aggregate([&book, &chapter], &keep_all).benef["10.2/x"].benef, 2);
}

#[test]
fn top_k_ties_and_overflow() {
    let m = vec![("c", 1), ("b", 3), ("a", 3)];
    assert_eq!(top_k(m.clone(), 2), vec![("a", 3), ("b", 3)]);
    assert_eq!(top_k(m, 10), vec![("a", 3), ("b", 3), ("c", 1)]);
}

/// Twelve reference author-journal rows: counts and score.
pub const SCORED_ROWS: [(u64, u64, u64, u64, f64); 12] = [
    (76, 104, 204, 1391, 44.4),
    (35, 49, 58, 1273, 23.4),
    (142, 981, 213, 18990, 19.0),
    (142, 981, 242, 18990, 18.7),
    (75, 315, 75, 7653, 17.1),
    (25, 49, 57, 1273, 11.6),
    (199, 2650, 283, 10303, 9.5),
    (54, 182, 551, 4154, 8.9),
    (213, 3901, 1027, 56035, 7.7),
    (36, 164, 64, 2224, 6.9),
    (49, 216, 227, 2455, 6.6),
    (114, 1071, 249, 4602, 6.0),
];

#[test]
fn author_journal_rows_reproduce() {
    for (dup_a, dup_t, ref_a, ref_t, want) in SCORED_ROWS {
        let s = AuthorJournalScore::from_counts("j", "a", dup_a, dup_t, ref_a, ref_t);
        assert!((s.s1 - want).abs() <= 0.05, "{dup_a},{dup_t},{ref_a},{ref_t}: {} vs {want}", s.s1);
        assert!((0.0..=1.0).contains(&s.s1a) && (0.0..=1.0).contains(&s.s1b));
    }
}

/// A journal citing 60 works by 10 authors; duplicates go either to random
/// references or only to references of author 0.
fn author_graph(rng: &mut ChaCha8Rng, targeted: bool) -> Vec<CrossrefRecord> {
    let mut records: Vec<CrossrefRecord> = (0..60)
        .map(|w| {
            let mut r = record(&format!("10.9/w{w}"), Some("Cited Works"), "journal-article", &[]);
            r.authors = vec![format!("Author Number{}", w % 10)];
            r
        })
        .collect();
    for c in 0..80 {
        let mut cited: Vec<String> = (0..60).collect::<Vec<_>>().choose_multiple(rng, 15).map(|w| format!("10.9/w{w}")).collect();
        let dups = rng.gen_range(1..=4);
        for _ in 0..dups {
            let pick = if targeted {
                match cited.iter().find(|d| d.trim_start_matches("10.9/w").parse::<usize>().unwrap() % 10 == 0) {
                    Some(d) => d.clone(),
                    None => continue,
                }
            } else {
                cited[rng.gen_range(0..cited.len())].clone()
            };
            cited.push(pick);
        }
        records.push(record(&format!("10.1/c{c}"), Some("Citing Journal"), "journal-article", &cited));
    }
    records
}

fn max_abs_s1(records: &[CrossrefRecord]) -> f64 {
    let agg = aggregate(records, &DupConfig::default());
    score_author_journal(&agg, 1)
        .iter()
        .filter(|s| s.journal == "Citing Journal")
        .map(|s| s.s1.abs())
        .fold(0.0, f64::max)
}

#[test]
fn random_duplication_stays_near_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..5 {
        let null = max_abs_s1(&author_graph(&mut rng, false));
        let targeted = max_abs_s1(&author_graph(&mut rng, true));
        assert!(targeted > 5.0 * null, "targeted {targeted} vs null {null}");
    }
}

#[test]
fn zero_duplicate_journal_scores_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut records = author_graph(&mut rng, false);
    records.push(record("10.1/quiet", Some("Quiet Journal"), "journal-article", &strs(&["10.9/w1", "10.9/w2"])));
    let agg = aggregate(&records, &DupConfig::default());
    let quiet: Vec<_> = score_author_journal(&agg, 0).into_iter().filter(|s| s.journal == "Quiet Journal").collect();
    assert!(!quiet.is_empty());
    assert!(quiet.iter().all(|s| s.s1 == 0.0 && s.s1b == 0.0));
}
