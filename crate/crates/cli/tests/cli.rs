use std::path::Path;
use std::process::{Command, Output};

use sneakref::ingest::{to_item, CrossrefRecord, ReferenceEntry};
use sneakref::synth::{write_corpus, Generator};

fn sneakref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sneakref")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn corpus(dir: &Path, aliens: &[usize]) {
    let mut g = Generator::new(11);
    let docs: Vec<_> = aliens.iter().map(|&k| g.document(k)).collect();
    write_corpus(dir, &docs, false).unwrap();
}

#[test]
fn unknown_detector_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    corpus(tmp.path(), &[0]);
    let o = sneakref(&["detect", "--method", "m7", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown detector"), "{}", stderr(&o));
}

#[test]
fn unknown_detector_in_config_file_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    corpus(tmp.path(), &[0]);
    let cfg = tmp.path().join("run.conf");
    std::fs::write(&cfg, "# detectors\nmethod = m2,bogus\n").unwrap();
    let o = sneakref(&["--config", s(&cfg), "detect", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn m1_without_prefix_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = sneakref(&["detect", "--method", "m1", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("prefix"));
}

#[test]
fn missing_corpus_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = sneakref(&["detect", "--method", "m2", s(&tmp.path().join("nope"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn findings_do_not_change_the_exit_status() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("corpus");
    let out = tmp.path().join("out");
    corpus(&root, &[0, 3, 6]);
    let o = sneakref(&["--out", s(&out), "--jobs", "2", "detect", "--method", "all", "--prefix", "10.38124", s(&root)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let jsonl = std::fs::read_to_string(out.join("verdicts.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 9);
    let m2_ghosts: usize = jsonl
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["method"] == "m2")
        .map(|v| v["ghost"].as_array().unwrap().len())
        .sum();
    assert_eq!(m2_ghosts, 9);
    for f in ["verdicts.csv", "summary.json", "beneficiaries.csv", "temporal.csv", "hist_m2_per_doc.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }

    // the report subcommand rebuilds the same summary from the verdicts
    let re = tmp.path().join("re");
    let records = root.join("cache").join("records");
    let o = sneakref(&["--out", s(&re), "report", "--records", s(&records), s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read(out.join("summary.json")).unwrap(),
        std::fs::read(re.join("summary.json")).unwrap()
    );
}

#[test]
fn config_file_values_yield_to_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("corpus");
    let out = tmp.path().join("out");
    corpus(&root, &[2]);
    let cfg = tmp.path().join("run.conf");
    std::fs::write(&cfg, format!("method=m2\ntheta=250\nout={}\n", out.display())).unwrap();
    let o = sneakref(&["--config", s(&cfg), "detect", s(&root)]);
    assert_eq!(o.status.code(), Some(2), "out-of-range theta from the file");
    let o = sneakref(&["--config", s(&cfg), "detect", "--theta", "60", s(&root)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let params = std::fs::read_to_string(out.join("parameters.json")).unwrap();
    assert!(params.contains("\"theta\": 60"), "{params}");
}

fn record(doi: &str, journal: &str, cited: &[&str]) -> CrossrefRecord {
    CrossrefRecord {
        doi: doi.into(),
        prefix: "10.1".into(),
        work_type: "journal-article".into(),
        created: None,
        container_title: Some(journal.into()),
        member_id: None,
        authors: vec![],
        references: cited
            .iter()
            .enumerate()
            .map(|(i, d)| ReferenceEntry {
                key: format!("r{i}"),
                doi: Some(d.to_string()),
                unstructured: None,
                structured: Default::default(),
                position: i,
            })
            .collect(),
    }
}

#[test]
fn dups_writes_leaderboards() {
    let tmp = tempfile::tempdir().unwrap();
    let snap = tmp.path().join("snap");
    std::fs::create_dir_all(&snap).unwrap();
    let items: Vec<_> = [
        record("10.1/a", "Widget Journal", &["10.9/x", "10.9/x", "10.9/y"]),
        record("10.1/b", "Widget Journal", &["10.9/x", "10.9/x"]),
    ]
    .iter()
    .map(to_item)
    .collect();
    std::fs::write(snap.join("0.json"), serde_json::to_vec(&serde_json::json!({ "items": items })).unwrap()).unwrap();
    let out = tmp.path().join("out");
    let o = sneakref(&["--out", s(&out), "dups", "--min-dup-refs", "1", s(&snap)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let benef = std::fs::read_to_string(out.join("leaderboard_benef.csv")).unwrap();
    assert_eq!(benef, "cited_doi,benef_plus,benef\n10.9/x,2,2\n");
    assert!(out.join("aggregates").join("docs.tsv").is_file());
}
