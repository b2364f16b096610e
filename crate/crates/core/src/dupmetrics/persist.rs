//! Sorted tab-separated aggregate files and CSV leaderboards.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::{score_author_journal, top_k, BenefStats, DupAggregates, DupDocStats, JournalStats, PairCounts, NO_JOURNAL};
use crate::detectors::csv_field;
use crate::fsutil::write_atomic;

pub const SUMMARY_TSV: &str = "summary.tsv";
pub const DOCS_TSV: &str = "docs.tsv";
pub const BENEF_TSV: &str = "benef.tsv";
pub const JOURNALS_TSV: &str = "journals.tsv";
pub const JOURNAL_CITED_TSV: &str = "journal_cited.tsv";
pub const AUTHORS_TSV: &str = "authors.tsv";

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn lines(mut rows: Vec<String>) -> String {
    rows.sort();
    let mut out = String::new();
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn persist(agg: &DupAggregates, dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let s = &agg.summary;
    let summary = [
        ("distinct", s.distinct),
        ("duplicated", s.duplicated),
        ("entries", s.entries),
        ("entries_without_doi", s.entries_without_doi),
        ("excluded_records", s.excluded_records),
        ("records", s.records),
        ("surplus", s.surplus),
    ]
    .iter()
    .map(|(k, v)| format!("{k}\t{v}"))
    .collect();
    write_atomic(&dir.join(SUMMARY_TSV), lines(summary).as_bytes())?;

    let docs = agg
        .docs
        .values()
        .map(|d| format!("{}\t{}\t{}", clean(&d.doi), d.nbrefdup_plus, d.nbrefdup))
        .collect();
    write_atomic(&dir.join(DOCS_TSV), lines(docs).as_bytes())?;

    let benef = agg
        .benef
        .iter()
        .map(|(k, b)| format!("{}\t{}\t{}", clean(k), b.benef_plus, b.benef))
        .collect();
    write_atomic(&dir.join(BENEF_TSV), lines(benef).as_bytes())?;

    let journals = agg
        .journals
        .iter()
        .map(|(k, j)| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                clean(k),
                clean(&j.title),
                j.jourdup_plus,
                j.jourdup,
                j.ref_total,
                j.dup_total
            )
        })
        .collect();
    write_atomic(&dir.join(JOURNALS_TSV), lines(journals).as_bytes())?;

    let mut pairs = Vec::new();
    for (j, cited) in &agg.journal_cited {
        for (c, p) in cited {
            pairs.push(format!("{}\t{}\t{}\t{}", clean(j), clean(c), p.refs, p.dups));
        }
    }
    write_atomic(&dir.join(JOURNAL_CITED_TSV), lines(pairs).as_bytes())?;

    let authors = agg
        .authors
        .iter()
        .map(|(d, names)| {
            let mut row = clean(d);
            for n in names {
                row.push('\t');
                row.push_str(&clean(n));
            }
            row
        })
        .collect();
    write_atomic(&dir.join(AUTHORS_TSV), lines(authors).as_bytes())?;
    Ok(())
}

fn bad(file: &str, line: usize, what: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("{file}:{line}: {what}"))
}

fn read_rows(dir: &Path, file: &str, min_fields: usize) -> io::Result<Vec<(usize, Vec<String>)>> {
    let path = dir.join(file);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(String::from).collect();
        if fields.len() < min_fields {
            return Err(bad(file, i + 1, "too few fields"));
        }
        rows.push((i + 1, fields));
    }
    Ok(rows)
}

fn num(file: &str, line: usize, s: &str) -> io::Result<u64> {
    s.parse().map_err(|_| bad(file, line, &format!("not a count: {s:?}")))
}

/// Read aggregates written by [`persist`]. Missing files read as empty.
pub fn load(dir: &Path) -> io::Result<DupAggregates> {
    if !dir.is_dir() {
        return Err(io::Error::new(io::ErrorKind::NotFound, format!("{} is not a directory", dir.display())));
    }
    let mut agg = DupAggregates::new();
    for (line, f) in read_rows(dir, SUMMARY_TSV, 2)? {
        let v = num(SUMMARY_TSV, line, &f[1])?;
        let s = &mut agg.summary;
        match f[0].as_str() {
            "distinct" => s.distinct = v,
            "duplicated" => s.duplicated = v,
            "entries" => s.entries = v,
            "entries_without_doi" => s.entries_without_doi = v,
            "excluded_records" => s.excluded_records = v,
            "records" => s.records = v,
            "surplus" => s.surplus = v,
            other => return Err(bad(SUMMARY_TSV, line, &format!("unknown counter {other:?}"))),
        }
    }
    for (line, f) in read_rows(dir, DOCS_TSV, 3)? {
        let d = DupDocStats {
            doi: f[0].clone(),
            nbrefdup_plus: num(DOCS_TSV, line, &f[1])?,
            nbrefdup: num(DOCS_TSV, line, &f[2])?,
        };
        agg.docs.insert(f[0].clone(), d);
    }
    for (line, f) in read_rows(dir, BENEF_TSV, 3)? {
        let b = BenefStats {
            benef_plus: num(BENEF_TSV, line, &f[1])?,
            benef: num(BENEF_TSV, line, &f[2])?,
        };
        agg.benef.insert(f[0].clone(), b);
    }
    for (line, f) in read_rows(dir, JOURNALS_TSV, 6)? {
        let j = JournalStats {
            title: f[1].clone(),
            jourdup_plus: num(JOURNALS_TSV, line, &f[2])?,
            jourdup: num(JOURNALS_TSV, line, &f[3])?,
            ref_total: num(JOURNALS_TSV, line, &f[4])?,
            dup_total: num(JOURNALS_TSV, line, &f[5])?,
        };
        agg.journals.insert(f[0].clone(), j);
    }
    for (line, f) in read_rows(dir, JOURNAL_CITED_TSV, 4)? {
        let p = PairCounts {
            refs: num(JOURNAL_CITED_TSV, line, &f[2])?,
            dups: num(JOURNAL_CITED_TSV, line, &f[3])?,
        };
        agg.journal_cited.entry(f[0].clone()).or_default().insert(f[1].clone(), p);
    }
    for (_, f) in read_rows(dir, AUTHORS_TSV, 1)? {
        let names: BTreeSet<String> = f[1..].iter().cloned().collect();
        agg.authors.insert(f[0].clone(), names);
    }
    Ok(agg)
}

pub const LEADERBOARD_BENEF: &str = "leaderboard_benef.csv";
pub const LEADERBOARD_DOCS: &str = "leaderboard_docs.csv";
pub const LEADERBOARD_JOURNALS: &str = "leaderboard_journals.csv";
pub const LEADERBOARD_AUTHORS: &str = "leaderboard_authors.csv";

/// The four top-`k` tables. The untitled-document bucket is left out of
/// the journal and author boards.
pub fn write_leaderboards(agg: &DupAggregates, dir: &Path, k: usize, min_dup_refs: u64) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;

    let mut out = String::from("cited_doi,benef_plus,benef\n");
    let rows = top_k(agg.benef.iter().map(|(d, b)| (d.as_str(), (b.benef_plus, b.benef))), k);
    for (d, (plus, n)) in rows {
        let _ = writeln!(out, "{},{plus},{n}", csv_field(d));
    }
    write_atomic(&dir.join(LEADERBOARD_BENEF), out.as_bytes())?;

    let mut out = String::from("citing_doi,nbrefdup_plus,nbrefdup\n");
    let rows = top_k(agg.docs.values().map(|d| (d.doi.as_str(), (d.nbrefdup_plus, d.nbrefdup))), k);
    for (d, (plus, n)) in rows {
        let _ = writeln!(out, "{},{plus},{n}", csv_field(d));
    }
    write_atomic(&dir.join(LEADERBOARD_DOCS), out.as_bytes())?;

    let mut out = String::from("journal,jourdup_plus,jourdup,ratio\n");
    let rows = top_k(
        agg.journals
            .iter()
            .filter(|(key, j)| key.as_str() != NO_JOURNAL && j.jourdup > 0)
            .map(|(key, j)| ((j.title.as_str(), key.as_str()), (j.jourdup_plus, j.jourdup))),
        k,
    );
    for ((title, _), (plus, n)) in rows {
        let _ = writeln!(out, "{},{plus},{n},{:.1}", csv_field(title), plus as f64 / n as f64);
    }
    write_atomic(&dir.join(LEADERBOARD_JOURNALS), out.as_bytes())?;

    let mut out = String::from("journal,author,dup_to_author,dup_total,ref_to_author,ref_total,score\n");
    for s in score_author_journal(agg, min_dup_refs)
        .into_iter()
        .filter(|s| s.journal != NO_JOURNAL)
        .take(k)
    {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.1}",
            csv_field(&s.journal),
            csv_field(&s.author),
            s.dup_to_author,
            s.dup_total,
            s.ref_to_author,
            s.ref_total,
            s.s1
        );
    }
    write_atomic(&dir.join(LEADERBOARD_AUTHORS), out.as_bytes())?;
    Ok(())
}
