//! Sequential against rayon-parallel execution for the two hot paths: M2
//! over a batch of documents, and duplicate aggregation over a snapshot.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sneakref::detectors::{m2_detect, M2Params};
use sneakref::dupmetrics::{DupAggregates, DupConfig};
use sneakref::exec::{self, Execution};
use sneakref::ingest::{CrossrefRecord, ReferenceEntry};
use sneakref::synth::{Generator, SynthDoc};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn m2_batch(c: &mut Criterion) {
    let mut g = Generator::new(9);
    let docs: Vec<SynthDoc> = (0..16).map(|i| g.document(i % 6)).collect();
    let params = M2Params::default();
    let mut group = c.benchmark_group("m2_batch");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                // documents fan out; each document runs its needles sequentially
                exec::map(mode, &docs, |d| m2_detect(&d.record.references, &d.fulltext, &params, Execution::Sequential))
            })
        });
    }
    group.finish();
}

fn snapshot(n: usize) -> Vec<CrossrefRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..n)
        .map(|i| CrossrefRecord {
            doi: format!("10.1/w{i}"),
            prefix: "10.1".into(),
            work_type: "journal-article".into(),
            created: None,
            container_title: Some(format!("Journal {}", i % 50)),
            member_id: None,
            authors: vec![format!("Author {}", i % 300)],
            references: (0..40)
                .map(|p| ReferenceEntry {
                    key: p.to_string(),
                    doi: Some(format!("10.1/w{}", rng.gen_range(0..n))),
                    unstructured: None,
                    structured: Default::default(),
                    position: p,
                })
                .collect(),
        })
        .collect()
}

fn dup_aggregation(c: &mut Criterion) {
    let records = snapshot(20_000);
    let cfg = DupConfig::default();
    let mut group = c.benchmark_group("dup_aggregation");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                exec::fold_merge(mode, &records, DupAggregates::new, |agg, r| agg.add_record(r, &cfg), DupAggregates::merge)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, m2_batch, dup_aggregation);
criterion_main!(benches);
