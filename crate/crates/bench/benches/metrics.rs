use std::hint::black_box;
use std::sync::Arc;

use amreval::embeddings::EmbeddingStore;
use amreval::metrics::{MetricConfig, MetricId, Scorer};
use amreval::stats::{bootstrap_ci, EvalCorpus, ScoreTable};
use amreval::synth::{synthetic_corpus, GraphShape};
use amreval::transport::{solve_exact, TransportProblem};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shape() -> GraphShape {
    GraphShape {
        min_nodes: 8,
        max_nodes: 20,
        reentrancy: 0.1,
        attribute: 0.2,
        oov: 0.1,
    }
}

fn per_metric(c: &mut Criterion) {
    let items = synthetic_corpus(1, 20, &shape(), 0.25, 0.25);
    let scorer = Scorer::new(MetricConfig::default(), Arc::new(EmbeddingStore::fallback()));
    let mut group = c.benchmark_group("pair");
    for m in MetricId::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| {
                for it in &items {
                    black_box(scorer.score(m, &it.a.graph, &it.gold.graph));
                }
            })
        });
    }
    group.finish();
}

fn corpus_table(c: &mut Criterion) {
    let items = synthetic_corpus(2, 200, &shape(), 0.25, 0.25);
    let gold = items.iter().map(|i| i.gold.clone()).collect();
    let a = items.iter().map(|i| i.a.clone()).collect();
    let corpus = EvalCorpus::align(gold, vec![("a".into(), a)]).unwrap().0;
    let scorer = Scorer::new(MetricConfig::default(), Arc::new(EmbeddingStore::fallback()));
    let parsers = vec!["a".to_string()];
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    group.bench_function("200 pairs x all metrics", |b| {
        b.iter(|| ScoreTable::build(&corpus, &scorer, &MetricId::ALL, &parsers).unwrap())
    });
    group.finish();
}

fn transport(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut group = c.benchmark_group("transport");
    for n in [8usize, 32, 64] {
        let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let p = TransportProblem::new(cost, vec![1.0 / n as f64; n], vec![1.0 / n as f64; n]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| solve_exact(p).unwrap()));
    }
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let data: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..1.0)).collect();
    let mean = |s: &[f64]| Some(s.iter().sum::<f64>() / s.len() as f64);
    c.bench_function("bootstrap mean n=200 B=1000", |b| {
        b.iter(|| bootstrap_ci(&data, mean, 1000, 0.95, 0).unwrap())
    });
}

criterion_group!(benches, per_metric, corpus_table, transport, bootstrap);
criterion_main!(benches);
