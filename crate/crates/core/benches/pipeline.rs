use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use roughlogo::eval::build_table;
use roughlogo::matcher::Retriever;
use roughlogo::synth::generate_corpus;
use roughlogo::{Exec, Grid, MatchWeights};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn extraction(c: &mut Criterion) {
    let corpus = generate_corpus(100, 1, Grid::default()).unwrap();
    let mut group = c.benchmark_group("build_table_100");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_table(black_box(&corpus), Grid::default(), exec))
        });
    }
    group.finish();
}

fn retrieval(c: &mut Criterion) {
    let corpus = generate_corpus(1000, 1, Grid::default()).unwrap();
    let (table, _) = build_table(&corpus, Grid::default(), Exec::default());
    let queries: Vec<_> = table.entries.iter().step_by(50).cloned().collect();
    let mut group = c.benchmark_group("query_20_of_1000");
    for (name, exec) in STRATEGIES {
        let ret = Retriever::new(&table, MatchWeights::default(), Grid::default())
            .unwrap()
            .with_exec(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for q in &queries {
                    black_box(ret.query_features(q, 5).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, extraction, retrieval);
criterion_main!(benches);
