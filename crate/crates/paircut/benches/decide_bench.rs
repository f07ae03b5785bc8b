use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use paircut::generate::{generate, GenSpec};
use paircut::solvability::{decide, decide_batch, decide_batch_seq};

fn bench_decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    for &(nodes, edges) in &[(50usize, 150usize), (200, 800), (1000, 4000)] {
        let inst = generate(&GenSpec::new(nodes, edges, 11)).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{nodes}n-{edges}e")),
            &inst,
            |b, inst| b.iter(|| decide(inst)),
        );
    }
    group.finish();
}

fn bench_batch(c: &mut Criterion) {
    let insts: Vec<_> = (0..64)
        .map(|seed| generate(&GenSpec::new(40, 120, seed)).unwrap())
        .collect();
    let mut group = c.benchmark_group("decide_batch");
    group.throughput(Throughput::Elements(insts.len() as u64));
    group.bench_function("parallel", |b| b.iter(|| decide_batch(&insts)));
    group.bench_function("sequential", |b| b.iter(|| decide_batch_seq(&insts)));
    group.finish();
}

criterion_group!(benches, bench_decide, bench_batch);
criterion_main!(benches);
