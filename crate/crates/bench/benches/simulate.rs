use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use vdkernel::simulate::sample_first_passage;
use vdkernel::{simulate, Scheme};
use vdkernel_bench::{params, plan};

const PATHS: usize = 200;

fn schemes(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for (name, scheme) in [("signed", Scheme::Signed), ("reflected", Scheme::Reflected), ("full", Scheme::FullSkewProduct)] {
        let plan = plan(scheme, PATHS);
        group.throughput(Throughput::Elements((PATHS * plan.n_steps()) as u64));
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| simulate(&plan, &p).unwrap()));
    }
    group.finish();
}

fn first_passage(c: &mut Criterion) {
    let p = params();
    c.bench_function("sample_first_passage 10k", |b| b.iter(|| sample_first_passage(1.0, &p, 10_000, 5).unwrap()));
}

criterion_group!(benches, schemes, first_passage);
criterion_main!(benches);
