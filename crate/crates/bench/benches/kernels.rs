use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use vdkernel::kernels1d::{first_passage_density, reflected_kernel};
use vdkernel::kernel;
use vdkernel_bench::{case_pairs, params, quad, TIMES};

fn kernel_cases(c: &mut Criterion) {
    let (p, q) = (params(), quad());
    let mut group = c.benchmark_group("kernel");
    for (label, x, y) in case_pairs() {
        for t in TIMES {
            group.bench_with_input(BenchmarkId::new(label, t), &t, |b, &t| {
                b.iter(|| kernel(black_box(t), &x, &y, &p, &q).unwrap())
            });
        }
    }
    group.finish();
}

fn one_dimensional(c: &mut Criterion) {
    let (p, q) = (params(), quad());
    c.bench_function("reflected_kernel t=0.05", |b| {
        b.iter(|| reflected_kernel(black_box(0.05), 0.4, 1.3, &p, &q).unwrap())
    });
    c.bench_function("first_passage_density", |b| b.iter(|| first_passage_density(black_box(0.7), 1.0, &p).unwrap()));
}

criterion_group!(benches, kernel_cases, one_dimensional);
criterion_main!(benches);
