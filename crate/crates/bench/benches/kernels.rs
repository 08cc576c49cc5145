use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pentagon_core::partitions::{partitions_oracle_dp, partitions_recurrence};
use pentagon_core::{closed_form_series, expand_tail, partial_product, TailFamily, Variant};

fn partition_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("partitions");
    for n in [1_000usize, 5_000, 20_000] {
        group.bench_with_input(BenchmarkId::new("recurrence", n), &n, |b, &n| {
            b.iter(|| partitions_recurrence(black_box(n)))
        });
    }
    group.bench_function("dp/1000", |b| {
        b.iter(|| partitions_oracle_dp(black_box(1_000)))
    });
    group.finish();
}

fn series_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    for n in [300usize, 1_000, 2_000] {
        group.bench_with_input(BenchmarkId::new("partial_product", n), &n, |b, &n| {
            b.iter(|| partial_product(black_box(n), n))
        });
        group.bench_with_input(BenchmarkId::new("reciprocal", n), &n, |b, &n| {
            let s = closed_form_series(n);
            b.iter(|| s.reciprocal())
        });
    }
    group.finish();
}

fn tail_expansion(c: &mut Criterion) {
    let tail = TailFamily::initial(Variant::First);
    c.bench_function("expand_tail/stage1/1200", |b| {
        b.iter(|| expand_tail(black_box(&tail), 1_200))
    });
}

criterion_group!(benches, partition_tables, series_kernels, tail_expansion);
criterion_main!(benches);
