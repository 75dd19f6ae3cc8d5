use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use cuspcount::blowup::cremona_reduce;
use cuspcount::cusp::chain_classes;
use cuspcount::f1::enumerate_perf;
use cuspcount::spectrum::{delta_path, spectrum};
use cuspcount_bench::{cremona_input, three_axis_shape};

fn bench_spectrum(c: &mut Criterion) {
    let a = three_axis_shape();
    c.bench_function("spectrum 500", |b| {
        b.iter(|| spectrum(black_box(&a), 500).unwrap())
    });
    c.bench_function("delta_path k=60", |b| {
        b.iter(|| delta_path(black_box(&a), 60).unwrap())
    });
}

fn bench_resolution(c: &mut Criterion) {
    c.bench_function("chain_classes (233, 89)", |b| {
        b.iter(|| chain_classes(black_box(233), black_box(89)).unwrap())
    });
    let class = cremona_input();
    c.bench_function("cremona (11, 2) transform", |b| {
        b.iter(|| cremona_reduce(black_box(&class)).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_perf");
    group.sample_size(10);
    group.bench_function("max_p 200", |b| {
        b.iter(|| enumerate_perf(black_box(200)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_spectrum, bench_resolution, bench_enumeration);
criterion_main!(benches);
