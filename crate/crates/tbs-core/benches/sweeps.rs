//! Criterion benches comparing the worker-pool scan path against the
//! sequential one, plus the degenerate-quotient prime scan in both modes.
//!
//! With the default `parallel` feature, `workers = 0` uses a rayon pool
//! sized to the machine and `workers = 1` forces the plain loop; without
//! the feature both configurations run sequentially, which makes the same
//! bench suite double as a fallback-cost measurement.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tbs_core::fermat;
use tbs_core::scan::{scan_pairs, scan_triples, ExponentSet, ScanConfig};

fn pair_cfg(workers: usize) -> ScanConfig {
    ScanConfig {
        a_range: (1, 60),
        b_range: (1, 60),
        exponents: ExponentSet::List(vec![3, 5, 7, 11]),
        workers,
        ..ScanConfig::default()
    }
}

fn bench_scan_pairs(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_pairs_60x60_n4");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| scan_pairs(black_box(&pair_cfg(1))).unwrap().summary)
    });
    group.bench_function("pool", |b| {
        b.iter(|| scan_pairs(black_box(&pair_cfg(0))).unwrap().summary)
    });
    group.finish();
}

fn triple_cfg(workers: usize) -> ScanConfig {
    ScanConfig {
        a_range: (1, 16),
        b_range: (1, 16),
        c_range: Some((1, 16)),
        exponents: ExponentSet::List(vec![3, 5]),
        workers,
        ..ScanConfig::default()
    }
}

fn bench_scan_triples(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_triples_16x16x16_n2");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| scan_triples(black_box(&triple_cfg(1))).unwrap().summary)
    });
    group.bench_function("pool", |b| {
        b.iter(|| scan_triples(black_box(&triple_cfg(0))).unwrap().summary)
    });
    group.finish();
}

fn bench_wieferich(c: &mut Criterion) {
    let mut group = c.benchmark_group("wieferich_base2_to_50k");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| fermat::wieferich_scan_seq(black_box(2), 50_000, 2))
    });
    group.bench_function("pool", |b| {
        b.iter(|| fermat::wieferich_scan(black_box(2), 50_000, 2))
    });
    group.finish();
}

criterion_group!(benches, bench_scan_pairs, bench_scan_triples, bench_wieferich);
criterion_main!(benches);
