use std::hint::black_box;

use arrovian::arrow_search::search_arrovian;
use arrovian::filters::enumerate_filters;
use arrovian::ks_bridge::extract_decisive_family;
use arrovian::relations::enumerate_weak_orders;
use arrovian::swf::{check_independence, full_report};
use arrovian::Domain;
use arrovian_bench::{borda_on_weak_domain, dictator_on_weak_domain};
use criterion::{criterion_group, criterion_main, Criterion};

fn enumeration(c: &mut Criterion) {
    c.bench_function("weak orders m=5", |b| b.iter(|| enumerate_weak_orders(black_box(5)).unwrap()));
    c.bench_function("filter scan n=4", |b| b.iter(|| enumerate_filters(black_box(4)).unwrap()));
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("arrow search");
    g.sample_size(20);
    g.bench_function("linear n=2", |b| b.iter(|| search_arrovian(3, black_box(2), Domain::Linear).unwrap()));
    g.bench_function("weak n=2", |b| b.iter(|| search_arrovian(3, black_box(2), Domain::Weak).unwrap()));
    g.finish();
}

fn checks(c: &mut Criterion) {
    let d = dictator_on_weak_domain();
    let borda = borda_on_weak_domain();
    let mut g = c.benchmark_group("weak domain m=3 n=3");
    g.sample_size(20);
    g.bench_function("independence, dictator", |b| b.iter(|| check_independence(black_box(&d))));
    g.bench_function("independence, borda", |b| b.iter(|| check_independence(black_box(&borda))));
    g.bench_function("full report, dictator", |b| b.iter(|| full_report(black_box(&d))));
    g.bench_function("decisive family, dictator", |b| b.iter(|| extract_decisive_family(black_box(&d)).unwrap()));
    g.finish();
}

criterion_group!(benches, enumeration, search, checks);
criterion_main!(benches);
