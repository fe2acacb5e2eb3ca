//! Benchmarks for the hot paths: the sign-assignment slice scan (naive vs
//! symmetry-reduced vs propagation), line enumeration with its brute-force
//! oracle, and GF(2) reduction of the full torsion system.

use amsolid_core::amcycles::build_am_relation_system;
use amsolid_core::dp2;
use amsolid_core::signlemma::{verify_lemma, Strategy};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn sign_lemma_slice(c: &mut Criterion) {
    let mut group = c.benchmark_group("sign-lemma-slice-m4");
    group.sample_size(10);
    for (name, strategy) in [
        ("naive", Strategy::Naive),
        ("reduced", Strategy::SymmetryReduced),
        ("propagation", Strategy::Propagation),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| verify_lemma(black_box(strategy), 1, Some(4)).unwrap())
        });
    }
    group.finish();
}

fn line_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate-lines-with-oracle", |b| {
        b.iter(|| dp2::enumerate_lines().unwrap())
    });
    c.bench_function("brute-force-line-search", |b| {
        b.iter(|| dp2::line_classes_brute_force(black_box(7)))
    });
}

fn gf2_solve(c: &mut Criterion) {
    let system = build_am_relation_system();
    c.bench_function("torsion-system-solve", |b| {
        b.iter(|| system.solve().unwrap())
    });
}

criterion_group!(benches, sign_lemma_slice, line_enumeration, gf2_solve);
criterion_main!(benches);
