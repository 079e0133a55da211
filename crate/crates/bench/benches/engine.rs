use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qobdd_bench::{inner_product, refuted};
use qobdd_core::obdd::{BinOp, Manager, VarOrder};
use qobdd_core::pcnf::Family;
use qobdd_core::proof::{check_trace, CheckOptions};
use qobdd_core::rectangles::{matching_graph, max_mono_rectangle, pair_partition, TruthTable};
use qobdd_core::solver::{solve, SolveOptions};
use qobdd_core::strategy::{extract, verify_winning, VerifyOptions};

fn apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply");
    for n in [8u32, 16, 32] {
        group.bench_with_input(BenchmarkId::new("inner_product", n), &n, |b, &n| {
            b.iter(|| inner_product(black_box(n)))
        });
    }
    group.bench_function("xor_chain_64", |b| {
        b.iter(|| {
            let mut mgr = Manager::new(VarOrder::new((1..=64).collect()).unwrap());
            let mut acc = mgr.zero();
            for v in 1..=64 {
                let x = mgr.mk_var(v).unwrap();
                acc = mgr.apply(BinOp::XOR, acc, x).unwrap();
            }
            black_box(acc)
        })
    });
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for family in [Family::EqPrime, Family::QuParity] {
        for n in [8, 16, 32] {
            let f = family.generate(n).unwrap();
            let order = family.decomposition(n).order();
            group.bench_with_input(BenchmarkId::new(family.name(), n), &n, |b, _| {
                b.iter(|| solve(&f, &order, &SolveOptions::default()).unwrap())
            });
        }
    }
    group.finish();
}

fn checker(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    for family in [Family::EqPrime, Family::QuParity] {
        let (f, t) = refuted(family, 16);
        group.bench_function(family.name(), |b| {
            b.iter(|| check_trace(&f, &t, &CheckOptions::default()))
        });
    }
    group.finish();
}

fn strategy(c: &mut Criterion) {
    let (f, t) = refuted(Family::EqPrime, 8);
    c.bench_function("extract_eqprime_8", |b| {
        b.iter(|| extract(&f, &t, &CheckOptions::default()).unwrap())
    });
    let fam = extract(&f, &t, &CheckOptions::default()).unwrap();
    c.bench_function("verify_eqprime_8", |b| {
        b.iter(|| verify_winning(&f, &fam, &VerifyOptions::default()).unwrap())
    });
}

fn rectangles(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_mono_rectangle");
    for n in [3, 4, 5] {
        let g = matching_graph(n);
        let tt = TruthTable::ipg(&g, &pair_partition(&g)).unwrap();
        group.bench_with_input(BenchmarkId::new("inner_product", n), &tt, |b, tt| {
            b.iter(|| max_mono_rectangle(tt))
        });
    }
    group.finish();
}

criterion_group!(benches, apply, solver, checker, strategy, rectangles);
criterion_main!(benches);
