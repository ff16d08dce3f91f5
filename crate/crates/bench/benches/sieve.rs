use apsieve_bench::{candidates, p3, space, steenrod_targets};
use apsieve_core::classifier::{classify_theorem_1_2, endgame_rules, proposition_lists, ClassifyOptions};
use apsieve_core::psimod::{condition_report, eliminate_by_psi, enumerate_classes};
use apsieve_core::steenrod::{normalize, PowerWord};
use apsieve_core::Window;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn valuations(c: &mut Criterion) {
    let ctx = p3();
    c.bench_function("nu 1..10000", |b| {
        b.iter(|| (1..10_000i64).map(|n| ctx.nu(black_box(n)).unwrap_finite()).sum::<u32>())
    });
    c.bench_function("pair_min_val 100x100", |b| {
        b.iter(|| {
            let mut acc = 0u32;
            for t1 in 1..=100u64 {
                for t2 in 1..=100u64 {
                    acc += ctx.pair_min_val(black_box(t1), t2).finite().unwrap_or(0);
                }
            }
            acc
        })
    });
}

fn psi(c: &mut Criterion) {
    let t = space(&[2, 21, 27]);
    let w = Window::new(21, 81).unwrap();
    c.bench_function("condition_report (2,21,27) [21,81]", |b| {
        b.iter(|| condition_report(&enumerate_classes(black_box(&t), w)).unwrap())
    });
    let types = candidates();
    c.bench_function("eliminate_by_psi candidates", |b| {
        b.iter(|| types.iter().filter(|t| eliminate_by_psi(t).is_some()).count())
    });
}

fn steenrod(c: &mut Criterion) {
    c.bench_function("normalize P^1 P^3 P^149", |b| {
        b.iter(|| normalize(black_box(&PowerWord::single(&[1, 3, 149])), 3))
    });
    let targets = steenrod_targets();
    c.bench_function("endgame rules", |b| {
        b.iter(|| targets.iter().map(|t| endgame_rules(t).unwrap().is_some() as u32).sum::<u32>())
    });
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classification");
    g.sample_size(10);
    g.bench_function("proposition_lists 60", |b| b.iter(|| proposition_lists(black_box(60)).unwrap()));
    g.bench_function("classify_theorem_1_2 60", |b| {
        b.iter(|| classify_theorem_1_2(black_box(60), ClassifyOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, valuations, psi, steenrod, classification);
criterion_main!(benches);
