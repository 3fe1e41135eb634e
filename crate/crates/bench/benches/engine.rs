use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kuranishi_bench::{bracket_pair, torus_cocycle};
use kuranishi_core::calculus::bracket;
use kuranishi_core::fuzz::{fuzz_identities, FuzzBounds, Mutation};
use kuranishi_core::kuranishi::mc_solve;

fn solve(c: &mut Criterion) {
    let xi1 = torus_cocycle(2, 5, 11);
    c.bench_function("mc_solve T2 order 5", |b| b.iter(|| mc_solve(black_box(&xi1)).unwrap()));
}

fn brackets(c: &mut Criterion) {
    let (x, y) = bracket_pair(3, 4, 5);
    c.bench_function("bracket T3 order 4", |b| b.iter(|| bracket(black_box(&x), black_box(&y))));
}

fn identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("identities");
    group.sample_size(10);
    group.bench_function("fuzz 4 cases", |b| {
        b.iter(|| fuzz_identities(black_box(1), 4, FuzzBounds::default(), Mutation::None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, solve, brackets, identities);
criterion_main!(benches);
