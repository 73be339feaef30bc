use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rode_bench::{planted, q, schwarzschild, scalar_operator, simple_source, system_operator};
use rode_core::ratsolve::solve_rational;
use rode_core::reggewheeler::{regge_wheeler, rw_char_matrices, rw_decoupling_system, rw_reduce};
use rode_core::Multipliers;

fn algebra(c: &mut Criterion) {
    let e = scalar_operator();
    let d2 = regge_wheeler(&q(2), &schwarzschild(2)).unwrap();
    c.bench_function("compose/scalar", |b| b.iter(|| black_box(&e).compose(black_box(&d2)).unwrap()));
    let f = e.compose(&d2).unwrap().compose(&e).unwrap();
    c.bench_function("right_divide/order6_by_2", |b| b.iter(|| black_box(&f).right_divide(black_box(&d2)).unwrap()));
}

fn solving(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_rational");
    for (name, e) in [("scalar", scalar_operator()), ("system", system_operator())] {
        let (_, v) = planted(&e);
        group.bench_with_input(BenchmarkId::from_parameter(name), &(e, v), |b, (e, v)| {
            b.iter(|| solve_rational(e, v, &Multipliers::default()).unwrap())
        });
    }
    group.finish();
}

fn regge_wheeler_reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("rw");
    for l in [1u32, 3, 6] {
        let p = schwarzschild(l);
        let delta = simple_source(&p);
        group.bench_with_input(BenchmarkId::new("reduce_0_1", l), &l, |b, _| {
            b.iter(|| rw_reduce(&delta, &q(0), &q(1), &p).unwrap())
        });
    }
    let p = schwarzschild(2);
    group.bench_function("system_2_3", |b| b.iter(|| rw_decoupling_system(&q(2), &q(3), &p).unwrap()));
    group.bench_function("char_matrices_2_3", |b| b.iter(|| rw_char_matrices(&q(2), &q(3), &p).unwrap()));
    group.finish();
}

criterion_group!(benches, algebra, solving, regge_wheeler_reduction);
criterion_main!(benches);
