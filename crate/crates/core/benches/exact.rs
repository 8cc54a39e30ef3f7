use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permstat::algebra::{rank_bareiss, rank_modular, Assignment, Matrix, Rational, VarId};
use permstat::config::DEFAULT_SEEDS;
use permstat::groupalg::element_of;
use permstat::par::with_threads;
use permstat::spectra::{certify, predicted_spectrum, MatrixKind};
use permstat::stats::StatKind;

fn thread_counts() -> [(&'static str, usize); 2] {
    let all = std::thread::available_parallelism().map_or(1, |p| p.get());
    [("sequential", 1), ("parallel", all)]
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (kind, n) in [(MatrixKind::IF, 5), (MatrixKind::SpechtIF, 7)] {
        let spec = predicted_spectrum(kind, n).unwrap();
        for (label, threads) in thread_counts() {
            group.bench_with_input(BenchmarkId::new(label, format!("{kind}{n}")), &spec, |b, spec| {
                b.iter(|| with_threads(threads, || certify(black_box(spec), &DEFAULT_SEEDS).unwrap()))
            });
        }
    }
    group.finish();
}

fn regular_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("regular_matrix");
    group.sample_size(10);
    let a = Assignment::from_pairs([(VarId::Z, Rational::from_int(3))], 0);
    let e = element_of(StatKind::FixZ, 6).unwrap().specialize(&a).unwrap();
    for (label, threads) in thread_counts() {
        group.bench_function(BenchmarkId::new(label, "F6"), |b| {
            b.iter(|| with_threads(threads, || black_box(&e).regular_matrix().unwrap()))
        });
    }
    group.finish();
}

fn rank_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    let a = Assignment::from_pairs([(VarId::Z, Rational::from_int(777))], 0);
    let m: Matrix<Rational> = element_of(StatKind::FixZ, 5).unwrap().specialize(&a).unwrap().regular_matrix().unwrap();
    // 30z is the middle eigenvalue of F(5); the shifted matrix is singular.
    let shifted = m.shift_diagonal(&Rational::from_int(30 * 777)).unwrap();
    group.bench_function("bareiss_F5", |b| b.iter(|| rank_bareiss(black_box(&shifted))));
    group.bench_function("modular_F5", |b| b.iter(|| rank_modular(black_box(&shifted))));
    group.finish();
}

criterion_group!(benches, certification, regular_matrix, rank_routes);
criterion_main!(benches);
