use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wcrte_bench::exponential_sample;
use wcrte_core::estimators::{self, EstimatorKind};
use wcrte_core::{EstimatorSpec, Measure, TsallisOrder};

fn estimators(c: &mut Criterion) {
    let alpha = Measure::Wcrte(TsallisOrder::new(2.0).unwrap());
    let mut group = c.benchmark_group("wcrte");
    for n in [30, 1000, 100_000] {
        let sample = exponential_sample(n, 1);
        for kind in EstimatorKind::ALL {
            let window = kind.uses_window().then(|| (n / 3).max(1));
            let spec = EstimatorSpec::new(kind, alpha, window).unwrap();
            group.bench_with_input(BenchmarkId::new(kind.label(), n), &sample, |b, s| {
                b.iter(|| spec.estimate(black_box(s)).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("variance");
    for n in [100, 10_000] {
        let sample = exponential_sample(n, 2);
        let order = TsallisOrder::new(2.0).unwrap();
        group.bench_with_input(BenchmarkId::new("wcrte_lstat", n), &sample, |b, s| {
            b.iter(|| estimators::wcrte_lstat_variance(black_box(s), order).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, estimators);
criterion_main!(benches);
