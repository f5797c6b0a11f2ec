use casimir_core::dispersion::DispersionModel;
use casimir_core::thermal::{free_energy, Config, Executor, SummationPolicy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn executors(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_energy");
    group.sample_size(10);
    let model = DispersionModel::ConstantIndex { n: 1.5 };
    for (d, t) in [(0.2, 1.0), (0.1, 0.1)] {
        let config = Config::from_gap(d, t, model).unwrap();
        for (name, executor) in [
            ("sequential", Executor::Sequential),
            ("parallel", Executor::Parallel { threads: 0 }),
        ] {
            let policy = SummationPolicy {
                executor,
                ..Default::default()
            };
            group.bench_with_input(
                BenchmarkId::new(name, format!("d{d}_t{t}")),
                &config,
                |b, cfg| b.iter(|| free_energy(black_box(cfg), &policy).unwrap()),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, executors);
criterion_main!(benches);
