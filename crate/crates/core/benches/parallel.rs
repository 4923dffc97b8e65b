use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cpld_core::constants::sweep;
use cpld_core::jab::{minimize_jab, MinimizeOptions};
use cpld_core::Execution;

fn options(exec: Execution) -> MinimizeOptions {
    MinimizeOptions {
        grid_points: 64,
        exec,
        ..Default::default()
    }
}

fn bench_minimize(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize_jab");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), "n3_R1.1"), &exec, |b, &exec| {
            b.iter(|| minimize_jab(3, 1.1, &options(exec)).unwrap())
        });
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), "n2-3_8steps"), &exec, |b, &exec| {
            b.iter(|| sweep(&[2, 3], 0.5, 2.5, 8, &options(exec)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_minimize, bench_sweep);
criterion_main!(benches);
