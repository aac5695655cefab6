//! Serial against parallel trial execution.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rlds::analysis::{
    montecarlo_convergence, run_benchmark, BenchmarkOptions, ConvergenceOptions, ConvergenceParams,
    ExecutionMode, GoalSampler,
};
use rlds::domain_io::bundled_kitchen;

const MODES: [ExecutionMode; 2] = [ExecutionMode::Serial, ExecutionMode::Parallel];

fn convergence(c: &mut Criterion) {
    let params = ConvergenceParams::new(5, 0.9).unwrap();
    let mut group = c.benchmark_group("montecarlo_2000");
    for mode in MODES {
        let mut options = ConvergenceOptions::new(2000, 1);
        options.mode = mode;
        group.bench_with_input(
            BenchmarkId::from_parameter(mode.as_str()),
            &options,
            |b, o| b.iter(|| montecarlo_convergence(&params, o).unwrap()),
        );
    }
    group.finish();
}

fn kitchen(c: &mut Criterion) {
    let file = bundled_kitchen();
    let sampler = GoalSampler::all(&file);
    let mut group = c.benchmark_group("kitchen_bench_10");
    group.sample_size(10);
    for mode in MODES {
        let mut options = BenchmarkOptions::new(10, 1);
        options.mode = mode;
        group.bench_with_input(
            BenchmarkId::from_parameter(mode.as_str()),
            &options,
            |b, o| b.iter(|| run_benchmark(&file, &sampler, o).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, convergence, kitchen);
criterion_main!(benches);
