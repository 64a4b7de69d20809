//! Sequential (one worker) against data-parallel execution of the hot paths.
//! Build with `--no-default-features` to measure the fallback without rayon.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use euler_voigt::dynamics::{nonlinear_term, voigt_rhs, VoigtParams};
use euler_voigt::harness::run_sweep_from;
use euler_voigt::integrate::{rk4_step, IntegratorConfig, RunState};
use euler_voigt::io::{generate_ic, InitialConditionSpec};
use euler_voigt::par::with_workers;
use euler_voigt::Grid;

fn worker_counts() -> Vec<usize> {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    if all > 1 { vec![1, all] } else { vec![1] }
}

fn kernels(c: &mut Criterion) {
    let g = Grid::new(32).unwrap();
    let u = generate_ic(&InitialConditionSpec::TaylorGreen, &g).unwrap();
    let p = VoigtParams::new(0.05, &g).unwrap();
    let state = RunState::new(u.clone(), &p, &g);

    let mut group = c.benchmark_group("n32");
    for w in worker_counts() {
        group.bench_with_input(BenchmarkId::new("nonlinear_term", w), &w, |b, &w| {
            with_workers(w, || b.iter(|| nonlinear_term(black_box(&u), &g).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("voigt_rhs", w), &w, |b, &w| {
            with_workers(w, || b.iter(|| voigt_rhs(black_box(&u), &p, &g).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("rk4_step", w), &w, |b, &w| {
            with_workers(w, || b.iter(|| rk4_step(black_box(&state), 1e-3, &p, &g).unwrap()))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let g = Grid::new(16).unwrap();
    let u = generate_ic(&InitialConditionSpec::TaylorGreen, &g).unwrap();
    let alphas = [0.2, 0.1, 0.05, 0.025];
    let cfg = IntegratorConfig::fixed(5e-3, 0.05);

    let mut group = c.benchmark_group("sweep_n16");
    group.sample_size(10);
    for w in worker_counts() {
        group.bench_with_input(BenchmarkId::new("four_alphas_ten_steps", w), &w, |b, &w| {
            b.iter(|| run_sweep_from(black_box(&u), &g, &alphas, &cfg, w).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernels, sweep);
criterion_main!(benches);
