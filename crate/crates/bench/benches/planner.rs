use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use replan_bench::{bench20, multi_obstacle};
use replan_core::{plan_cycle, plan_subpath, simulate_scan, AcoMode, AcoParams, PlannerKind, PlannerState};

fn subpath(c: &mut Criterion) {
    let (grid, start, goal) = bench20();
    let mut group = c.benchmark_group("plan_subpath_bench20");
    group.sample_size(10);
    for (name, params) in [
        ("improved", AcoParams::default()),
        ("improved_parallel", AcoParams { parallel: true, ..AcoParams::default() }),
        ("conventional", AcoParams::default().with_mode(AcoMode::Conventional)),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(1);
                plan_subpath(black_box(&grid), start, goal, &params, &mut rng)
            })
        });
    }
    group.finish();
}

fn cycle(c: &mut Criterion) {
    let s = multi_obstacle();
    let state = PlannerState::new(s.start);
    c.bench_function("plan_cycle_multi_obstacle", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            plan_cycle(black_box(&s.world), &state, s.goal, PlannerKind::Proposed, &s.config, &mut rng)
        })
    });
}

fn scan(c: &mut Criterion) {
    let s = multi_obstacle();
    c.bench_function("simulate_scan_360", |b| {
        b.iter(|| simulate_scan(black_box(&s.world), &s.start, s.config.lidar_radius, s.config.n_rays))
    });
}

criterion_group!(benches, subpath, cycle, scan);
criterion_main!(benches);
