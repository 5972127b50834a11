use circunit_core::congruence::{verify_main_theorem, VerifyOptions};
use circunit_core::group_ring::u_chi1;
use circunit_core::{seq_d, Level};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn main_theorem(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_main_theorem");
    g.sample_size(10);
    for n in [4u32, 5, 6, 7, 8] {
        let level = Level::new(n).unwrap();
        let opts = VerifyOptions { seed: 0, spot_checks: 200 };
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(verify_main_theorem(level, opts).unwrap()))
        });
    }
    g.finish();
}

fn trace_formula(c: &mut Criterion) {
    let mut g = c.benchmark_group("u_chi1");
    for n in [4u32, 6, 7] {
        let level = Level::new(n).unwrap();
        let beta = seq_d(level, 1).pow(1 << (n - 2));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| black_box(u_chi1(&beta).unwrap())));
    }
    g.finish();
}

criterion_group!(benches, main_theorem, trace_formula);
criterion_main!(benches);
