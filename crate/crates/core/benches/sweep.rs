//! Sequential vs rayon map over a single-site distance sweep.
//!
//! `cargo bench --bench sweep`; with `--no-default-features` only the
//! sequential variant is built.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use leakywire::exec;
use leakywire::spectrum2d::find_eigenvalues;
use leakywire::SystemSpec;

fn grid() -> Vec<f64> {
    (0..32).map(|i| 0.25 * 1.15f64.powi(i)).collect()
}

fn solve(a: &f64) -> f64 {
    let spec = SystemSpec::single_2d(2.0, 0.0, *a).expect("valid system");
    find_eigenvalues(&spec, 1e-10).expect("root").roots[0].kappa
}

fn bench(c: &mut Criterion) {
    let a = grid();
    let mut g = c.benchmark_group("a-sweep, 32 points");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| exec::map_sequential(black_box(&a), solve)));
    #[cfg(feature = "parallel")]
    g.bench_function("rayon", |b| b.iter(|| exec::map_parallel(black_box(&a), solve)));
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
