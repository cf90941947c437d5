//! Data-parallel kernels timed on a one-thread pool and on the default pool.
//! Without the `parallel` feature only the sequential fallback is timed.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cell24_core::constructions::{automorphisms, d4};
use cell24_core::dynamics::{basin_experiment, DescentOptions};
use cell24_core::energy::{hex_family_grid_min, scan_theta};
use cell24_core::exact::proposition_table;
use cell24_core::Potential;

type Kernel = (&'static str, fn());

fn kernels() -> Vec<Kernel> {
    vec![
        ("scan_theta", || {
            scan_theta(&Potential::PowPlus(8), 10_000, 1e-9).unwrap();
        }),
        ("hex_grid", || {
            hex_family_grid_min(&Potential::PowPlus(8), 20, 1e-9).unwrap();
        }),
        ("basin_16", || {
            basin_experiment(&Potential::Riesz(1.0), 16, 1, &DescentOptions::default()).unwrap();
        }),
        ("proposition_0_12", || {
            proposition_table(0, 12).unwrap();
        }),
        ("automorphisms", || {
            automorphisms(&d4()).unwrap();
        }),
    ]
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    let n = default.current_num_threads();
    vec![
        (
            "threads_1".to_string(),
            rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap(),
        ),
        (format!("default_{n}"), default),
    ]
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let pools = pools();
    for (name, run) in kernels() {
        let mut g = c.benchmark_group(name);
        g.sample_size(10);
        for (label, pool) in &pools {
            g.bench_function(BenchmarkId::from_parameter(label), |b| {
                b.iter(|| pool.install(run))
            });
        }
        g.finish();
    }
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    for (name, run) in kernels() {
        let mut g = c.benchmark_group(name);
        g.sample_size(10);
        g.bench_function(BenchmarkId::from_parameter("sequential"), |b| b.iter(run));
        g.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
