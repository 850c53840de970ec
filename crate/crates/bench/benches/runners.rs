use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DVector;
use permcd::instances::make_pi;
use permcd::runners::{self, Algorithm, RunConfig, RunTarget};

fn bench_epoch(c: &mut Criterion) {
    let mut group = c.benchmark_group("rpcd_epoch");
    for n in [25usize, 100] {
        let inst = make_pi(n, 0.7).unwrap();
        let x = DVector::from_element(n, 1.0);
        let p: Vec<usize> = (0..n).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| runners::rpcd_epoch(black_box(&inst), black_box(&x), black_box(&p)).unwrap())
        });
    }
    group.finish();
}

fn bench_monte_carlo(c: &mut Criterion) {
    let inst = make_pi(25, 0.7).unwrap();
    let cfg = RunConfig { algorithm: Algorithm::Rpcd, steps: 8, trials: 10, init_points: 10, seed: 1 };
    let mut group = c.benchmark_group("run_monte_carlo");
    group.sample_size(10);
    group.bench_function("pi_n25_rpcd_8epochs_100runs", |b| {
        b.iter(|| runners::run_monte_carlo(RunTarget::Instance(black_box(&inst)), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_epoch, bench_monte_carlo);
criterion_main!(benches);
