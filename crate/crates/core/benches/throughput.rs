//! Throughput benchmarks: hot kernels and the parallel-vs-sequential
//! Monte Carlo engines (whose outputs are bit-identical by contract, so
//! the only difference worth measuring is speed).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use cmda_core::bessel::j0;
use cmda_core::fading::{NoiseModel, Point2D, Wavelength};
use cmda_core::pathopt::{path_cost, AnnealingConfig, PathPoints};
use cmda_core::sim::{
    monte_carlo, monte_carlo_sequential, CmdaSimulation, EnergyModel, ExperimentSpec, FieldModel,
    PathFamily,
};

const LAM: f64 = 0.1402;

fn spec(family: PathFamily) -> ExperimentSpec {
    ExperimentSpec {
        wavelength: Wavelength::new(LAM).unwrap(),
        family,
        path_length: 1.5 * LAM,
        waypoints: 25,
        annealing: AnnealingConfig {
            iterations_per_temperature: 60,
            temperature_floor: Some(1e-3),
            restarts: 2,
            ..AnnealingConfig::default()
        },
        delta: 0.05 * LAM,
        smoother_radius: 0.3828 * LAM,
        noise: NoiseModel::from_snr_db(1.0, 10.0).unwrap(),
        energy: EnergyModel::default(),
        field_model: FieldModel::Jakes,
        common_random_numbers: true,
    }
}

fn bench_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    group.bench_function("j0_series", |b| {
        b.iter(|| std::hint::black_box(j0(std::hint::black_box(4.2))))
    });
    group.bench_function("j0_asymptotic", |b| {
        b.iter(|| std::hint::black_box(j0(std::hint::black_box(47.3))))
    });

    let lam = Wavelength::new(LAM).unwrap();
    let path = PathPoints::collinear(25, 1.5 * LAM, Point2D::ORIGIN).unwrap();
    group.bench_function("path_cost_n25", |b| {
        b.iter(|| std::hint::black_box(path_cost(std::hint::black_box(&path), lam)))
    });
    group.finish();
}

fn bench_monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    let sim = CmdaSimulation::from_spec(&spec(PathFamily::Linear)).unwrap();
    for trials in [1_000u64, 10_000] {
        group.throughput(Throughput::Elements(trials));
        group.bench_with_input(BenchmarkId::new("parallel", trials), &trials, |b, &n| {
            b.iter(|| monte_carlo(|s| sim.run_trial(s), n, 42).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", trials), &trials, |b, &n| {
            b.iter(|| monte_carlo_sequential(|s| sim.run_trial(s), n, 42).unwrap())
        });
    }
    group.finish();
}

fn bench_path_design(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_design");
    group.sample_size(10);
    let s = spec(PathFamily::Mcp);
    group.bench_function("anneal_n25_2_restarts", |b| {
        b.iter(|| {
            cmda_core::pathopt::optimize_path(s.waypoints, s.path_length, s.wavelength, &s.annealing)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_kernels, bench_monte_carlo, bench_path_design);
criterion_main!(benches);
