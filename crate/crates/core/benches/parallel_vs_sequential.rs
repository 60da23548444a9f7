//! Parallel vs sequential maps over the two workloads that dominate runs:
//! per-k mode integrations and per-time covariance quadratures.
//!
//! Run with: cargo bench -p qbm-core
//! Build with --no-default-features to see the fallback, where both arms
//! are sequential.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qbm_core::bath_kernels::BathSpec;
use qbm_core::gaussian_state::{CovarianceState, SqueezeParam};
use qbm_core::oscillator_dynamics::{covariance_evolution, OscillatorSpec, QuadratureConfig};
use qbm_core::parallel;
use qbm_core::parametric_mode::{integrate_mode, log_k_grid, MassProfile, ProfileShape};

fn modes(c: &mut Criterion) {
    let profile = MassProfile {
        mass_i: 0.0,
        mass_f: 0.5,
        t_i: 0.0,
        t_f: 2.0,
        shape: ProfileShape::Tanh,
    };
    let grid = [0.0, 1.0, 2.0];
    let mut group = c.benchmark_group("mode_integration");
    group.sample_size(10);
    for n in [16usize, 64] {
        let ks = log_k_grid(0.01, 50.0, n).unwrap();
        let one = |k: &f64| integrate_mode(*k, &profile, &grid, 1e-10).unwrap().d1[2];
        group.bench_with_input(BenchmarkId::new("parallel", n), &ks, |b, ks| {
            b.iter(|| parallel::map(black_box(ks), one))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &ks, |b, ks| {
            b.iter(|| parallel::map_sequential(black_box(ks), one))
        });
    }
    group.finish();
}

fn covariances(c: &mut Criterion) {
    let spec = OscillatorSpec::from_resonance(1.0, 1.0, 0.1).unwrap();
    let bath = BathSpec::massless(0.3, Some(SqueezeParam::new(1.0, 0.0).unwrap()));
    let init = CovarianceState::new(0.5, 0.5, 0.0);
    let quad = QuadratureConfig::default();
    let times: Vec<f64> = (1..=16).map(|i| 2.5 * i as f64).collect();
    let one = |t: &f64| {
        covariance_evolution(&spec, &bath, &init, *t, &quad)
            .unwrap()
            .xx
    };
    let mut group = c.benchmark_group("covariance_times");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| parallel::map(black_box(&times), one))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| parallel::map_sequential(black_box(&times), one))
    });
    group.finish();
}

criterion_group!(benches, modes, covariances);
criterion_main!(benches);
