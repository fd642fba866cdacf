//! Parallel vs sequential on the three data-parallel hot paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use misfact::roots::{find_roots_with, FamilyTarget};
use misfact::render::render_with;
use misfact::{points_of_order, Exec, FactorEngine, PlotSpec};
use num_complex::Complex64;

const MODES: [Exec; 2] = [Exec::Parallel, Exec::Sequential];

fn roots(c: &mut Criterion) {
    let e = FactorEngine::default();
    let h = e.gleason(10).unwrap();
    let mut g = c.benchmark_group("roots_h10");
    g.sample_size(10);
    for exec in MODES {
        g.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| {
            b.iter(|| find_roots_with(&FamilyTarget::gleason(10, h.clone()), 128, exec).unwrap())
        });
    }
    g.finish();
}

fn plot(c: &mut Criterion) {
    let e = FactorEngine::default();
    let mut spec = PlotSpec::new(Complex64::new(-0.75, 0.0), 3.0, (400, 300), 256);
    spec.overlay = points_of_order(&e, 6, 128, Exec::Parallel).unwrap();
    let mut g = c.benchmark_group("render_400x300");
    g.sample_size(10);
    for exec in MODES {
        g.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| b.iter(|| render_with(&spec, exec).unwrap()));
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_sweep_10");
    g.sample_size(10);
    for exec in MODES {
        // fresh engine each time so the memo tables don't turn it into a lookup
        g.bench_function(BenchmarkId::from_parameter(format!("{exec:?}")), |b| {
            b.iter(|| FactorEngine::default().verify_sweep(10, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, roots, plot, sweep);
criterion_main!(benches);
