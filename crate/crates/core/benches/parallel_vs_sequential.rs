use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dgsmooth::algebra::QuotientRing;
use dgsmooth::module::{DegreeWindow, GradedModulePresentation};
use dgsmooth::par::Execution;
use dgsmooth::poly::GradedPolyRing;
use dgsmooth::resolution;
use dgsmooth::weyl::{invariant_dims_oracle_with, simple_reflections, RootType};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Auto), ("sequential", Execution::Sequential)];

fn invariants(c: &mut Criterion) {
    let mut group = c.benchmark_group("weyl_invariants_B3_deg16");
    let gens = simple_reflections(RootType::B, 3);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| invariant_dims_oracle_with(exec, 3, black_box(&gens), 16))
        });
    }
    group.finish();
}

fn resolutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolve_residue_field_Qxyz");
    group.sample_size(10);
    let ring = GradedPolyRing::new([("x", 2), ("y", 2), ("z", 4)]).unwrap();
    let polys = ["x", "y", "z"].map(|v| ring.parse(v).unwrap()).to_vec();
    let module = GradedModulePresentation::cyclic(ring.clone(), polys).unwrap();
    let k = QuotientRing::polynomial(ring);
    let window = DegreeWindow::new(0, 24).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| resolution::resolve_with(exec, &k, black_box(&module), 4, window).derived_fiber())
        });
    }
    group.finish();
}

criterion_group!(benches, invariants, resolutions);
criterion_main!(benches);
