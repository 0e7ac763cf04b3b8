use std::hint::black_box;
use std::sync::Arc;

use cauchy_core::cauchy::{index_plot, transition_interval};
use cauchy_core::fem::{
    assemble, conjugate_gradient, run_scheme, CgOptions, LoadQuadrature, Manufactured, SchemeOptions, Triangulation,
};
use cauchy_core::frobenius::{problems as frob, solve_frobenius, FrobeniusOptions};
use cauchy_core::ift::{problems::affine, solve_implicit, SolveOptions};
use cauchy_core::ilb::{probe_curve, ProbeConfig};
use cauchy_core::{NormScale, ScaledVector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn fem(c: &mut Criterion) {
    let load = Manufactured::sin_sin().load;
    let mut group = c.benchmark_group("fem");
    for level in [3, 5] {
        let meshes = Triangulation::unit_square().hierarchy(level).unwrap();
        let mesh = Arc::clone(&meshes[level]);
        group.bench_with_input(BenchmarkId::new("assemble", level), &mesh, |b, m| {
            b.iter(|| assemble(black_box(m), &load, LoadQuadrature::EdgeMidpoint).unwrap())
        });
        let sys = assemble(&mesh, &load, LoadQuadrature::EdgeMidpoint).unwrap();
        let rhs = sys.rhs();
        for jacobi in [false, true] {
            let name = if jacobi { "cg-jacobi" } else { "cg" };
            group.bench_with_input(BenchmarkId::new(name, level), &rhs, |b, rhs| {
                b.iter(|| {
                    conjugate_gradient(&sys.stiffness, black_box(rhs), &CgOptions { jacobi, ..Default::default() })
                        .unwrap()
                })
            });
        }
    }
    group.sample_size(10);
    group.bench_function("run_scheme/5", |b| {
        let m = Manufactured::sin_sin();
        b.iter(|| run_scheme(&Triangulation::unit_square(), &m.load, 5, &SchemeOptions::default(), Some(&m)).unwrap())
    });
    group.finish();
}

fn implicit(c: &mut Criterion) {
    let mut group = c.benchmark_group("implicit");
    for dim in [1, 64] {
        let problem = affine(dim, 2.0, 100.0, NormScale::new(vec![0, 1, 2]).unwrap()).unwrap();
        let x = ScaledVector::new((0..dim).map(|k| 0.5 / (1.0 + k as f64)).collect()).unwrap();
        group.bench_with_input(BenchmarkId::new("solve", dim), &x, |b, x| {
            b.iter(|| solve_implicit(&problem, black_box(x), &SolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn frobenius(c: &mut Criterion) {
    let problem = frob::exponential(1.0, 2.0, 10.0).unwrap();
    let (x, y) = (ScaledVector::scalar(1.0).unwrap(), ScaledVector::scalar(1.0).unwrap());
    let mut group = c.benchmark_group("frobenius");
    for m in [50, 200, 800] {
        group.bench_with_input(BenchmarkId::new("picard", m), &m, |b, &m| {
            b.iter(|| solve_frobenius(&problem, &x, &y, black_box(m), &FrobeniusOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn probe(c: &mut Criterion) {
    let (x, y) = (ScaledVector::scalar(0.25).unwrap(), ScaledVector::scalar(1.75).unwrap());
    let plot = index_plot(x, y, 4).unwrap();
    let (a, b) = transition_interval(4);
    let cfg = ProbeConfig::default().with_h0((b - a) / 64.0);
    c.bench_function("probe/seam", |bench| {
        bench.iter(|| probe_curve(&plot, &|v: &ScaledVector| v[0], black_box(a), &cfg).unwrap())
    });
}

criterion_group!(benches, fem, implicit, frobenius, probe);
criterion_main!(benches);
