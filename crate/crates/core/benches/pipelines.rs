use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orthocurv_core::cartan::cartan_table;
use orthocurv_core::curvature::closed_form_table;
use orthocurv_core::oracle::{compare, riemann_frame};
use orthocurv_core::{fixtures, par, random, Execution, SignConvention};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn tables(c: &mut Criterion) {
    let m = fixtures::load("anisotropic4");
    let conv = SignConvention::RESOLVED;
    let mut g = c.benchmark_group("tables/anisotropic4");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("closed_form", name), &exec, |b, &e| {
            b.iter(|| black_box(closed_form_table(&m, conv, e)))
        });
        g.bench_with_input(BenchmarkId::new("cartan", name), &exec, |b, &e| {
            b.iter(|| black_box(cartan_table(&m, conv, e)))
        });
        g.bench_with_input(BenchmarkId::new("oracle", name), &exec, |b, &e| b.iter(|| black_box(riemann_frame(&m, e))));
    }
    g.finish();
}

fn comparison(c: &mut Criterion) {
    let m = fixtures::load("schwarzschild");
    let conv = SignConvention::RESOLVED;
    let closed = closed_form_table(&m, conv, Execution::Sequential);
    let oracle = riemann_frame(&m, Execution::Sequential);
    let mut g = c.benchmark_group("compare/schwarzschild");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| black_box(compare(&closed, &oracle, &m, 1e-9, 64, 0, e)))
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let metrics = random::random_metrics(4, 8, 7);
    let conv = SignConvention::RESOLVED;
    let mut g = c.benchmark_group("sweep/random4x8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| {
                // Outer level follows the mode; inner work stays sequential so only one level is measured.
                par::map(e, &metrics, |m| {
                    let closed = closed_form_table(m, conv, Execution::Sequential);
                    let oracle = riemann_frame(m, Execution::Sequential);
                    compare(&closed, &oracle, m, 1e-9, 32, 0, Execution::Sequential).agrees()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, tables, comparison, sweep);
criterion_main!(benches);
