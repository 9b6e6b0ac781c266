//! Parallel-versus-sequential throughput on the heavy sweeps: the square of
//! the differential over every basis vector, and bar-complex rank batches.
//!
//! Both variants run the rayon code path; the sequential baseline installs a
//! one-thread pool so the comparison isolates the fan-out itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use quivres_core::coalgebra::build_coalgebra;
use quivres_core::decor::{Combo, ResContext};
use quivres_core::dga::build_dga;
use quivres_core::field::Rationals;
use quivres_core::quiver::{IdealPresentation, Quiver, QuotientAlgebra};
use quivres_core::tor::tor_via_bar;

fn commutator_context(n: u32) -> std::sync::Arc<ResContext<Rationals>> {
    let quiver = Quiver::loops(&["x", "y"]);
    let ideal = IdealPresentation::parse(&quiver, Rationals, &["x*y - y*x"]).unwrap();
    ResContext::new(QuotientAlgebra::new(Rationals, quiver, ideal, n))
}

fn d_squared_sweep(ctx: &std::sync::Arc<ResContext<Rationals>>, n: u32) -> usize {
    let dga = build_dga(ctx.clone(), n, None);
    let words: Vec<_> = dga
        .pieces()
        .flat_map(|(_, piece)| piece.basis.iter().cloned())
        .collect();
    let results = quivres_core::par::par_map(words, |w| {
        let once = dga.differential(&w).unwrap();
        let twice = dga.differential_combo(&once).unwrap();
        assert!(twice.is_zero());
        once.len()
    });
    results.into_iter().sum()
}

fn homology_sweep(ctx: &std::sync::Arc<ResContext<Rationals>>, n: u32) -> usize {
    let k = build_coalgebra(ctx.clone(), n, None);
    k.homology().unwrap().total_dim() + tor_via_bar(ctx.algebra(), n, n).unwrap().total_dim()
}

fn with_threads<R>(threads: usize, f: impl FnOnce() -> R + Send) -> R
where
    R: Send,
{
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn bench_sweeps(c: &mut Criterion) {
    let n = 5u32;
    let ctx = commutator_context(n);
    // warm the ideal pieces once so both variants measure the sweep only
    let _ = Combo::<Rationals>::zero();

    let mut group = c.benchmark_group("d_squared_sweep");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, n| {
        b.iter(|| with_threads(1, || black_box(d_squared_sweep(&ctx, *n))));
    });
    group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, n| {
        b.iter(|| black_box(d_squared_sweep(&ctx, *n)));
    });
    group.finish();

    let mut group = c.benchmark_group("homology_tables");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, n| {
        b.iter(|| with_threads(1, || black_box(homology_sweep(&ctx, *n))));
    });
    group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, n| {
        b.iter(|| black_box(homology_sweep(&ctx, *n)));
    });
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);
