use criterion::{criterion_group, criterion_main, Criterion};
use pleijel_bench::{hydrogen_3d, oscillator_2d};
use pleijel_core::radial::{eigenfunction, eigenvalues_below};
use pleijel_core::spectrum::assemble;
use std::hint::black_box;

fn sector_sweep(c: &mut Criterion) {
    let (pot, grid) = oscillator_2d();
    c.bench_function("oscillator d2 sector ell=0 below 100", |b| {
        b.iter(|| eigenvalues_below(black_box(&pot), 0, 2, 100.0, &grid).unwrap())
    });
    let (hpot, hgrid) = hydrogen_3d();
    c.bench_function("hydrogen d3 sector ell=1 below -1/100", |b| {
        b.iter(|| eigenvalues_below(black_box(&hpot), 1, 3, -1.0 / 100.0, &hgrid).unwrap())
    });
}

fn full_assembly(c: &mut Criterion) {
    let (pot, _) = oscillator_2d();
    c.bench_function("oscillator d2 assemble below 60", |b| {
        b.iter(|| assemble(black_box(&pot), 2, 60.0).unwrap())
    });
}

fn single_state(c: &mut Criterion) {
    let (pot, grid) = oscillator_2d();
    c.bench_function("oscillator d2 eigenfunction n=6 ell=3", |b| {
        b.iter(|| eigenfunction(black_box(&pot), 3, 2, 6, &grid).unwrap())
    });
}

criterion_group!(benches, sector_sweep, full_assembly, single_state);
criterion_main!(benches);
