//! Compares the rayon-parallel batch path against the sequential fallback
//! on the data-parallel workloads: batched branch inversion and Jacobian
//! grids.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;

use sinhw::batch::{map_collect, map_collect_seq};
use sinhw::branch::{psi_branch, BranchId};
use sinhw::map::{f_prime, jacobian};
use sinhw::verify::domain_samples;
use sinhw::Parameter;

fn roundtrip_batch(c: &mut Criterion) {
    let a = Parameter::rational(1, 2).unwrap();
    let mut group = c.benchmark_group("roundtrip");
    for &n in &[256usize, 2048] {
        let zs = domain_samples(&a, BranchId::principal(0), n, 1);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("parallel", n), &zs, |b, zs| {
            b.iter(|| {
                map_collect(zs, |z| psi_branch(&a, *z, BranchId::principal(0)).unwrap().w)
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &zs, |b, zs| {
            b.iter(|| {
                map_collect_seq(zs, |z| psi_branch(&a, *z, BranchId::principal(0)).unwrap().w)
            })
        });
    }
    group.finish();
}

fn jacobian_grid(c: &mut Criterion) {
    let a = Parameter::rational(1, 4).unwrap();
    let grid: Vec<Complex64> = (0..200)
        .flat_map(|i| {
            (0..200).map(move |j| {
                Complex64::new(-4.0 + 8.0 * i as f64 / 199.0, -12.0 + 24.0 * j as f64 / 199.0)
            })
        })
        .collect();
    let mut group = c.benchmark_group("jacobian-grid");
    group.throughput(Throughput::Elements(grid.len() as u64));
    group.bench_function("parallel", |b| {
        b.iter(|| {
            map_collect(&grid, |w| {
                let j = jacobian(&a, *w).unwrap();
                let d = f_prime(&a, *w).unwrap();
                (d.norm_sqr() - j).abs()
            })
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            map_collect_seq(&grid, |w| {
                let j = jacobian(&a, *w).unwrap();
                let d = f_prime(&a, *w).unwrap();
                (d.norm_sqr() - j).abs()
            })
        })
    });
    group.finish();
}

criterion_group!(benches, roundtrip_batch, jacobian_grid);
criterion_main!(benches);
