use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use pharmonic::heat_kernel::{heat_apply_kernel, heat_kernel_e, k_alpha};
use pharmonic::hermite::{gauss_hermite, mehler_partial_sum};
use pharmonic::spectral::{forward, frac_power, heat_spectral, inverse, random_band_limited};
use pharmonic::make_grid;

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for &(d, n, k) in &[(1usize, 64usize, 16usize), (1, 256, 32), (2, 32, 12)] {
        let g = make_grid(d, n, 12.0, k, k + 1).unwrap();
        let f = inverse(&random_band_limited(&g, 1, 8, k.min(6)));
        let id = format!("d{d}_n{n}_k{k}");
        group.bench_with_input(BenchmarkId::new("forward", &id), &f, |b, f| b.iter(|| forward(black_box(f))));
        group.bench_with_input(BenchmarkId::new("frac_power", &id), &f, |b, f| {
            b.iter(|| frac_power(black_box(f), -0.5, 0.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("heat_spectral", &id), &f, |b, f| {
            b.iter(|| heat_spectral(black_box(f), 0.5).unwrap())
        });
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let z = [0.3, -0.2];
    let zp = [0.1, 0.4];
    c.bench_function("heat_kernel_e", |b| b.iter(|| heat_kernel_e(black_box(0.5), &z, &zp)));
    let mut group = c.benchmark_group("k_alpha");
    for alpha in [0.5, 1.0, 1.5] {
        group.bench_with_input(BenchmarkId::from_parameter(alpha), &alpha, |b, &a| {
            b.iter(|| k_alpha(&z, &zp, black_box(a), 0.0).unwrap())
        });
    }
    group.finish();
    let g = make_grid(1, 64, 10.0, 16, 17).unwrap();
    let f = inverse(&random_band_limited(&g, 2, 4, 4));
    c.bench_function("heat_apply_kernel_d1", |b| b.iter(|| heat_apply_kernel(black_box(&f), 0.5).unwrap()));
}

fn hermite(c: &mut Criterion) {
    c.bench_function("gauss_hermite_96", |b| b.iter(|| gauss_hermite(black_box(96)).unwrap()));
    c.bench_function("mehler_partial_sum_60", |b| {
        b.iter(|| mehler_partial_sum(60, black_box(0.5), &[0.7], &[-0.3]).unwrap())
    });
}

criterion_group!(benches, transforms, kernels, hermite);
criterion_main!(benches);
