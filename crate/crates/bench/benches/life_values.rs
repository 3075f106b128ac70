use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gmlife_bench::{age_grid, reference_basis, reference_rate};
use gmlife_core::oracle::{integrate_survival, relative_tolerance};
use gmlife_core::special_fn::{gamma_cdf, upper_inc_gamma_general};
use gmlife_core::{annuity, commutation_row, Age};

fn special_functions(c: &mut Criterion) {
    c.bench_function("gamma_cdf", |b| {
        b.iter(|| gamma_cdf(black_box(1.2e-4), black_box(0.727_984)))
    });
    c.bench_function("upper_inc_gamma/negative_shape", |b| {
        b.iter(|| upper_inc_gamma_general(black_box(-2.3), black_box(0.8)))
    });
}

fn life_values(c: &mut Criterion) {
    let p = reference_basis();
    let r = reference_rate();
    let x40 = Age::new(40.0).unwrap();
    c.bench_function("annuity/x40", |b| b.iter(|| annuity(black_box(&p), r, x40)));
    let grid = age_grid();
    c.bench_function("commutation_table/0..=100", |b| {
        b.iter(|| {
            grid.iter()
                .map(|&x| commutation_row(&p, r, x, false).unwrap().n_val)
                .sum::<f64>()
        })
    });
    c.bench_function("quadrature_oracle/x40", |b| {
        b.iter(|| relative_tolerance(1e-10, |t| integrate_survival(&p, r, x40, t)))
    });
}

criterion_group!(benches, special_functions, life_values);
criterion_main!(benches);
