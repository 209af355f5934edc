use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use picardlab::expsums::kloosterman;
use picardlab::geocount::Census;
use picardlab::lfun::{dedekind_zeta, lerch_zeta};
use picardlab::specfun::{hyp2f1, motohashi_k, scaled_k_imag};
use picardlab::{GaussianInt, LerchSpec, C64};

fn arithmetic(c: &mut Criterion) {
    let (m, n, q) = (GaussianInt::new(1, 2), GaussianInt::new(3, -1), GaussianInt::new(7, 4));
    c.bench_function("kloosterman norm 65", |b| b.iter(|| kloosterman(black_box(m), black_box(n), black_box(q))));
}

fn zetas(c: &mut Criterion) {
    let s = C64::new(0.5, 14.0);
    c.bench_function("dedekind_zeta 1/2+14i", |b| b.iter(|| dedekind_zeta(black_box(s))));
    let spec = LerchSpec { s: C64::new(-0.3, 0.4), m: 2, xi: C64::new(0.25, 0.5) };
    c.bench_function("lerch_zeta", |b| b.iter(|| lerch_zeta(black_box(spec))));
}

fn special(c: &mut Criterion) {
    c.bench_function("scaled K_ir(x) r=10 x=5", |b| b.iter(|| scaled_k_imag(black_box(10.0), black_box(5.0))));
    let (p, q, r) = (C64::new(0.5, 0.3), C64::new(1.2, -0.4), C64::new(2.1, 0.2));
    c.bench_function("hyp2f1 |z|=0.9", |b| b.iter(|| hyp2f1(p, q, r, black_box(C64::from_polar(0.9, 2.0)))));
    let u = C64::from_polar(1.5, 0.5);
    c.bench_function("motohashi K r=1", |b| b.iter(|| motohashi_k(black_box(1.0), black_box(u))));
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("build H=20", |b| b.iter(|| Census::build(black_box(20), 2)));
    g.finish();
}

criterion_group!(benches, arithmetic, zetas, special, census);
criterion_main!(benches);
