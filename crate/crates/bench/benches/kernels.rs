use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use g2kit::cubic_rings::{content, integral_classes, is_ring, standard_fmax, SplittingType};
use g2kit::g2_lie::{bracket, G2Element, DIM};
use g2kit::local_zeta::{crident_sweep, exp_sum_dchi, PConvention};
use g2kit::octonion::{oct_mul, Octonion};
use g2kit::whittaker::{bessel_k, j_nu, whittaker_components, JnuConfig, WhittakerParams};

fn exact(c: &mut Criterion) {
    let x = Octonion::from_ints([1, -2, 3, 0, 5, -1, 2, 7]);
    let y = Octonion::from_ints([0, 4, -3, 2, 1, 1, -5, 2]);
    c.bench_function("octonion product", |b| b.iter(|| oct_mul(black_box(&x), black_box(&y))));

    let basis: Vec<G2Element> = (0..DIM).map(G2Element::basis).collect();
    c.bench_function("g2 bracket table 14x14", |b| {
        b.iter(|| {
            for u in &basis {
                for v in &basis {
                    black_box(bracket(u, v));
                }
            }
        })
    });

    let f = standard_fmax(5, SplittingType::Split);
    let classes: Vec<_> = integral_classes(5, 3).into_iter().filter(|h| is_ring(h, &f)).collect();
    c.bench_function("content of ring classes, p=5, val<=3", |b| {
        b.iter(|| classes.iter().map(|h| content(h, &f)).sum::<i64>())
    });
    c.bench_function("crident sweep p=5 split val<=3", |b| {
        b.iter(|| crident_sweep(&f, 5, 3, 3, PConvention::Zero).unwrap())
    });
    c.bench_function("exponential sum p=5 k=1", |b| b.iter(|| exp_sum_dchi(&f, 5, 1, 0).unwrap()));
}

fn numeric(c: &mut Criterion) {
    c.bench_function("bessel K_2.5(3.7)", |b| b.iter(|| bessel_k(black_box(2.5), black_box(3.7)).unwrap()));
    let p = WhittakerParams::new(2, [0.0, 1.0, -1.0, 0.0], 0.1, 1.3, 0.7).unwrap();
    c.bench_function("whittaker components n=2", |b| b.iter(|| whittaker_components(black_box(&p)).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("J(2) for z^3 - z", |b| b.iter(|| j_nu(&[1.0, 0.0, -1.0, 0.0], 2.0, &JnuConfig::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, exact, numeric);
criterion_main!(benches);
