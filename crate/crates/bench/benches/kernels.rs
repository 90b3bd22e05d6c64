use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ramification::newton::{depth_multiset_from_polynomial, difference_poly, discriminant_valuation};
use ramification::pl::compose;
use ramification::poly::{resultant, resultant_sylvester};
use ramification_bench::{cyclotomic_polys, pl_funcs, towers};

fn resultants(c: &mut Criterion) {
    let mut group = c.benchmark_group("resultant");
    for f in cyclotomic_polys(&[(2, 3), (3, 2), (2, 4), (5, 2)]) {
        let (a, b) = (f.poly().clone(), f.poly().derivative());
        let id = format!("p{}_deg{}", f.p(), f.degree());
        group.bench_with_input(BenchmarkId::new("subresultant", &id), &(&a, &b), |bench, (a, b)| {
            bench.iter(|| resultant(black_box(a), black_box(b)))
        });
        group.bench_with_input(BenchmarkId::new("sylvester", &id), &(&a, &b), |bench, (a, b)| {
            bench.iter(|| resultant_sylvester(black_box(a), black_box(b)))
        });
    }
    group.finish();
}

fn newton_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("newton");
    group.sample_size(10);
    for f in cyclotomic_polys(&[(2, 3), (3, 2), (2, 4)]) {
        let id = format!("p{}_deg{}", f.p(), f.degree());
        group.bench_with_input(BenchmarkId::new("difference_poly", &id), &f, |b, f| {
            b.iter(|| difference_poly(black_box(f)))
        });
        group.bench_with_input(BenchmarkId::new("depths", &id), &f, |b, f| {
            b.iter(|| depth_multiset_from_polynomial(black_box(f), true))
        });
        group.bench_with_input(BenchmarkId::new("disc_val", &id), &f, |b, f| {
            b.iter(|| discriminant_valuation(black_box(f)))
        });
    }
    group.finish();
}

fn pl_composition(c: &mut Criterion) {
    let fs = pl_funcs(64, 7);
    c.bench_function("pl/compose_pairs", |b| {
        b.iter(|| {
            for w in fs.windows(2) {
                black_box(compose(&w[0], &w[1]));
            }
        })
    });
    c.bench_function("pl/invert", |b| {
        b.iter(|| {
            for f in &fs {
                black_box(f.invert());
            }
        })
    });
}

fn tower_checks(c: &mut Criterion) {
    let ts = towers(32, 11);
    let mut group = c.benchmark_group("tower");
    group.sample_size(20);
    group.bench_function("quotient_both_formulas", |b| {
        b.iter(|| {
            for t in &ts {
                for s in 0..t.big().order() {
                    black_box(t.quotient_depth_sum(s) == t.quotient_depth_max(s));
                }
            }
        })
    });
    group.bench_function("exact_sequences", |b| {
        b.iter(|| {
            for t in &ts {
                for s in t.sample_points().unwrap() {
                    black_box(t.exact_sequence_check(&s).unwrap().holds());
                }
            }
        })
    });
    group.bench_function("herbrand_composition", |b| {
        b.iter(|| {
            for t in &ts {
                black_box(t.herbrand_tower_check().unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, resultants, newton_oracle, pl_composition, tower_checks);
criterion_main!(benches);
