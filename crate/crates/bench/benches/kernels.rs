use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tamenorm::arith::PMat;
use tamenorm::cosets::{canonicalize, u_operator, CosetVector};
use tamenorm::filtrations::{scalar_product, Filtration, Fp};
use tamenorm::groups::{Descriptor, Scenario};
use tamenorm::hecke::{hecke_polynomial, Satake, SatakeMethod};
use tamenorm::relations::{c_mi, level_count};

fn cosets(c: &mut Criterion) {
    let g = Descriptor::so_odd_standard(5, 3);
    let ring = g.ring();
    let x = g
        .cocharacter_element(ring, &[2, 1, 0, -1, -2])
        .mul(&g.root_group_element(ring, &g.positive[0], 7));
    c.bench_function("canonicalize so5", |b| {
        b.iter(|| canonicalize(black_box(&x)).unwrap())
    });

    let unit = CosetVector::unit(&PMat::identity(ring, 5)).unwrap();
    c.bench_function("u_operator so5 minuscule", |b| {
        b.iter(|| u_operator(&g, &[1, 0, 0, 0, -1], black_box(&unit)).unwrap())
    });
}

fn hecke(c: &mut Criterion) {
    c.bench_function("hecke polynomial so5 degree 16", |b| {
        b.iter(|| {
            let mut s = Satake::new(
                Descriptor::so_odd_standard(5, 3),
                SatakeMethod::Macdonald,
                0,
            );
            hecke_polynomial(&mut s, black_box(&[2, 1, 0, -1, -2])).unwrap()
        })
    });
    c.bench_function("hecke polynomial gl3 by counting", |b| {
        b.iter(|| {
            let mut s = Satake::new(Descriptor::gl(3, 2), SatakeMethod::Count, 100_000);
            hecke_polynomial(&mut s, black_box(&[1, 0, 0])).unwrap()
        })
    });
}

fn levels(c: &mut Criterion) {
    let s = Scenario::build("so3-u1", None, None).unwrap();
    c.bench_function("level count so3-u1 m=2 i=2", |b| {
        b.iter(|| level_count(&s.g, &s.mu, 2, 2, 100_000).unwrap())
    });
    let ggp = Scenario::build("ggp-gl-n2", None, None).unwrap();
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("c(1,1) ggp", |b| {
        b.iter(|| c_mi(&ggp, 1, 1, 1_000_000).unwrap())
    });
    group.finish();
}

fn filtrations(c: &mut Criterion) {
    let k = Fp::new(3);
    let g = vec![
        vec![1, 1, 0, 2],
        vec![0, 1, 2, 0],
        vec![1, 0, 1, 1],
        vec![2, 0, 0, 1],
    ];
    let a = Filtration::from_cocharacter(k, &[3, 1, -1, -2]).act(&g);
    let f = Filtration::from_cocharacter(k, &[2, 0, 0, -1]);
    c.bench_function("scalar product dim 4", |b| {
        b.iter(|| scalar_product(black_box(&a), black_box(&f)).unwrap())
    });
}

criterion_group!(benches, cosets, hecke, levels, filtrations);
criterion_main!(benches);
