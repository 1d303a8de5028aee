use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qem_bench::{fixture, sample_a1, CASES};
use qem_core::curvature::{koszul_connection, ric_x_m, ricci};
use qem_core::solver::{lorentz_branches_r1, solve_f4_table1, solve_r1, solve_table_ii};
use qem_core::verifier::{certify_case, structural_checks, DEFAULT_TOL};
use qem_core::{realize, Branch, CaseParams, EmbeddingCase, Family};
use std::hint::black_box;

fn curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("ricci");
    for id in CASES {
        let f = fixture(id);
        group.bench_with_input(BenchmarkId::from_parameter(id), &f, |b, f| {
            b.iter(|| ricci(black_box(&f.alg), black_box(&f.metric.gram)).unwrap())
        });
    }
    group.finish();

    let f = fixture("SO2K_UK(k=4)");
    let mut x = vec![0.0; f.alg.dim()];
    x[f.dec.k0()[0]] = 0.5;
    c.bench_function("koszul/so(8)", |b| {
        b.iter(|| koszul_connection(&f.alg, &f.metric.gram).unwrap())
    });
    c.bench_function("ric_x_m/so(8)", |b| {
        b.iter(|| ric_x_m(&f.alg, &f.metric.gram, &x, 2.0).unwrap())
    });
}

fn realization(c: &mut Criterion) {
    let mut group = c.benchmark_group("realize");
    for id in CASES {
        let case = EmbeddingCase::from_id(id).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(id), &case, |b, case| {
            b.iter(|| realize(black_box(case)).unwrap())
        });
    }
    group.finish();
}

fn solving(c: &mut Criterion) {
    let e6 = EmbeddingCase::new(Family::E6_SO10SO2, CaseParams::none()).unwrap();
    let a1 = sample_a1();
    c.bench_function("solve_r1/e6", |b| {
        b.iter(|| solve_r1(&e6, black_box(&a1)).unwrap())
    });
    c.bench_function("lorentz_branches/e6", |b| {
        b.iter(|| lorentz_branches_r1(&e6).unwrap())
    });
    c.bench_function("table_i", |b| b.iter(|| solve_f4_table1().unwrap()));
    let e8 = EmbeddingCase::new(Family::E8_TABLE2, CaseParams::none()).unwrap();
    c.bench_function("table_ii/e8", |b| b.iter(|| solve_table_ii(&e8).unwrap()));
}

fn certification(c: &mut Criterion) {
    let sp2 = EmbeddingCase::new(Family::SPK_UK, CaseParams::k(2)).unwrap();
    let a1 = sample_a1();
    c.bench_function("certify/sp(2)", |b| {
        b.iter(|| certify_case(&sp2, &a1, 2.0, Branch::Riemannian, DEFAULT_TOL).unwrap())
    });
    c.bench_function("structural_checks/sp(2)", |b| {
        b.iter(|| structural_checks(&sp2).unwrap())
    });
}

criterion_group!(benches, curvature, realization, solving, certification);
criterion_main!(benches);
