use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ssatc::oracle::exact_pr;
use ssatc::solver::{solve, solve_interpolating, DcChoice, SolveOptions};
use ssatc::sresolution::check_proof;
use ssatc_bench::{random_formulas, random_split_formulas};

fn engines(c: &mut Criterion) {
    let mut g = c.benchmark_group("random_ssat");
    for vars in [8u32, 12, 16] {
        let fs = random_formulas(vars, 20);
        g.bench_with_input(BenchmarkId::new("value", vars), &fs, |b, fs| {
            b.iter(|| fs.iter().map(|f| solve(black_box(f), &SolveOptions::value()).unwrap().prob).collect::<Vec<_>>())
        });
        g.bench_with_input(BenchmarkId::new("proof", vars), &fs, |b, fs| {
            b.iter(|| fs.iter().map(|f| solve(black_box(f), &SolveOptions::proof()).unwrap().prob).collect::<Vec<_>>())
        });
        if vars <= 12 {
            g.bench_with_input(BenchmarkId::new("oracle", vars), &fs, |b, fs| {
                b.iter(|| fs.iter().map(|f| exact_pr(black_box(f)).unwrap()).collect::<Vec<_>>())
            });
        }
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let fs = random_formulas(12, 20);
    let traces: Vec<_> = fs.iter().map(|f| solve(f, &SolveOptions::proof()).unwrap().trace.unwrap()).collect();
    c.bench_function("check_proof/12", |b| b.iter(|| traces.iter().filter(|t| check_proof(black_box(t)).accepted()).count()));

    let split = random_split_formulas(12, 20);
    c.bench_function("interpolate/12", |b| {
        b.iter(|| {
            split
                .iter()
                .map(|(f, p)| solve_interpolating(black_box(f), p, &SolveOptions::interpolant(DcChoice::ConstTrue)).unwrap().prob)
                .collect::<Vec<_>>()
        })
    });
}

criterion_group!(benches, engines, certificates);
criterion_main!(benches);
