use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use chocolate_core::automaton::ca_pattern;
use chocolate_core::nim_pass::PassTable;
use chocolate_core::recursion::RecursiveGenerator;
use chocolate_core::sierpinski::integer_section;
use chocolate_core::{pattern, Cell, GameState, Player, Solver};

fn patterns(c: &mut Criterion) {
    let mut group = c.benchmark_group("pattern");
    for m in [64u32, 256, 1024] {
        group.bench_with_input(BenchmarkId::new("xor", m), &m, |b, &m| {
            b.iter(|| pattern(black_box(m)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("recursive", m), &m, |b, &m| {
            // Fresh generator each time so the cache does not hide the work.
            b.iter(|| RecursiveGenerator::new(false).pattern(black_box(m)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ca", m), &m, |b, &m| {
            b.iter(|| ca_pattern(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn solver(c: &mut Criterion) {
    c.bench_function("solver/all cells m=12", |b| {
        b.iter(|| {
            let mut solver = Solver::new(12);
            for i in 1..=12 {
                for j in 1..=12 {
                    let s = GameState::new(12, 12, Cell::new(i, j), Player::Human).unwrap();
                    black_box(solver.solve(&s).unwrap());
                }
            }
        })
    });
}

fn sections(c: &mut Criterion) {
    let mut group = c.benchmark_group("section");
    for n in [6u32, 8, 10] {
        let m = (1i64 << n) - 1;
        group.bench_with_input(BenchmarkId::new("integer", n), &n, |b, &n| {
            b.iter(|| integer_section(black_box(n), m).unwrap())
        });
    }
    group.finish();
}

fn pass_table(c: &mut Criterion) {
    c.bench_function("nim_pass/table 32", |b| b.iter(|| PassTable::build(black_box(32)).unwrap()));
}

criterion_group!(benches, patterns, solver, sections, pass_table);
criterion_main!(benches);
