use criterion::{black_box, criterion_group, criterion_main, Criterion};
use snowflake_core::{vm, Family, IntMatrix, Sign, Slope, SnowflakeParams, Solver, Word};

fn golden() -> (IntMatrix, Slope) {
    ("[[1,1],[2,1]]".parse().unwrap(), Slope::new(4, 1).unwrap())
}

fn build(c: &mut Criterion) {
    let (p, r) = golden();
    let sp = SnowflakeParams::new(&p, r).unwrap();
    let n = sp.power(12).unwrap();
    c.bench_function("build_stats_rpow12", |b| b.iter(|| sp.build(1, black_box(n), Sign::Positive).unwrap().stats()));
}

fn disk(c: &mut Criterion) {
    let (p, r) = golden();
    let fam = Family::snowflake(&p, r).unwrap();
    let depths: Vec<u32> = (2..=12).collect();
    c.bench_function("disk_rows_2_12", |b| b.iter(|| fam.disk_rows(1, black_box(&depths)).unwrap()));
}

fn ball(c: &mut Criterion) {
    let (p, r) = golden();
    let fam = Family::snowflake(&p, r).unwrap();
    c.bench_function("ball_table_k4_j6", |b| b.iter(|| fam.ball_table(black_box(4), 6).unwrap()));
}

fn britton(c: &mut Criterion) {
    let (p, r) = golden();
    let sp = SnowflakeParams::new(&p, r).unwrap();
    let solver = Solver::new(&p, r).unwrap();
    let w = sp.build(1, sp.power(5).unwrap(), Sign::Positive).unwrap().flatten();
    c.bench_function("britton_power_of_c_rpow5", |b| b.iter(|| solver.power_of_c(1, black_box(&w)).unwrap()));
}

fn vm_nf(c: &mut Criterion) {
    let w: Word = "(a1 a2 a3 a4)^40 a4^-40 a3^-40 a2^-40 a1^-40".parse().unwrap();
    c.bench_function("vm_normal_form_m4", |b| b.iter(|| vm::normal_form(4, black_box(&w)).unwrap()));
}

criterion_group!(kernels, build, disk, ball, britton, vm_nf);
criterion_main!(kernels);
