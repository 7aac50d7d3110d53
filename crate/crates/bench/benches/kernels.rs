use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use spinchaos::levelset::{level_areas, AreaRule, ChaosEstimator, ChaosMethod, GridBasis, TetSplit};
use spinchaos::specfun::hyp2f1;
use spinchaos::spinfield::wigner_d;
use spinchaos::{ChaosCoefficientTable, EulerGrid, Region, SphereQuadrature};
use spinchaos_bench::{high_band_profile, realization, two_band_profile};

fn special_functions(c: &mut Criterion) {
    c.bench_function("hyp2f1 near z = 1", |b| b.iter(|| hyp2f1(black_box(0.5), black_box(-3.5), 1.5, black_box(0.93))));
    c.bench_function("hyp2f1 small z", |b| b.iter(|| hyp2f1(black_box(2.5), black_box(-1.0), 3.5, black_box(0.2))));
    let mut g = c.benchmark_group("wigner_d");
    for l in [4u32, 15, 40] {
        g.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, &l| {
            b.iter(|| wigner_d(l, black_box(2), black_box(-1), black_box(1.1)))
        });
    }
    g.finish();
}

fn level_sets(c: &mut Criterion) {
    let profile = high_band_profile();
    let r = realization(&profile, 1);
    let mut g = c.benchmark_group("grid_areas");
    g.sample_size(10);
    for n in [24usize, 48] {
        let basis = GridBasis::new(&profile, EulerGrid::cubic(n).unwrap());
        g.bench_with_input(BenchmarkId::new("fill", n), &n, |b, _| b.iter(|| basis.fill(black_box(&r))));
        let values = basis.fill(&r);
        g.bench_with_input(BenchmarkId::new("level_areas", n), &n, |b, _| {
            b.iter(|| level_areas(black_box(&values), &[0.0, 1.0], TetSplit::default(), AreaRule::Corrected))
        });
    }
    g.finish();
}

fn chaos_components(c: &mut Criterion) {
    let profile = two_band_profile();
    let quad = SphereQuadrature::gauss_product(Region::FullSphere, 24, 48).unwrap();
    let r = realization(&profile, 2);
    let mut g = c.benchmark_group("chaos_components");
    g.sample_size(20);
    for q in [4u32, 8] {
        let table = ChaosCoefficientTable::build(profile.spin_ratio_sq(), 0.5, q).unwrap();
        g.bench_with_input(BenchmarkId::new("table", q), &q, |b, &q| {
            b.iter(|| ChaosCoefficientTable::build(profile.spin_ratio_sq(), black_box(0.5), q))
        });
        let est = ChaosEstimator::new(&profile, table, &quad, ChaosMethod::Fiberwise).unwrap();
        g.bench_with_input(BenchmarkId::new("fiberwise", q), &q, |b, _| b.iter(|| est.components(black_box(&r))));
    }
    g.finish();
}

criterion_group!(benches, special_functions, level_sets, chaos_components);
criterion_main!(benches);
