use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxcorr_bench::{garch, white_noise};
use maxcorr_core::bootstrap::Prepared;
use maxcorr_core::competing::{cvm_bootstrap, dv_q_test, DvMode, LrvKind};
use maxcorr_core::montecarlo::{run_cell, table2_cells, DEFAULT_LEVELS};
use maxcorr_core::{
    compute_expansion, BootstrapSpec, CorrelationSet, FilterSpec, LagRule, StatisticKind,
    WeightScheme,
};

fn correlations(c: &mut Criterion) {
    let mut g = c.benchmark_group("correlations");
    for n in [100, 1000] {
        let s = white_noise(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| CorrelationSet::from_values(s.values(), 40.min(n - 1)).unwrap())
        });
    }
    g.finish();
}

fn filters(c: &mut Criterion) {
    let s = garch(500);
    c.bench_function("garch_qml_fit_500", |b| b.iter(|| FilterSpec::Garch11.fit(&s).unwrap()));
    let fitted = FilterSpec::Garch11.fit(&s).unwrap();
    c.bench_function("garch_expansion_500_L40", |b| {
        b.iter(|| compute_expansion(&fitted, 40).unwrap())
    });
}

fn bootstraps(c: &mut Criterion) {
    let s = white_noise(500);
    let p = Prepared::new(&s, FilterSpec::Mean, LagRule::Fixed(40)).unwrap();
    c.bench_function("dwb_maxcorr_500_L40_M500", |b| {
        b.iter(|| {
            p.test_many(&[StatisticKind::MaxCorr], &WeightScheme::Constant, &BootstrapSpec::dwb(500, 1))
                .unwrap()
        })
    });
    c.bench_function("cvm_dwb_500_M500", |b| {
        b.iter(|| cvm_bootstrap(&s, FilterSpec::Mean, &BootstrapSpec::dwb(500, 1)).unwrap())
    });
    let small = white_noise(100);
    c.bench_function("cvm_brwb_100_M100", |b| {
        b.iter(|| cvm_bootstrap(&small, FilterSpec::Mean, &BootstrapSpec::brwb(100, 1)).unwrap())
    });
    let fitted = FilterSpec::Garch11.fit(&garch(500)).unwrap();
    c.bench_function("dv_bartlett_garch_500_L10", |b| {
        b.iter(|| dv_q_test(&fitted, 10, LrvKind::Bartlett, DvMode::Asymptotic).unwrap())
    });
}

fn simulation(c: &mut Criterion) {
    let cell = table2_cells(500).remove(0);
    let mut g = c.benchmark_group("simulation");
    g.sample_size(10);
    g.bench_function("table2_size_cell_50_reps", |b| {
        b.iter(|| run_cell(&cell, 50, 1, &DEFAULT_LEVELS).unwrap())
    });
    g.finish();
}

criterion_group!(benches, correlations, filters, bootstraps, simulation);
criterion_main!(benches);
