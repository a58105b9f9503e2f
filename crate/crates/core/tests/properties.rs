use maxcorr_core::bootstrap::{bootstrap_correlations, p_value, Prepared};
use maxcorr_core::competing::{
    bartlett_lrv, dv_bandwidth, dv_q_test, identity_lrv, DvMode, LrvKind,
};
use maxcorr_core::filters::garch;
use maxcorr_core::stats::{max_corr_statistic, portmanteau_statistic};
use maxcorr_core::{
    compute_expansion, BootstrapSpec, CorrelationSet, FilterSpec, LagRule, LagWeights, Series,
    StatisticKind, WeightScheme,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn series_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, min..max)
        .prop_filter("non-degenerate", |x| x.iter().any(|v| v.abs() > 1e-3))
}

fn oracle_gamma(x: &[f64], h: usize) -> (f64, f64) {
    let mut s = 0.0;
    let mut a = 0.0;
    for t in h..x.len() {
        s += x[t] * x[t - h];
        a += (x[t] * x[t - h]).abs();
    }
    (s / x.len() as f64, a / x.len() as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn autocovariance_matches_direct_sum(x in series_strategy(2, 120)) {
        let s = Series::unlabeled(x.clone()).unwrap();
        for h in 0..x.len() {
            let (want, scale) = oracle_gamma(&x, h);
            let got = maxcorr_core::sample_autocovariance(&s, h).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn max_corr_is_monotone_in_lag(x in series_strategy(12, 100), l1 in 1usize..5, extra in 0usize..6) {
        let l2 = l1 + extra;
        let c = CorrelationSet::from_values(&x, l2).unwrap();
        let a = max_corr_statistic(&c.truncated(l1).unwrap(), &LagWeights::unit(l1));
        let b = max_corr_statistic(&c, &LagWeights::unit(l2));
        prop_assert!(b >= a);
    }

    #[test]
    fn correlations_are_scale_invariant(x in series_strategy(10, 80), c in prop_oneof![-50.0..-0.01f64, 0.01..50.0f64]) {
        let l = 5.min(x.len() - 1);
        let a = CorrelationSet::from_values(&x, l).unwrap();
        let y: Vec<f64> = x.iter().map(|v| v * c).collect();
        let b = CorrelationSet::from_values(&y, l).unwrap();
        for h in 1..=l {
            prop_assert!((a.rho(h) - b.rho(h)).abs() <= 1e-12);
        }
        let w = LagWeights::unit(l);
        prop_assert!((max_corr_statistic(&a, &w) - max_corr_statistic(&b, &w)).abs() <= 1e-10);
    }

    #[test]
    fn power_of_two_scaling_is_exact(x in series_strategy(10, 80), k in -8i32..8) {
        let c = 2f64.powi(k);
        let y: Vec<f64> = x.iter().map(|v| v * c).collect();
        let a = CorrelationSet::from_values(&x, 4).unwrap();
        let b = CorrelationSet::from_values(&y, 4).unwrap();
        prop_assert_eq!(a.rhos(), b.rhos());
    }

    #[test]
    fn reversal_keeps_variance_and_mirrors_products(x in series_strategy(3, 80)) {
        let r: Vec<f64> = x.iter().rev().copied().collect();
        let sx = Series::unlabeled(x.clone()).unwrap();
        let sr = Series::unlabeled(r.clone()).unwrap();
        let g0x = maxcorr_core::sample_autocovariance(&sx, 0).unwrap();
        let g0r = maxcorr_core::sample_autocovariance(&sr, 0).unwrap();
        prop_assert!((g0x - g0r).abs() <= 1e-12 * g0x);
        let n = x.len();
        for h in 1..n {
            let mut want = 0.0;
            let mut scale = 0.0;
            for t in h..n {
                let p = x[n - 1 - t] * x[n - 1 - t + h];
                want += p;
                scale += p.abs();
            }
            let got = maxcorr_core::sample_autocovariance(&sr, h).unwrap();
            prop_assert!((got - want / n as f64).abs() <= 1e-12 * (scale / n as f64).max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn unit_weight_portmanteau_is_box_pierce(x in series_strategy(10, 80), l in 1usize..8) {
        let l = l.min(x.len() - 1);
        let c = CorrelationSet::from_values(&x, l).unwrap();
        let want = x.len() as f64 * c.rhos().iter().map(|r| r * r).sum::<f64>();
        prop_assert_eq!(portmanteau_statistic(&c, &LagWeights::unit(l)), want);
    }

    #[test]
    fn p_value_is_bounded_and_monotone(draws in prop::collection::vec(0.0..5.0f64, 1..50), a in 0.0..6.0f64, b in 0.0..6.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (pl, ph) = (p_value(lo, &draws), p_value(hi, &draws));
        prop_assert!((0.0..=1.0).contains(&pl) && (0.0..=1.0).contains(&ph));
        prop_assert!(ph <= pl);
    }

    #[test]
    fn bootstrap_correlations_are_linear_in_phi(
        x in series_strategy(20, 60),
        seed in any::<u64>(),
        filter in prop_oneof![Just(FilterSpec::None), Just(FilterSpec::Mean), Just(FilterSpec::ar(1))],
    ) {
        let s = Series::unlabeled(x).unwrap();
        let Ok(fitted) = filter.fit(&s) else { return Ok(()) };
        let Ok(ex) = compute_expansion(&fitted, 4) else { return Ok(()) };
        let n = ex.n();
        let mut r = maxcorr_core::rng::stream(seed, &[]);
        use rand::Rng;
        let p1: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let p2: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let sum: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a + b).collect();
        for recenter in [false, true] {
            let a = bootstrap_correlations(&ex, &p1, 4, recenter).unwrap();
            let b = bootstrap_correlations(&ex, &p2, 4, recenter).unwrap();
            let c = bootstrap_correlations(&ex, &sum, 4, recenter).unwrap();
            let scale = bootstrap_correlations(&ex, &vec![1.0; n], 4, false).unwrap();
            for h in 0..4 {
                let tol = 1e-12 * (1.0 + scale[h].abs() * 4.0 + a[h].abs() + b[h].abs());
                prop_assert!((c[h] - a[h] - b[h]).abs() <= tol);
            }
        }
    }

    #[test]
    fn hong_and_ljung_box_share_p_values(x in series_strategy(30, 90), seed in any::<u64>()) {
        let s = Series::unlabeled(x).unwrap();
        let Ok(p) = Prepared::new(&s, FilterSpec::Mean, LagRule::Fixed(4)) else { return Ok(()) };
        let r = p
            .test_many(&[StatisticKind::Hong, StatisticKind::LjungBox], &WeightScheme::Constant, &BootstrapSpec::dwb(99, seed))
            .unwrap();
        prop_assert_eq!(r[0].p_value, r[1].p_value);
    }

    #[test]
    fn bartlett_lrv_is_symmetric_psd(x in series_strategy(40, 150), l in 1usize..8) {
        let n = x.len();
        let lrv = bartlett_lrv(&x, l, dv_bandwidth(n)).unwrap();
        let v: &DMatrix<f64> = &lrv.v_hat;
        let tr = v.trace();
        for i in 0..l {
            for j in 0..l {
                prop_assert!((v[(i, j)] - v[(j, i)]).abs() <= 1e-12 * tr.abs().max(1.0));
            }
        }
        let min = v.clone().symmetric_eigen().eigenvalues.min();
        prop_assert!(min >= -1e-10 * tr);
    }

    #[test]
    fn identity_dv_without_plug_in_is_box_pierce(x in series_strategy(20, 90), l in 1usize..8) {
        let s = Series::unlabeled(x).unwrap();
        let fitted = FilterSpec::None.fit(&s).unwrap();
        let l = l.min(fitted.n() - 1);
        let r = dv_q_test(&fitted, l, LrvKind::Identity, DvMode::Asymptotic).unwrap();
        let c = CorrelationSet::from_values(fitted.residuals(), l).unwrap();
        let bp = fitted.n() as f64 * c.rhos().iter().map(|r| r * r).sum::<f64>();
        prop_assert!((r.statistic - bp).abs() <= 1e-12 * bp.max(1.0));
        prop_assert!((0.0..=1.0).contains(&r.p_value));
        prop_assert_eq!(identity_lrv(l).v_hat, DMatrix::identity(l, l));
    }

    #[test]
    fn least_squares_scores_sum_to_zero(x in series_strategy(20, 90), p in 0usize..3) {
        let s = Series::unlabeled(x.clone()).unwrap();
        let scale = x.iter().map(|v| v * v).sum::<f64>();
        for filter in [FilterSpec::Mean, FilterSpec::ar(p)] {
            let Ok(f) = filter.fit(&s) else { continue };
            for total in f.mean_m() {
                prop_assert!(total.abs() <= 1e-9 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn garch_variance_is_positive(
        x in prop::collection::vec(-1e3..1e3f64, 2..200),
        omega in 1e-6..10.0f64,
        p in 0.0..0.999f64,
        u in 0.0..1.0f64,
    ) {
        let theta = [omega, p * u, p * (1.0 - u)];
        let (s2, _) = garch::variance_path(&x, &theta);
        prop_assert!(s2.iter().all(|v| *v > 0.0 && v.is_finite()));
    }

    #[test]
    fn bootstrap_is_deterministic(x in series_strategy(30, 80), seed in any::<u64>()) {
        let s = Series::unlabeled(x).unwrap();
        let spec = BootstrapSpec::dwb(64, seed);
        let run = || maxcorr_core::bootstrap_test(&s, FilterSpec::Mean, LagRule::Fixed(3), &WeightScheme::Constant, StatisticKind::MaxCorr, &spec);
        let (Ok(a), Ok(b)) = (run(), run()) else { return Ok(()) };
        prop_assert_eq!(a.p_value.to_bits(), b.p_value.to_bits());
        prop_assert!(a.draws.iter().zip(&b.draws).all(|(u, v)| u.to_bits() == v.to_bits()));
    }
}
