use maxcorr_core::bootstrap::{bootstrap_correlations, draw_auxiliary, make_blocks};
use maxcorr_core::montecarlo::{gen_process, DgpSpec, ErrorKind, ProcessKind};
use maxcorr_core::{compute_expansion, rng, FilterSpec, Series};

fn garch_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, &[]);
    gen_process(&DgpSpec::new(ProcessKind::Garch11, ErrorKind::Iid, n), &mut r).values
}

/// Draws built from raw residual products, ignoring the plug-in.
fn naive_draw(eps: &[f64], phi: &[f64], h: usize) -> f64 {
    let n = eps.len() as f64;
    let g0 = eps.iter().map(|v| v * v).sum::<f64>() / n;
    let prods: Vec<f64> = (h..eps.len()).map(|t| eps[t] * eps[t - h]).collect();
    let c = prods.iter().sum::<f64>() / n;
    let num: f64 = prods.iter().zip(&phi[h..]).map(|(p, f)| f * (p - c)).sum();
    num / n / g0
}

#[test]
fn garch_plug_in_changes_bootstrap_draws() {
    let y = garch_sample(300, 21);
    let fitted = FilterSpec::Garch11.fit(&Series::unlabeled(y).unwrap()).unwrap();
    let ex = compute_expansion(&fitted, 5).unwrap();
    let scheme = make_blocks(ex.n(), 17).unwrap();
    let mut diff = 0.0;
    let mut size = 0.0;
    for i in 0..500u64 {
        let phi = draw_auxiliary(&scheme, &mut rng::stream(3, &[i]));
        let with = bootstrap_correlations(&ex, &phi, 5, true).unwrap();
        for h in 1..=5 {
            let naive = naive_draw(fitted.residuals(), &phi, h);
            diff += (with[h - 1] - naive).powi(2);
            size += naive * naive;
        }
    }
    let rel = (diff / size).sqrt();
    assert!(rel > 1e-3, "relative draw difference {rel}");
}

#[test]
fn unfiltered_expansion_is_raw_products() {
    let y: Vec<f64> = garch_sample(60, 2);
    let fitted = FilterSpec::None.fit(&Series::unlabeled(y.clone()).unwrap()).unwrap();
    let ex = compute_expansion(&fitted, 6).unwrap();
    for h in 1..=6 {
        for t in h + 1..=y.len() {
            assert_eq!(ex.e(t, h).to_bits(), (y[t - 1] * y[t - 1 - h]).to_bits());
        }
    }
}

#[test]
fn qml_score_vanishes_at_estimate() {
    let y = garch_sample(500, 5);
    let fitted = FilterSpec::Garch11.fit(&Series::unlabeled(y.clone()).unwrap()).unwrap();
    let theta: [f64; 3] = fitted.theta().try_into().unwrap();
    let (_, g) = maxcorr_core::filters::garch::objective(&y, None, &theta);
    let scale = theta.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let interior = !fitted.boundary() && theta[1] > 1e-4 && theta[2] > 1e-4;
    if interior {
        assert!(g.iter().all(|v| v.abs() * scale < 1e-6), "{g:?} at {theta:?}");
    }
}
