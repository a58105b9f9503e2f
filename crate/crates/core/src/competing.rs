//! Competing white noise tests: Hong's standardized portmanteau, Ljung-Box,
//! the spectral Cramér-von Mises statistic and an orthogonalized Q-test with a
//! Bartlett long-run variance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::bootstrap::{
    bootstrap_reference, brwb_from_fitted, collect_draws, make_blocks, p_value, BootstrapMethod,
    BootstrapSpec, DrawKernel, Reference, TestResult,
};
use crate::error::{Error, Result};
use crate::filters::{compute_expansion, sym_pinv, ExpansionSet, FilterSpec, FittedFilter};
use crate::stats::{autocov_unchecked, ljung_box_weights, CorrelationSet, Series};

/// `(2L)^{-1/2} Σ_h ω(h) (n ρ²(h) - 1)` for arbitrary weights.
pub(crate) fn hong_from_rho(rho: &[f64], w: &[f64], n: usize) -> f64 {
    let lb = ljung_box_from_rho(rho, w, n);
    let sw: f64 = w[..rho.len()].iter().sum();
    (lb - sw) / (2.0 * rho.len() as f64).sqrt()
}

/// `n Σ_h ω(h) ρ²(h)`.
pub(crate) fn ljung_box_from_rho(rho: &[f64], w: &[f64], n: usize) -> f64 {
    n as f64 * rho.iter().zip(w).map(|(r, w)| w * r * r).sum::<f64>()
}

/// Hong's standardized Ljung-Box statistic with `ω(h) = (n+2)/(n-h)`.
pub fn hong_statistic(corrs: &CorrelationSet) -> f64 {
    let (n, l) = (corrs.n(), corrs.max_lag());
    hong_from_rho(corrs.rhos(), &ljung_box_weights(n, l), n)
}

/// Ljung-Box `Q = n Σ_h (n+2)/(n-h) ρ̂²(h)`.
pub fn ljung_box_statistic(corrs: &CorrelationSet) -> f64 {
    let (n, l) = (corrs.n(), corrs.max_lag());
    ljung_box_from_rho(corrs.rhos(), &ljung_box_weights(n, l), n)
}

/// Upper tail of the standard normal.
pub fn normal_sf(x: f64) -> f64 {
    Normal::standard().sf(x)
}

/// Upper tail `P(χ²_df > x)`.
pub fn chi2_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .sf(x)
}

/// Hong's test against its N(0, 1) limit (one-sided).
pub fn hong_asymptotic(corrs: &CorrelationSet) -> TestResult {
    let stat = hong_statistic(corrs);
    TestResult {
        test: "hong".into(),
        statistic: stat,
        p_value: normal_sf(stat),
        reference: Reference::StandardNormal,
        n: corrs.n(),
        lag: Some(corrs.max_lag()),
        draws: Vec::new(),
        warnings: Vec::new(),
    }
}

/// Ljung-Box against `χ²(L - k)`.
pub fn ljung_box_asymptotic(corrs: &CorrelationSet, k: usize) -> Result<TestResult> {
    let l = corrs.max_lag();
    if l <= k {
        return Err(Error::Invalid(format!(
            "{l} lags leave no degrees of freedom after {k} estimated parameters"
        )));
    }
    let stat = ljung_box_statistic(corrs);
    Ok(TestResult {
        test: "ljungbox".into(),
        statistic: stat,
        p_value: chi2_sf(stat, l - k),
        reference: Reference::ChiSquared { df: l - k },
        n: corrs.n(),
        lag: Some(l),
        draws: Vec::new(),
        warnings: Vec::new(),
    })
}

/// `ψ_h(λ) = sin(hλ)/(hπ)` for `h ≥ 1`, `ψ_0(λ) = λ/(2π)`.
pub fn psi_basis(h: usize, lambda: f64) -> f64 {
    use std::f64::consts::PI;
    if h == 0 {
        lambda / (2.0 * PI)
    } else {
        let hf = h as f64;
        (hf * lambda).sin() / (hf * PI)
    }
}

/// Midpoint grid on `(0, π)` with `round(π/Δ)` equal cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    delta_lambda: f64,
    midpoints: Vec<f64>,
    width: f64,
}

impl SpectralGrid {
    pub fn new(delta_lambda: f64) -> Result<Self> {
        use std::f64::consts::PI;
        if !(delta_lambda > 0.0 && delta_lambda < PI) {
            return Err(Error::Invalid(format!(
                "spectral increment must lie in (0, π), got {delta_lambda}"
            )));
        }
        let cells = ((PI / delta_lambda).round() as usize).max(1);
        let width = PI / cells as f64;
        let midpoints = (0..cells).map(|k| (k as f64 + 0.5) * width).collect();
        Ok(Self {
            delta_lambda,
            midpoints,
            width,
        })
    }

    pub fn delta_lambda(&self) -> f64 {
        self.delta_lambda
    }

    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    /// Actual cell width `π / cells`.
    pub fn width(&self) -> f64 {
        self.width
    }
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self::new(0.01).expect("valid default increment")
    }
}

/// `ψ_h(λ_k)` for `h = 1..n-1` on a grid, cached for one sample size.
#[derive(Debug, Clone)]
pub struct CvmBasis {
    n: usize,
    width: f64,
    /// `(n-1) × cells`, row `h-1`.
    psi: DMatrix<f64>,
}

impl CvmBasis {
    pub fn new(n: usize, grid: &SpectralGrid) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooShort { min: 2, got: n });
        }
        let mids = grid.midpoints();
        let psi = DMatrix::from_fn(n - 1, mids.len(), |r, c| psi_basis(r + 1, mids[c]));
        Ok(Self {
            n,
            width: grid.width(),
            psi,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn cells(&self) -> usize {
        self.psi.ncols()
    }

    pub fn psi(&self) -> &DMatrix<f64> {
        &self.psi
    }

    /// `S(λ_k) = Σ_h √n g_h ψ_h(λ_k)` over the lags supplied in `g` (`g[0]` is lag 1).
    pub fn process(&self, g: &[f64], n: usize) -> Vec<f64> {
        let rn = (n as f64).sqrt();
        let mut out = vec![0.0; self.cells()];
        for (h, gh) in g.iter().enumerate().take(self.psi.nrows()) {
            if *gh == 0.0 {
                continue;
            }
            let c = rn * gh;
            for (o, p) in out.iter_mut().zip(self.psi.row(h).iter()) {
                *o += c * p;
            }
        }
        out
    }

    fn integrate_sq(&self, s: &[f64]) -> f64 {
        s.iter().map(|v| v * v).sum::<f64>() * self.width
    }
}

/// `C = ∫_0^π S²(λ) dλ` by the midpoint rule, from autocovariances at lags `1..`.
pub fn cvm_from_gammas(gammas: &[f64], n: usize, basis: &CvmBasis) -> f64 {
    basis.integrate_sq(&basis.process(gammas, n))
}

/// CvM statistic of the residuals of `filter`, using every lag `1..n-1`.
pub fn cvm_statistic(series: &Series, filter: FilterSpec) -> Result<f64> {
    cvm_statistic_on_grid(series, filter, &SpectralGrid::default())
}

pub fn cvm_statistic_on_grid(series: &Series, filter: FilterSpec, grid: &SpectralGrid) -> Result<f64> {
    let fitted = filter.fit(series)?;
    let eps = fitted.residuals();
    let n = eps.len();
    if !(autocov_unchecked(eps, 0) > 0.0) {
        return Err(Error::DegenerateSeries);
    }
    let basis = CvmBasis::new(n, grid)?;
    let gammas: Vec<f64> = (1..n).map(|h| autocov_unchecked(eps, h)).collect();
    Ok(cvm_from_gammas(&gammas, n, &basis))
}

/// Bootstrapped CvM test. DWB/WB draws replace `γ̂(h)` with the φ-weighted,
/// recentered expansion sums; BRWB re-estimates under random weights.
pub fn cvm_bootstrap(series: &Series, filter: FilterSpec, spec: &BootstrapSpec) -> Result<TestResult> {
    spec.validate()?;
    let fitted = filter.fit(series)?;
    let basis = CvmBasis::new(fitted.n(), &SpectralGrid::default())?;
    cvm_bootstrap_fitted(series, &fitted, None, spec, &basis)
}

/// As [`cvm_bootstrap`] on an already fitted filter; `expansion` must cover
/// lags `1..n-1` when supplied.
pub fn cvm_bootstrap_fitted(
    series: &Series,
    fitted: &FittedFilter,
    expansion: Option<&ExpansionSet>,
    spec: &BootstrapSpec,
    basis: &CvmBasis,
) -> Result<TestResult> {
    spec.validate()?;
    if spec.method == BootstrapMethod::Brwb {
        return brwb_from_fitted(series, fitted, spec, basis);
    }
    let n = fitted.n();
    if basis.n() != n {
        return Err(Error::Invalid(format!(
            "spectral basis built for n = {}, residuals have {n}",
            basis.n()
        )));
    }
    let owned;
    let ex = match expansion {
        Some(e) if e.max_lag() == n - 1 => e,
        _ => {
            owned = compute_expansion(fitted, n - 1)?;
            &owned
        }
    };
    let gammas: Vec<f64> = (1..n).map(|h| autocov_unchecked(fitted.residuals(), h)).collect();
    let statistic = cvm_from_gammas(&gammas, n, basis);
    let block_len = spec.block_len(n);
    let scheme = make_blocks(n, block_len)?;
    let kernel = DrawKernel::new(ex, &scheme, n - 1, spec.recenter, false)?;
    // W = √n K Ψ: per-block contribution to S*(λ_k).
    let w = kernel.to_matrix() * basis.psi() * (n as f64).sqrt();
    let width = basis.width();
    let draws = collect_draws(spec.seed, spec.draws, scheme.len(), |xi| {
        let s = w.tr_mul(&DVector::from_column_slice(xi));
        s.iter().map(|v| v * v).sum::<f64>() * width
    });
    Ok(TestResult {
        test: "cvm".into(),
        statistic,
        p_value: p_value(statistic, &draws),
        reference: bootstrap_reference(spec, block_len, 0),
        n,
        lag: None,
        draws,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LrvKind {
    Identity,
    Bartlett,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrvEstimate {
    pub kind: LrvKind,
    pub s_hat: DMatrix<f64>,
    pub v_hat: DMatrix<f64>,
    pub bandwidth: f64,
}

/// `2 (n/100)^{1/3}`.
pub fn dv_bandwidth(n: usize) -> f64 {
    2.0 * (n as f64 / 100.0).cbrt()
}

pub fn identity_lrv(max_lag: usize) -> LrvEstimate {
    LrvEstimate {
        kind: LrvKind::Identity,
        s_hat: DMatrix::identity(max_lag, max_lag),
        v_hat: DMatrix::identity(max_lag, max_lag),
        bandwidth: 0.0,
    }
}

/// Bartlett-kernel long-run covariance of `x_{t,i} = ε_t ε_{t-i}`, `i = 1..L`,
/// centered at sample means, scaled by `γ̂(0)^{-2}`.
///
/// The vector series is observed for `t = L+1..n`; autocovariances of it use
/// that common span as divisor.
pub fn bartlett_lrv(residuals: &[f64], max_lag: usize, bandwidth: f64) -> Result<LrvEstimate> {
    let n = residuals.len();
    if max_lag == 0 {
        return Err(Error::NoLags);
    }
    if max_lag >= n {
        return Err(Error::LagOutOfRange { lag: max_lag, n });
    }
    if !(bandwidth > 0.0) {
        return Err(Error::Invalid(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let gamma0 = autocov_unchecked(residuals, 0);
    if !(gamma0 > 0.0) {
        return Err(Error::DegenerateSeries);
    }
    let l = max_lag;
    let span = n - l;
    let mut x = DMatrix::<f64>::zeros(span, l);
    for (r, t) in (l..n).enumerate() {
        for i in 1..=l {
            x[(r, i - 1)] = residuals[t] * residuals[t - i];
        }
    }
    for c in 0..l {
        let mean = x.column(c).mean();
        x.column_mut(c).add_scalar_mut(-mean);
    }
    let mut s = x.tr_mul(&x);
    let max_k = (bandwidth.floor() as usize).min(span.saturating_sub(1));
    for lag in 1..=max_k {
        let weight = 1.0 - lag as f64 / bandwidth;
        if weight <= 0.0 {
            continue;
        }
        let lead = x.rows(lag, span - lag);
        let lagged = x.rows(0, span - lag);
        let g = lead.tr_mul(&lagged);
        s += (&g + g.transpose()) * weight;
    }
    s /= span as f64;
    let s = (&s + s.transpose()) * 0.5;
    let v = &s / (gamma0 * gamma0);
    Ok(LrvEstimate {
        kind: LrvKind::Bartlett,
        s_hat: s,
        v_hat: v,
        bandwidth,
    })
}

/// Linear map from `L` correlations to `L - k` orthogonalized correlations.
///
/// After standardizing by `V̂ = C C'`, each lag `j = 1..L-k` is replaced by its
/// recursive residual: the part of `ρ̃_j` not explained by projecting the
/// later lags on the standardized derivative rows `ξ̃_i = C⁻¹ D̂(i)`,
/// rescaled to unit variance. With `V̂ = I` and no plug-in it is the identity.
#[derive(Debug, Clone)]
pub struct DvTransform {
    map: DMatrix<f64>,
    ridge: bool,
}

impl DvTransform {
    /// `d` is `L × k` with rows `D̂(h)'`.
    pub fn new(lrv: &LrvEstimate, d: &DMatrix<f64>) -> Result<Self> {
        let l = d.nrows();
        let k = d.ncols();
        if lrv.v_hat.nrows() != l {
            return Err(Error::Invalid(format!(
                "long-run variance is {}×{}, need {l}×{l}",
                lrv.v_hat.nrows(),
                lrv.v_hat.ncols()
            )));
        }
        if l <= k {
            return Err(Error::Invalid(format!(
                "{l} lags leave no degrees of freedom after {k} estimated parameters"
            )));
        }
        let (cinv, ridge) = match lrv.kind {
            LrvKind::Identity => (DMatrix::identity(l, l), false),
            LrvKind::Bartlett => inverse_cholesky(&lrv.v_hat)?,
        };
        let xi = &cinv * d;
        let mut t = DMatrix::<f64>::zeros(l - k, l);
        for j in 0..l - k {
            let mut r = DMatrix::<f64>::zeros(k, k);
            for i in j + 1..l {
                let row = xi.row(i);
                r += row.transpose() * row;
            }
            let rp = sym_pinv(&r);
            let xj = xi.row(j).transpose();
            let coef = &rp * &xj;
            let scale = (1.0 + (xj.transpose() * &coef)[(0, 0)]).sqrt();
            t[(j, j)] = 1.0 / scale;
            for i in j + 1..l {
                let proj = (xi.row(i) * &coef)[(0, 0)];
                t[(j, i)] = -proj / scale;
            }
        }
        Ok(Self {
            map: t * cinv,
            ridge,
        })
    }

    pub fn map(&self) -> &DMatrix<f64> {
        &self.map
    }

    pub fn ridge_applied(&self) -> bool {
        self.ridge
    }

    pub fn dof(&self) -> usize {
        self.map.nrows()
    }

    pub fn apply(&self, rho: &[f64]) -> Vec<f64> {
        (&self.map * DVector::from_column_slice(rho)).iter().copied().collect()
    }
}

/// `C⁻¹` for `V = C C'`, with a ridge of `1e-8 · tr(V) / L` if `V` is not positive definite.
fn inverse_cholesky(v: &DMatrix<f64>) -> Result<(DMatrix<f64>, bool)> {
    let l = v.nrows();
    let mut ridge = false;
    let chol = match v.clone().cholesky() {
        Some(c) => c,
        None => {
            ridge = true;
            let bump = 1e-8 * v.trace() / l as f64;
            (v + DMatrix::identity(l, l) * bump.max(f64::MIN_POSITIVE))
                .cholesky()
                .ok_or(Error::RankDeficient(f64::INFINITY))?
        }
    };
    let c = chol.l();
    let cinv = c
        .solve_lower_triangular(&DMatrix::identity(l, l))
        .ok_or(Error::RankDeficient(f64::INFINITY))?;
    Ok((cinv, ridge))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DvMode {
    Asymptotic,
    Bootstrap(BootstrapSpec),
}

/// `D̂(h)'` stacked into an `L × k` matrix.
pub fn derivative_matrix(expansion: &ExpansionSet, max_lag: usize) -> DMatrix<f64> {
    let k = expansion.k();
    DMatrix::from_fn(max_lag, k, |r, c| expansion.d_hat(r + 1)[c])
}

/// Orthogonalized Q-test `n Σ_{h ≤ L-k} ρ̄²(h)` on the residuals of `filter`.
pub fn dv_q_test(
    filter: &FittedFilter,
    max_lag: usize,
    lrv_kind: LrvKind,
    mode: DvMode,
) -> Result<TestResult> {
    let expansion = compute_expansion(filter, max_lag)?;
    let corrs = CorrelationSet::from_values(filter.residuals(), max_lag)?;
    dv_q_test_prepared(filter, &corrs, &expansion, lrv_kind, mode)
}

pub fn dv_q_test_prepared(
    filter: &FittedFilter,
    corrs: &CorrelationSet,
    expansion: &ExpansionSet,
    lrv_kind: LrvKind,
    mode: DvMode,
) -> Result<TestResult> {
    let l = corrs.max_lag();
    let n = corrs.n();
    let lrv = match lrv_kind {
        LrvKind::Identity => identity_lrv(l),
        LrvKind::Bartlett => bartlett_lrv(filter.residuals(), l, dv_bandwidth(n))?,
    };
    let transform = DvTransform::new(&lrv, &derivative_matrix(expansion, l))?;
    let q = |rho: &[f64]| n as f64 * transform.apply(rho).iter().map(|v| v * v).sum::<f64>();
    let statistic = q(corrs.rhos());
    let dof = transform.dof();
    let mut warnings = Vec::new();
    if transform.ridge_applied() {
        warnings.push("long-run variance regularized by a ridge".into());
    }
    let name = match lrv_kind {
        LrvKind::Identity => "dv",
        LrvKind::Bartlett => "dv_bartlett",
    };
    match mode {
        DvMode::Asymptotic => Ok(TestResult {
            test: name.into(),
            statistic,
            p_value: chi2_sf(statistic, dof),
            reference: Reference::ChiSquared { df: dof },
            n,
            lag: Some(l),
            draws: Vec::new(),
            warnings,
        }),
        DvMode::Bootstrap(spec) => {
            spec.validate()?;
            if spec.method == BootstrapMethod::Brwb {
                return Err(Error::Invalid(
                    "the orthogonalized Q-test supports wild and dependent wild bootstraps".into(),
                ));
            }
            let block_len = spec.block_len(n);
            let scheme = make_blocks(n, block_len)?;
            let kernel = DrawKernel::new(expansion, &scheme, l, spec.recenter, true)?;
            let tk = DrawKernel::from_matrix(&(kernel.to_matrix() * transform.map().transpose()));
            let draws = collect_draws(spec.seed, spec.draws, scheme.len(), |xi| {
                let mut out = vec![0.0; dof];
                tk.apply(xi, &mut out);
                n as f64 * out.iter().map(|v| v * v).sum::<f64>()
            });
            Ok(TestResult {
                test: name.into(),
                statistic,
                p_value: p_value(statistic, &draws),
                reference: bootstrap_reference(&spec, block_len, 0),
                n,
                lag: Some(l),
                draws,
                warnings,
            })
        }
    }
}
