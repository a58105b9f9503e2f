//! Plug-in filters and the first-order expansion of residual autocovariances.
//!
//! A filter maps an observed series `y` to residuals `ε_t(θ̂)` and records the
//! pieces needed to carry estimation error into the bootstrap:
//!
//! * `G_t`: gradient of the level part `f(x_t, φ)` (zero for GARCH),
//! * `s_t = (1/2) ∂ ln σ²_t / ∂θ` (zero for level-only filters),
//! * estimating equations `m_t` and a matrix `Â` with `θ̂ - θ ≈ Â (1/n) Σ m_t`.
//!
//! All per-observation arrays are indexed by the residual sample, which for an
//! AR(p) filter starts at the `(p+1)`-th observation.

pub mod garch;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{autocov_unchecked, Series};

const COND_LIMIT: f64 = 1e12;
const PINV_RCOND: f64 = 1e-12;

/// Which plug-in model to remove before testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FilterSpec {
    None,
    Mean,
    Ar { order: usize, intercept: bool },
    Garch11,
}

impl FilterSpec {
    pub fn ar(order: usize) -> Self {
        FilterSpec::Ar {
            order,
            intercept: true,
        }
    }

    /// Number of estimated parameters `k_θ`.
    pub fn n_params(&self) -> usize {
        match *self {
            FilterSpec::None => 0,
            FilterSpec::Mean => 1,
            FilterSpec::Ar { order, intercept } => order + usize::from(intercept),
            FilterSpec::Garch11 => 3,
        }
    }

    /// Observations dropped at the start of the sample.
    pub fn lost_observations(&self) -> usize {
        match *self {
            FilterSpec::Ar { order, .. } => order,
            _ => 0,
        }
    }

    pub fn fit(&self, series: &Series) -> Result<FittedFilter> {
        self.fit_values(series.values(), None)
    }

    /// Fit by minimizing `(1/n) Σ w_t l_t(θ)`. Weights align with the
    /// residual sample (length `n - lost_observations()`).
    pub fn fit_weighted(&self, series: &Series, weights: &[f64]) -> Result<FittedFilter> {
        self.fit_values(series.values(), Some(weights))
    }

    pub(crate) fn fit_values(&self, y: &[f64], w: Option<&[f64]>) -> Result<FittedFilter> {
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(w) = w {
            let expect = y.len().saturating_sub(self.lost_observations());
            if w.len() != expect {
                return Err(Error::Invalid(format!(
                    "{} weights supplied for {} residuals",
                    w.len(),
                    expect
                )));
            }
        }
        match *self {
            FilterSpec::None => fit_none(y),
            FilterSpec::Mean => fit_mean_values(y, w),
            FilterSpec::Ar { order, intercept } => fit_ar_values(y, order, intercept, w),
            FilterSpec::Garch11 => fit_garch_values(y, w),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl std::fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FilterSpec::None => write!(f, "none"),
            FilterSpec::Mean => write!(f, "mean"),
            FilterSpec::Ar {
                order,
                intercept: true,
            } => write!(f, "ar:{order}"),
            FilterSpec::Ar {
                order,
                intercept: false,
            } => write!(f, "ar:{order}:nointercept"),
            FilterSpec::Garch11 => write!(f, "garch"),
        }
    }
}

impl std::str::FromStr for FilterSpec {
    type Err = Error;

    /// `none`, `mean`, `ar:p`, `ar:p:nointercept`, `garch`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "none" => return Ok(FilterSpec::None),
            "mean" => return Ok(FilterSpec::Mean),
            "garch" | "garch11" | "garch(1,1)" => return Ok(FilterSpec::Garch11),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.first() == Some(&"ar") && (2..=3).contains(&parts.len()) {
            let order: usize = parts[1]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad AR order in `{s}`")))?;
            if order == 0 {
                return Err(Error::Invalid(
                    "AR order must be at least 1 (use the mean filter)".into(),
                ));
            }
            let intercept = match parts.get(2) {
                None => true,
                Some(&"nointercept") => false,
                Some(other) => {
                    return Err(Error::Invalid(format!("unknown AR option `{other}`")));
                }
            };
            return Ok(FilterSpec::Ar { order, intercept });
        }
        Err(Error::Invalid(format!("unknown filter `{s}`")))
    }
}

/// Estimated plug-in with everything the expansion needs.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedFilter {
    spec: FilterSpec,
    theta: Vec<f64>,
    residuals: Vec<f64>,
    sigma: Vec<f64>,
    /// Row-major `n × k`.
    g: Vec<f64>,
    s: Vec<f64>,
    m: Vec<f64>,
    a_hat: DMatrix<f64>,
    converged: bool,
    boundary: bool,
    iterations: usize,
    /// Mean square of the input, the yardstick for numerically zero residuals.
    scale: f64,
}

impl FittedFilter {
    pub fn spec(&self) -> FilterSpec {
        self.spec
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn residual_series(&self) -> Result<Series> {
        Series::new(self.residuals.clone(), "residuals")
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.residuals.len()
    }

    pub fn k(&self) -> usize {
        self.theta.len()
    }

    pub fn g(&self, t: usize) -> &[f64] {
        let k = self.k();
        &self.g[t * k..(t + 1) * k]
    }

    pub fn s(&self, t: usize) -> &[f64] {
        let k = self.k();
        &self.s[t * k..(t + 1) * k]
    }

    pub fn m(&self, t: usize) -> &[f64] {
        let k = self.k();
        &self.m[t * k..(t + 1) * k]
    }

    pub fn a_hat(&self) -> &DMatrix<f64> {
        &self.a_hat
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// GARCH only: `α̂ + β̂` within the boundary tolerance of 1.
    pub fn boundary(&self) -> bool {
        self.boundary
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// `(1/n) Σ m_t`.
    pub fn mean_m(&self) -> Vec<f64> {
        let (n, k) = (self.n(), self.k());
        let mut out = vec![0.0; k];
        for t in 0..n {
            for (o, v) in out.iter_mut().zip(self.m(t)) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|v| *v /= n as f64);
        out
    }
}

const ZERO_RESID: f64 = 1e-26;

fn mean_square(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>() / y.len().max(1) as f64
}

fn negligible(resid: &[f64], y: &[f64]) -> bool {
    mean_square(resid) <= ZERO_RESID * mean_square(y).max(f64::MIN_POSITIVE)
}

fn fit_none(y: &[f64]) -> Result<FittedFilter> {
    if y.len() < 2 {
        return Err(Error::TooShort {
            min: 2,
            got: y.len(),
        });
    }
    Ok(FittedFilter {
        spec: FilterSpec::None,
        theta: Vec::new(),
        residuals: y.to_vec(),
        sigma: vec![1.0; y.len()],
        g: Vec::new(),
        s: Vec::new(),
        m: Vec::new(),
        a_hat: DMatrix::zeros(0, 0),
        converged: true,
        boundary: false,
        iterations: 0,
        scale: mean_square(y),
    })
}

/// Sample mean filter: `ε_t = y_t - ȳ`.
pub fn fit_mean(series: &Series) -> Result<FittedFilter> {
    fit_mean_values(series.values(), None)
}

fn fit_mean_values(y: &[f64], w: Option<&[f64]>) -> Result<FittedFilter> {
    let n = y.len();
    if n < 2 {
        return Err(Error::TooShort { min: 2, got: n });
    }
    let mu = match w {
        None => y.iter().sum::<f64>() / n as f64,
        Some(w) => {
            let sw: f64 = w.iter().sum();
            y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw
        }
    };
    let residuals: Vec<f64> = y.iter().map(|v| v - mu).collect();
    if w.is_none() && negligible(&residuals, y) {
        return Err(Error::DegenerateSeries);
    }
    Ok(FittedFilter {
        spec: FilterSpec::Mean,
        theta: vec![mu],
        m: residuals.clone(),
        residuals,
        sigma: vec![1.0; n],
        g: vec![1.0; n],
        s: vec![0.0; n],
        a_hat: DMatrix::from_element(1, 1, 1.0),
        converged: true,
        boundary: false,
        iterations: 0,
        scale: mean_square(y),
    })
}

/// Least-squares AR(p) filter with regressors `(1, y_{t-1}, …, y_{t-p})`.
pub fn fit_ar_ols(series: &Series, order: usize, intercept: bool) -> Result<FittedFilter> {
    fit_ar_values(series.values(), order, intercept, None)
}

fn fit_ar_values(
    y: &[f64],
    order: usize,
    intercept: bool,
    w: Option<&[f64]>,
) -> Result<FittedFilter> {
    if order == 0 {
        return Err(Error::Invalid(
            "AR order must be at least 1 (use the mean filter)".into(),
        ));
    }
    let n_all = y.len();
    if n_all < order + 2 {
        return Err(Error::TooShort {
            min: order + 2,
            got: n_all,
        });
    }
    let k = order + usize::from(intercept);
    let n = n_all - order;
    let mut x = Vec::with_capacity(n * k);
    for t in order..n_all {
        if intercept {
            x.push(1.0);
        }
        for j in 1..=order {
            x.push(y[t - j]);
        }
    }
    let row = |i: usize| &x[i * k..(i + 1) * k];
    let gram_of = |weights: Option<&[f64]>| {
        let mut gram = DMatrix::<f64>::zeros(k, k);
        let mut rhs = DVector::<f64>::zeros(k);
        for i in 0..n {
            let wi = weights.map_or(1.0, |w| w[i]);
            let xi = row(i);
            for a in 0..k {
                rhs[a] += wi * xi[a] * y[order + i];
                for b in 0..=a {
                    gram[(a, b)] += wi * xi[a] * xi[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                gram[(b, a)] = gram[(a, b)];
            }
        }
        (gram / n as f64, rhs / n as f64)
    };
    let (gram, rhs) = gram_of(w);
    let eig = gram.clone().symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(cond <= COND_LIMIT) {
        return Err(Error::RankDeficient(cond));
    }
    let chol = gram
        .clone()
        .cholesky()
        .ok_or(Error::RankDeficient(cond))?;
    let phi = chol.solve(&rhs);
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fit: f64 = row(i).iter().zip(phi.iter()).map(|(a, b)| a * b).sum();
            y[order + i] - fit
        })
        .collect();
    let mut m = Vec::with_capacity(n * k);
    for (i, e) in residuals.iter().enumerate() {
        m.extend(row(i).iter().map(|v| v * e));
    }
    let a_hat = if w.is_none() {
        chol.inverse()
    } else {
        let (g0, _) = gram_of(None);
        g0.try_inverse()
            .ok_or(Error::RankDeficient(f64::INFINITY))?
    };
    Ok(FittedFilter {
        spec: FilterSpec::Ar { order, intercept },
        theta: phi.iter().copied().collect(),
        residuals,
        sigma: vec![1.0; n],
        s: vec![0.0; n * k],
        g: x,
        m,
        a_hat,
        converged: true,
        boundary: false,
        iterations: 0,
        scale: mean_square(y),
    })
}

/// GARCH(1,1) quasi-maximum likelihood filter, `ε_t = y_t / σ̃_t(θ̂)`.
pub fn fit_garch_qml(series: &Series) -> Result<FittedFilter> {
    fit_garch_values(series.values(), None)
}

pub(crate) const GARCH_MIN_N: usize = 50;

fn fit_garch_values(y: &[f64], w: Option<&[f64]>) -> Result<FittedFilter> {
    let n = y.len();
    if n < GARCH_MIN_N {
        return Err(Error::TooShort {
            min: GARCH_MIN_N,
            got: n,
        });
    }
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateSeries);
    }
    let opt = garch::estimate(y, w).ok_or(Error::NonConvergence(3 * 500))?;
    let theta = opt.theta;
    let (s2, ds2) = garch::variance_path(y, &theta);
    let mut residuals = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n * 3);
    let mut m = Vec::with_capacity(n * 3);
    for t in 0..n {
        let sd = s2[t].sqrt();
        let e = y[t] / sd;
        sigma.push(sd);
        residuals.push(e);
        for d in ds2[t] {
            let st = 0.5 * d / s2[t];
            s.push(st);
            m.push(st * (e * e - 1.0));
        }
    }
    // Â = (2 (1/n) Σ s_t s_t')⁺: inverse QML Hessian under the information equality.
    let mut oss = DMatrix::<f64>::zeros(3, 3);
    for t in 0..n {
        let st = &s[t * 3..t * 3 + 3];
        for a in 0..3 {
            for b in 0..3 {
                oss[(a, b)] += st[a] * st[b];
            }
        }
    }
    oss *= 2.0 / n as f64;
    let a_hat = sym_pinv(&oss);
    Ok(FittedFilter {
        spec: FilterSpec::Garch11,
        theta: theta.to_vec(),
        residuals,
        sigma,
        g: vec![0.0; n * 3],
        s,
        m,
        a_hat,
        converged: true,
        boundary: theta[1] + theta[2] >= 1.0 - garch::BOUNDARY_TOL,
        iterations: opt.iterations,
        scale: mean_square(y),
    })
}

/// Moore-Penrose inverse of a symmetric matrix via its eigendecomposition.
pub(crate) fn sym_pinv(a: &DMatrix<f64>) -> DMatrix<f64> {
    if a.is_empty() {
        return a.clone();
    }
    let eig = a.clone().symmetric_eigen();
    let top = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let cut = PINV_RCOND * top;
    let inv = eig
        .eigenvalues
        .map(|v| if v.abs() > cut { 1.0 / v } else { 0.0 });
    let q = &eig.eigenvectors;
    q * DMatrix::from_diagonal(&inv) * q.transpose()
}

/// Per-lag derivative vectors `D̂(h)` and expansion variables `Ê_{t,h}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSet {
    n: usize,
    k: usize,
    d_hat: Vec<Vec<f64>>,
    /// `e_hat[h-1][j]` holds `Ê_{t,h}` for `t = h + 1 + j` (1-based t).
    e_hat: Vec<Vec<f64>>,
    gamma0: f64,
}

impl ExpansionSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_lag(&self) -> usize {
        self.d_hat.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    /// `D̂(h)` for `h = 1..=L`.
    pub fn d_hat(&self, h: usize) -> &[f64] {
        &self.d_hat[h - 1]
    }

    /// `Ê_{t,h}` for `t = h+1..=n`, in time order.
    pub fn e_lag(&self, h: usize) -> &[f64] {
        &self.e_hat[h - 1]
    }

    /// `Ê_{t,h}` with 1-based `t > h`.
    pub fn e(&self, t: usize, h: usize) -> f64 {
        assert!(t > h && t <= self.n, "Ê defined for h < t <= n");
        self.e_hat[h - 1][t - h - 1]
    }
}

/// Build `D̂(h)` and `Ê_{t,h}` for lags `1..=L`.
pub fn compute_expansion(filter: &FittedFilter, max_lag: usize) -> Result<ExpansionSet> {
    let eps = filter.residuals();
    let n = eps.len();
    if max_lag == 0 {
        return Err(Error::NoLags);
    }
    if max_lag >= n {
        return Err(Error::LagOutOfRange { lag: max_lag, n });
    }
    let gamma0 = autocov_unchecked(eps, 0);
    if !(gamma0 > ZERO_RESID * filter.scale) {
        return Err(Error::DegenerateSeries);
    }
    let k = filter.k();
    // q_t = ε_t s_t + G_t / σ_t
    let mut q = vec![0.0; n * k];
    for t in 0..n {
        let (g, s) = (filter.g(t), filter.s(t));
        for i in 0..k {
            q[t * k + i] = eps[t] * s[i] + g[i] / filter.sigma[t];
        }
    }
    // Â m_t
    let mut am = vec![0.0; n * k];
    if k > 0 {
        let a = filter.a_hat();
        for t in 0..n {
            let mt = filter.m(t);
            for i in 0..k {
                am[t * k + i] = (0..k).map(|j| a[(i, j)] * mt[j]).sum();
            }
        }
    }
    let nf = n as f64;
    let mut d_hat = Vec::with_capacity(max_lag);
    let mut e_hat = Vec::with_capacity(max_lag);
    for h in 1..=max_lag {
        let mut d = vec![0.0; k];
        for t in h..n {
            for i in 0..k {
                d[i] += q[t * k + i] * eps[t - h] + eps[t] * q[(t - h) * k + i];
            }
        }
        d.iter_mut().for_each(|v| *v /= nf);
        let e: Vec<f64> = (h..n)
            .map(|t| {
                let corr: f64 = (0..k).map(|i| d[i] * am[t * k + i]).sum();
                eps[t] * eps[t - h] - corr
            })
            .collect();
        d_hat.push(d);
        e_hat.push(e);
    }
    Ok(ExpansionSet {
        n,
        k,
        d_hat,
        e_hat,
        gamma0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn series(v: &[f64]) -> Series {
        Series::unlabeled(v.to_vec()).unwrap()
    }

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn mean_filter_examples() {
        let f = fit_mean(&series(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(f.theta(), &[2.0]);
        assert_eq!(f.residuals(), &[-1.0, 0.0, 1.0]);
        assert!(matches!(
            fit_mean(&series(&[0.1, 0.1, 0.1])),
            Err(Error::DegenerateSeries)
        ));
        let f = fit_mean(&series(&normals(50, 1))).unwrap();
        assert!(f.residuals().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn weighted_mean_closed_form() {
        let y = [1.0, 4.0, -2.0, 3.0];
        let w = [0.5, 2.0, 1.0, 0.5];
        let f = FilterSpec::Mean.fit_weighted(&series(&y), &w).unwrap();
        let expect = (0.5 + 8.0 - 2.0 + 1.5) / 4.0;
        assert_relative_eq!(f.theta()[0], expect, max_relative = 1e-15);
    }

    #[test]
    fn ar_noise_free_slope() {
        let y: Vec<f64> = (0..20).map(|t| 3.0 * 0.5_f64.powi(t)).collect();
        let f = fit_ar_ols(&series(&y), 1, true).unwrap();
        assert_relative_eq!(f.theta()[1], 0.5, max_relative = 1e-9);
        assert!(matches!(
            compute_expansion(&f, 1),
            Err(Error::DegenerateSeries)
        ));
    }

    #[test]
    fn ar_rejects_order_zero_and_collinear() {
        assert!(fit_ar_ols(&series(&[1.0, 2.0, 3.0, 4.0]), 0, true).is_err());
        assert!(matches!(
            fit_ar_ols(&series(&[1.0; 10]), 1, true),
            Err(Error::RankDeficient(_))
        ));
        assert!("ar:0".parse::<FilterSpec>().is_err());
    }

    #[test]
    fn ar_orthogonality() {
        let f = fit_ar_ols(&series(&normals(200, 3)), 2, true).unwrap();
        for v in f.mean_m() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn filter_spec_roundtrip() {
        for s in ["none", "mean", "ar:2", "ar:1:nointercept", "garch"] {
            let f: FilterSpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn expansion_none_is_raw_products() {
        let y = normals(30, 5);
        let f = FilterSpec::None.fit(&series(&y)).unwrap();
        let ex = compute_expansion(&f, 4).unwrap();
        for h in 1..=4 {
            assert!(ex.d_hat(h).is_empty());
            for t in h + 1..=30 {
                assert_eq!(ex.e(t, h), y[t - 1] * y[t - 1 - h]);
            }
        }
    }

    #[test]
    fn mean_expansion_hand_sum() {
        let y = [0.5, -1.0, 2.0, 0.25, -0.75, 1.5];
        let f = fit_mean(&series(&y)).unwrap();
        let e = f.residuals().to_vec();
        let ex = compute_expansion(&f, 2).unwrap();
        for h in 1..=2 {
            let mut hand = 0.0;
            for t in h..6 {
                hand += e[t - h] + e[t];
            }
            hand /= 6.0;
            assert_relative_eq!(ex.d_hat(h)[0], hand, max_relative = 1e-14, epsilon = 1e-15);
        }
    }

    #[test]
    fn expansion_linearity() {
        let y = normals(120, 9);
        for spec in [FilterSpec::Mean, FilterSpec::ar(2), FilterSpec::Garch11] {
            let f = spec.fit(&series(&y)).unwrap();
            let ex = compute_expansion(&f, 5).unwrap();
            let (n, k) = (f.n(), f.k());
            for h in 1..=5 {
                let mut mbar = vec![0.0; k];
                for t in h..n {
                    for (a, b) in mbar.iter_mut().zip(f.m(t)) {
                        *a += b / n as f64;
                    }
                }
                let amb = f.a_hat() * DVector::from_vec(mbar);
                let lhs: f64 = ex.e_lag(h).iter().sum::<f64>() / n as f64;
                let g = autocov_unchecked(f.residuals(), h);
                let rhs = g - ex.d_hat(h).iter().zip(amb.iter()).map(|(a, b)| a * b).sum::<f64>();
                assert!((lhs - rhs).abs() < 1e-12, "{spec}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn garch_scores_match_finite_differences() {
        let y: Vec<f64> = normals(200, 11).iter().map(|v| v * 1.7).collect();
        let theta = [0.8, 0.15, 0.6];
        let (s2, ds2) = garch::variance_path(&y, &theta);
        for i in 0..3 {
            let h = 1e-6 * theta[i];
            let mut up = theta;
            let mut dn = theta;
            up[i] += h;
            dn[i] -= h;
            let (su, _) = garch::variance_path(&y, &up);
            let (sd, _) = garch::variance_path(&y, &dn);
            for t in 0..200 {
                let fd = (su[t].ln() - sd[t].ln()) / (2.0 * h);
                let an = ds2[t][i] / s2[t];
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1e-8),
                    "t={t} i={i}: {fd} vs {an}"
                );
            }
        }
    }

    #[test]
    fn garch_a_hat_is_inverse_half_information() {
        let y: Vec<f64> = normals(400, 13).iter().map(|v| v * 1.3).collect();
        let f = fit_garch_qml(&series(&y)).unwrap();
        let th = f.theta();
        assert!(th.iter().all(|v| *v > 0.0));
        assert!(th[1] + th[2] < 1.0);
        let n = f.n();
        let mut oss = DMatrix::<f64>::zeros(3, 3);
        for t in 0..n {
            let st = DVector::from_column_slice(f.s(t));
            oss += &st * st.transpose();
        }
        oss *= 2.0 / n as f64;
        let prod = &oss * f.a_hat() * &oss;
        assert!((prod - &oss).abs().max() < 1e-6 * oss.abs().max());
    }
}
