//! Sample autocovariances and autocorrelations, lag schedules, lag weights
//! and the statistic transforms built on weighted correlations.
//!
//! Conventions: lags are 1-based in the public API (`rho(h)` for
//! `h = 1..=L`), the autocovariance divisor is `n` at every lag, and the
//! input is never demeaned internally. Filtering belongs to [`crate::filters`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered, finite sequence of real observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    values: Vec<f64>,
    label: String,
}

impl Series {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort {
                min: 2,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn unlabeled(values: Vec<f64>) -> Result<Self> {
        Self::new(values, "")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for Series {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// `(1/n) Σ_{t>h} x_t x_{t-h}` without range checks.
#[inline]
pub(crate) fn autocov_unchecked(x: &[f64], h: usize) -> f64 {
    let n = x.len();
    let s: f64 = x[h..].iter().zip(x).map(|(a, b)| a * b).sum();
    s / n as f64
}

/// Sample autocovariance at lag `h` with divisor `n`.
pub fn sample_autocovariance(series: &Series, h: usize) -> Result<f64> {
    let n = series.len();
    if h >= n {
        return Err(Error::LagOutOfRange { lag: h, n });
    }
    Ok(autocov_unchecked(series.values(), h))
}

/// Autocovariances at lags `0..=L` and autocorrelations at lags `1..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSet {
    gamma: Vec<f64>,
    rho: Vec<f64>,
    n: usize,
}

impl CorrelationSet {
    /// Build from raw values (residuals), checking `1 <= L <= n-1` and `γ̂(0) > 0`.
    pub fn from_values(x: &[f64], max_lag: usize) -> Result<Self> {
        let n = x.len();
        if max_lag == 0 {
            return Err(Error::NoLags);
        }
        if max_lag >= n {
            return Err(Error::LagOutOfRange { lag: max_lag, n });
        }
        let gamma: Vec<f64> = (0..=max_lag).map(|h| autocov_unchecked(x, h)).collect();
        if !(gamma[0] > 0.0) {
            return Err(Error::DegenerateSeries);
        }
        let rho = gamma[1..].iter().map(|g| g / gamma[0]).collect();
        Ok(Self { gamma, rho, n })
    }

    /// Build directly from autocorrelations (used by tests and by callers that
    /// already hold a correlogram). `γ̂(0)` is set to 1.
    pub fn from_rho(rho: Vec<f64>, n: usize) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::NoLags);
        }
        if rho.len() >= n {
            return Err(Error::LagOutOfRange { lag: rho.len(), n });
        }
        if let Some(i) = rho.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut gamma = Vec::with_capacity(rho.len() + 1);
        gamma.push(1.0);
        gamma.extend_from_slice(&rho);
        Ok(Self { gamma, rho, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_lag(&self) -> usize {
        self.rho.len()
    }

    /// `γ̂(h)` for `h = 0..=L`.
    pub fn gamma(&self, h: usize) -> f64 {
        self.gamma[h]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    /// `ρ̂(h)` for `h = 1..=L`.
    pub fn rho(&self, h: usize) -> f64 {
        assert!(h >= 1, "lag 0 correlation is excluded");
        self.rho[h - 1]
    }

    /// Correlations at lags `1..=L`, in order.
    pub fn rhos(&self) -> &[f64] {
        &self.rho
    }

    /// Restrict to lags `1..=L'`.
    pub fn truncated(&self, max_lag: usize) -> Result<Self> {
        if max_lag == 0 {
            return Err(Error::NoLags);
        }
        if max_lag > self.max_lag() {
            return Err(Error::LagOutOfRange {
                lag: max_lag,
                n: self.n,
            });
        }
        Ok(Self {
            gamma: self.gamma[..=max_lag].to_vec(),
            rho: self.rho[..max_lag].to_vec(),
            n: self.n,
        })
    }
}

/// Sample correlations of `series` up to lag `max_lag`.
pub fn sample_correlations(series: &Series, max_lag: usize) -> Result<CorrelationSet> {
    CorrelationSet::from_values(series.values(), max_lag)
}

/// How the maximum lag is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagRule {
    Fixed(usize),
    /// `L_n = [δ n / ln n]`, truncated to an integer.
    Proportional(f64),
}

impl std::fmt::Display for LagRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LagRule::Fixed(l) => write!(f, "fixed:{l}"),
            LagRule::Proportional(d) => write!(f, "prop:{d}"),
        }
    }
}

impl std::str::FromStr for LagRule {
    type Err = Error;

    /// Parses `fixed:5`, `5`, or `prop:0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unrecognized lag rule `{s}`"));
        let s = s.trim();
        let rule = if let Some(v) = s.strip_prefix("fixed:") {
            LagRule::Fixed(v.trim().parse().map_err(|_| bad())?)
        } else if let Some(v) = s.strip_prefix("prop:") {
            LagRule::Proportional(v.trim().parse().map_err(|_| bad())?)
        } else {
            LagRule::Fixed(s.parse().map_err(|_| bad())?)
        };
        match rule {
            LagRule::Fixed(0) => Err(Error::NoLags),
            LagRule::Proportional(d) if !(d > 0.0 && d <= 1.0) => Err(Error::Invalid(format!(
                "proportional lag factor must lie in (0, 1], got {d}"
            ))),
            r => Ok(r),
        }
    }
}

/// A lag rule evaluated at a sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedLag {
    pub lag: usize,
    /// Set when the rule asked for more than `n - 1` lags.
    pub clipped: bool,
}

pub fn resolve_lag_rule(rule: LagRule, n: usize) -> Result<ResolvedLag> {
    if n < 2 {
        return Err(Error::TooShort { min: 2, got: n });
    }
    let raw = match rule {
        LagRule::Fixed(0) => return Err(Error::NoLags),
        LagRule::Fixed(l) => l,
        LagRule::Proportional(delta) => {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(Error::Invalid(format!(
                    "proportional lag factor must lie in (0, 1], got {delta}"
                )));
            }
            if n < 8 {
                return Err(Error::TooShort { min: 8, got: n });
            }
            let nf = n as f64;
            ((delta * nf / nf.ln()).trunc() as usize).max(1)
        }
    };
    if raw > n - 1 {
        Ok(ResolvedLag {
            lag: n - 1,
            clipped: true,
        })
    } else {
        Ok(ResolvedLag {
            lag: raw,
            clipped: false,
        })
    }
}

/// Weight family applied to lags `1..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    #[default]
    Constant,
    /// `(n + 2) / (n - h)`.
    LjungBox,
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagWeights {
    scheme: WeightScheme,
    resolved: Vec<f64>,
}

impl LagWeights {
    pub fn scheme(&self) -> &WeightScheme {
        &self.scheme
    }

    /// Weights for lags `1..=L`.
    pub fn values(&self) -> &[f64] {
        &self.resolved
    }

    pub fn len(&self) -> usize {
        self.resolved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resolved.is_empty()
    }

    pub fn unit(max_lag: usize) -> Self {
        Self {
            scheme: WeightScheme::Constant,
            resolved: vec![1.0; max_lag],
        }
    }
}

/// `(n + 2) / (n - h)` for `h = 1..=L`.
pub(crate) fn ljung_box_weights(n: usize, max_lag: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=max_lag).map(|h| (nf + 2.0) / (nf - h as f64)).collect()
}

pub fn resolve_weights(scheme: &WeightScheme, n: usize, max_lag: usize) -> Result<LagWeights> {
    if max_lag == 0 {
        return Err(Error::NoLags);
    }
    if max_lag >= n {
        return Err(Error::LagOutOfRange { lag: max_lag, n });
    }
    let resolved = match scheme {
        WeightScheme::Constant => vec![1.0; max_lag],
        WeightScheme::LjungBox => ljung_box_weights(n, max_lag),
        WeightScheme::Custom(w) => {
            if w.len() < max_lag {
                return Err(Error::Invalid(format!(
                    "{} custom weights supplied for {} lags",
                    w.len(),
                    max_lag
                )));
            }
            if let Some(bad) = w[..max_lag].iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::Invalid(format!(
                    "lag weights must be strictly positive, got {bad}"
                )));
            }
            w[..max_lag].to_vec()
        }
    };
    Ok(LagWeights {
        scheme: scheme.clone(),
        resolved,
    })
}

/// `√n max_h |w_h ρ_h|` over the first `min(len)` lags.
#[inline]
pub(crate) fn max_corr(rho: &[f64], weights: &[f64], n: usize) -> f64 {
    let m = rho
        .iter()
        .zip(weights)
        .map(|(r, w)| (w * r).abs())
        .fold(0.0_f64, f64::max);
    (n as f64).sqrt() * m
}

/// `n Σ_h w_h² ρ_h²`.
#[inline]
pub(crate) fn portmanteau(rho: &[f64], weights: &[f64], n: usize) -> f64 {
    let s: f64 = rho
        .iter()
        .zip(weights)
        .map(|(r, w)| {
            let a = w * r;
            a * a
        })
        .sum();
    n as f64 * s
}

fn check_weights(corrs: &CorrelationSet, w: &LagWeights) {
    assert!(
        w.len() >= corrs.max_lag(),
        "weights cover {} lags, correlations {}",
        w.len(),
        corrs.max_lag()
    );
}

/// Normalized weighted sample maximum correlation `√n max_h |ω(h) ρ̂(h)|`.
pub fn max_corr_statistic(corrs: &CorrelationSet, w: &LagWeights) -> f64 {
    check_weights(corrs, w);
    max_corr(corrs.rhos(), w.values(), corrs.n())
}

/// Weighted portmanteau `n Σ_h ω²(h) ρ̂²(h)`.
pub fn portmanteau_statistic(corrs: &CorrelationSet, w: &LagWeights) -> f64 {
    check_weights(corrs, w);
    portmanteau(corrs.rhos(), w.values(), corrs.n())
}

/// Map from a correlation vector to a scalar test statistic.
///
/// `MaxCorr` and `Portmanteau` use the caller's weights. `Hong` and
/// `LjungBox` always use `(n + 2)/(n - h)` weights, linearly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    MaxCorr,
    Portmanteau,
    Hong,
    LjungBox,
}

impl StatisticKind {
    /// Evaluate on lags `1..=rho.len()`.
    pub fn evaluate(self, rho: &[f64], weights: &[f64], n: usize) -> f64 {
        match self {
            StatisticKind::MaxCorr => max_corr(rho, weights, n),
            StatisticKind::Portmanteau => portmanteau(rho, weights, n),
            StatisticKind::Hong => {
                crate::competing::hong_from_rho(rho, &ljung_box_weights(n, rho.len()), n)
            }
            StatisticKind::LjungBox => {
                crate::competing::ljung_box_from_rho(rho, &ljung_box_weights(n, rho.len()), n)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::MaxCorr => "maxcorr",
            StatisticKind::Portmanteau => "portmanteau",
            StatisticKind::Hong => "hong",
            StatisticKind::LjungBox => "ljungbox",
        }
    }
}
