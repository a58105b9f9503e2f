//! Dependent wild, wild and block-wise random weighting bootstraps.
//!
//! Draw `i` of a bootstrap with master seed `seed` always consumes the stream
//! `rng::stream(seed, &[i])`, so draws can be produced in any order (or in
//! parallel) and different statistics computed on the same residuals share
//! their multipliers exactly.

use std::ops::Range;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::competing::{cvm_from_gammas, CvmBasis, SpectralGrid};
use crate::error::{Error, Result};
use crate::filters::{compute_expansion, ExpansionSet, FilterSpec, FittedFilter};
use crate::rng;
use crate::stats::{
    autocov_unchecked, resolve_lag_rule, resolve_weights, CorrelationSet, LagRule, Series,
    StatisticKind, WeightScheme,
};

/// Contiguous blocks `B_s` covering `0..n` (0-based here).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockScheme {
    n: usize,
    block_len: usize,
    blocks: Vec<Range<usize>>,
}

impl BlockScheme {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of observation `t` (0-based).
    pub fn block_of(&self, t: usize) -> usize {
        t / self.block_len
    }
}

/// Partition `0..n` into blocks of length `b`; a short remainder forms its own block.
pub fn make_blocks(n: usize, b: usize) -> Result<BlockScheme> {
    if b == 0 || b >= n {
        return Err(Error::InvalidBlockSize { block: b, n });
    }
    let blocks = (0..n.div_ceil(b))
        .map(|s| s * b..((s + 1) * b).min(n))
        .collect();
    Ok(BlockScheme {
        n,
        block_len: b,
        blocks,
    })
}

/// Standard normal multipliers, one per block, from `rng`.
pub fn draw_block_multipliers(nblocks: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..nblocks).map(|_| StandardNormal.sample(rng)).collect()
}

/// `φ_t = ξ_s` for `t ∈ B_s`.
pub fn draw_auxiliary(scheme: &BlockScheme, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let xi = draw_block_multipliers(scheme.len(), rng);
    expand_to_time(scheme, &xi)
}

pub(crate) fn expand_to_time(scheme: &BlockScheme, per_block: &[f64]) -> Vec<f64> {
    let mut phi = vec![0.0; scheme.n];
    for (b, v) in scheme.blocks.iter().zip(per_block) {
        phi[b.clone()].fill(*v);
    }
    phi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMethod {
    Dwb,
    Wb,
    Brwb,
}

impl std::fmt::Display for BootstrapMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BootstrapMethod::Dwb => "dwb",
            BootstrapMethod::Wb => "wb",
            BootstrapMethod::Brwb => "brwb",
        })
    }
}

impl std::str::FromStr for BootstrapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dwb" => Ok(BootstrapMethod::Dwb),
            "wb" => Ok(BootstrapMethod::Wb),
            "brwb" => Ok(BootstrapMethod::Brwb),
            other => Err(Error::Invalid(format!("unknown bootstrap `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockRule {
    /// `b = ⌊√n⌋`.
    SqrtN,
    Fixed(usize),
}

impl BlockRule {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            BlockRule::SqrtN => ((n as f64).sqrt().floor() as usize).max(1),
            BlockRule::Fixed(b) => b,
        }
    }
}

impl std::fmt::Display for BlockRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockRule::SqrtN => f.write_str("sqrt"),
            BlockRule::Fixed(b) => write!(f, "{b}"),
        }
    }
}

impl std::str::FromStr for BlockRule {
    type Err = Error;

    /// `sqrt` or a positive block length.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "sqrt" || t == "sqrt_n" {
            return Ok(BlockRule::SqrtN);
        }
        match t.parse::<usize>() {
            Ok(b) if b >= 1 => Ok(BlockRule::Fixed(b)),
            _ => Err(Error::Invalid(format!("unknown block rule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BootstrapSpec {
    pub method: BootstrapMethod,
    pub block: BlockRule,
    pub draws: usize,
    pub seed: u64,
    pub recenter: bool,
}

impl BootstrapSpec {
    pub fn dwb(draws: usize, seed: u64) -> Self {
        Self {
            method: BootstrapMethod::Dwb,
            block: BlockRule::SqrtN,
            draws,
            seed,
            recenter: true,
        }
    }

    pub fn wb(draws: usize, seed: u64) -> Self {
        reduce_to_wild(Self::dwb(draws, seed))
    }

    pub fn brwb(draws: usize, seed: u64) -> Self {
        Self {
            method: BootstrapMethod::Brwb,
            recenter: false,
            ..Self::dwb(draws, seed)
        }
    }

    pub fn with_method(method: BootstrapMethod, draws: usize, seed: u64) -> Self {
        match method {
            BootstrapMethod::Dwb => Self::dwb(draws, seed),
            BootstrapMethod::Wb => Self::wb(draws, seed),
            BootstrapMethod::Brwb => Self::brwb(draws, seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::Invalid("bootstrap draw count must be at least 1".into()));
        }
        if self.block == BlockRule::Fixed(0) {
            return Err(Error::InvalidBlockSize { block: 0, n: 0 });
        }
        Ok(())
    }

    pub fn block_len(&self, n: usize) -> usize {
        self.block.resolve(n)
    }
}

/// Wild bootstrap: unit blocks, no recentering.
pub fn reduce_to_wild(spec: BootstrapSpec) -> BootstrapSpec {
    BootstrapSpec {
        method: BootstrapMethod::Wb,
        block: BlockRule::Fixed(1),
        recenter: false,
        ..spec
    }
}

/// `ρ̂*(h)`, `h = 1..=L`, evaluated straight from the defining sum:
/// `[(1/n) Σ_{t>h} φ_t (Ê_{t,h} - c_h)] / [(1/n) Σ ε²_t]` with
/// `c_h = (1/n) Σ_{s>h} Ê_{s,h}` (zero when `recenter` is off).
pub fn bootstrap_correlations(
    expansion: &ExpansionSet,
    phi: &[f64],
    max_lag: usize,
    recenter: bool,
) -> Result<Vec<f64>> {
    let n = expansion.n();
    if phi.len() != n {
        return Err(Error::Invalid(format!(
            "{} multipliers for {} residuals",
            phi.len(),
            n
        )));
    }
    if max_lag == 0 || max_lag > expansion.max_lag() {
        return Err(Error::LagOutOfRange { lag: max_lag, n });
    }
    let gamma0 = expansion.gamma0();
    if !(gamma0 > 0.0) {
        return Err(Error::DegenerateSeries);
    }
    let nf = n as f64;
    Ok((1..=max_lag)
        .map(|h| {
            let e = expansion.e_lag(h);
            let c = if recenter {
                e.iter().sum::<f64>() / nf
            } else {
                0.0
            };
            let num: f64 = e.iter().zip(&phi[h..]).map(|(v, p)| p * (v - c)).sum();
            num / nf / gamma0
        })
        .collect())
}

/// Per-block sums of the (recentered) expansion variables.
///
/// With block multipliers `ξ`, the bootstrapped quantity at lag `h` is
/// `Σ_s ξ_s K[s][h]`, which matches the per-observation sum up to
/// floating-point reassociation.
#[derive(Debug, Clone)]
pub struct DrawKernel {
    nblocks: usize,
    lags: usize,
    /// Row-major `nblocks × lags`.
    k: Vec<f64>,
}

impl DrawKernel {
    /// `normalize` divides by `γ̂(0)` (correlations) instead of leaving autocovariances.
    pub fn new(
        expansion: &ExpansionSet,
        scheme: &BlockScheme,
        lags: usize,
        recenter: bool,
        normalize: bool,
    ) -> Result<Self> {
        let n = expansion.n();
        if scheme.n() != n {
            return Err(Error::Invalid(format!(
                "block scheme covers {} observations, residuals {}",
                scheme.n(),
                n
            )));
        }
        if lags == 0 || lags > expansion.max_lag() {
            return Err(Error::LagOutOfRange { lag: lags, n });
        }
        let nf = n as f64;
        let scale = if normalize {
            nf * expansion.gamma0()
        } else {
            nf
        };
        let nblocks = scheme.len();
        let mut k = vec![0.0; nblocks * lags];
        for h in 1..=lags {
            let e = expansion.e_lag(h);
            let c = if recenter {
                e.iter().sum::<f64>() / nf
            } else {
                0.0
            };
            for (j, v) in e.iter().enumerate() {
                let t = h + j;
                k[scheme.block_of(t) * lags + h - 1] += v - c;
            }
        }
        k.iter_mut().for_each(|v| *v /= scale);
        Ok(Self { nblocks, lags, k })
    }

    pub fn nblocks(&self) -> usize {
        self.nblocks
    }

    pub fn lags(&self) -> usize {
        self.lags
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.k[s * self.lags..(s + 1) * self.lags]
    }

    /// `out[h-1] = Σ_s ξ_s K[s][h]`.
    pub fn apply(&self, xi: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (s, x) in xi.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.row(s)) {
                *o += x * v;
            }
        }
    }

    /// Kernel as an `nblocks × lags` matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.nblocks, self.lags, &self.k)
    }

    /// Kernel built from an explicit matrix (used for transformed kernels).
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let (nblocks, lags) = m.shape();
        let mut k = Vec::with_capacity(nblocks * lags);
        for r in 0..nblocks {
            k.extend(m.row(r).iter());
        }
        Self { nblocks, lags, k }
    }
}

const PAR_MIN_LEN: usize = 64;

/// Evaluate `stat` on the multipliers of draws `0..m`, in draw order.
pub fn collect_draws<F>(seed: u64, m: usize, nblocks: usize, stat: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..m)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|i| {
            let mut r = rng::stream(seed, &[i as u64]);
            stat(&draw_block_multipliers(nblocks, &mut r))
        })
        .collect()
}

/// Several statistics per draw on shared multipliers; returns one vector per statistic.
pub fn collect_draws_multi<F>(
    seed: u64,
    m: usize,
    nblocks: usize,
    nstat: usize,
    stat: F,
) -> Vec<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|i| {
            let mut r = rng::stream(seed, &[i as u64]);
            let xi = draw_block_multipliers(nblocks, &mut r);
            let mut out = vec![0.0; nstat];
            stat(&xi, &mut out);
            out
        })
        .collect();
    (0..nstat)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

/// `(1/M) #{draws ≥ statistic}`; NaN draws never count.
pub fn p_value(statistic: f64, draws: &[f64]) -> f64 {
    if draws.is_empty() {
        return f64::NAN;
    }
    draws.iter().filter(|d| **d >= statistic).count() as f64 / draws.len() as f64
}

/// Reference distribution used for a p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Reference {
    Bootstrap {
        method: BootstrapMethod,
        block_len: usize,
        draws: usize,
        seed: u64,
        recenter: bool,
        discarded: usize,
    },
    StandardNormal,
    ChiSquared {
        df: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub reference: Reference,
    pub n: usize,
    pub lag: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub draws: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl TestResult {
    /// Reject at level `alpha` iff `p < alpha`.
    pub fn reject(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

pub(crate) fn bootstrap_reference(spec: &BootstrapSpec, block_len: usize, discarded: usize) -> Reference {
    Reference::Bootstrap {
        method: spec.method,
        block_len,
        draws: spec.draws,
        seed: spec.seed,
        recenter: spec.recenter,
        discarded,
    }
}

/// Observed correlations and expansion of a fitted filter, ready for resampling.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub filter: FittedFilter,
    pub corrs: CorrelationSet,
    pub expansion: ExpansionSet,
    pub lag_clipped: bool,
}

impl Prepared {
    pub fn new(series: &Series, filter: FilterSpec, lag_rule: LagRule) -> Result<Self> {
        let fitted = filter.fit(series)?;
        Self::from_fitted(fitted, lag_rule)
    }

    pub fn from_fitted(filter: FittedFilter, lag_rule: LagRule) -> Result<Self> {
        let n = filter.n();
        let lag = resolve_lag_rule(lag_rule, n)?;
        let expansion = compute_expansion(&filter, lag.lag)?;
        let corrs = CorrelationSet::from_values(filter.residuals(), lag.lag)?;
        Ok(Self {
            filter,
            corrs,
            expansion,
            lag_clipped: lag.clipped,
        })
    }

    pub fn n(&self) -> usize {
        self.corrs.n()
    }

    pub fn lag(&self) -> usize {
        self.corrs.max_lag()
    }

    pub fn kernel(&self, spec: &BootstrapSpec) -> Result<(BlockScheme, DrawKernel)> {
        let scheme = make_blocks(self.n(), spec.block_len(self.n()))?;
        let kernel = DrawKernel::new(&self.expansion, &scheme, self.lag(), spec.recenter, true)?;
        Ok((scheme, kernel))
    }

    /// Bootstrap several correlation statistics on shared draws.
    pub fn test_many(
        &self,
        kinds: &[StatisticKind],
        weights: &WeightScheme,
        spec: &BootstrapSpec,
    ) -> Result<Vec<TestResult>> {
        spec.validate()?;
        if spec.method == BootstrapMethod::Brwb {
            return Err(Error::Invalid(
                "the random weighting bootstrap applies to the spectral statistic only".into(),
            ));
        }
        let n = self.n();
        let lag = self.lag();
        let w = resolve_weights(weights, n, lag)?;
        let (scheme, kernel) = self.kernel(spec)?;
        let observed: Vec<f64> = kinds
            .iter()
            .map(|k| k.evaluate(self.corrs.rhos(), w.values(), n))
            .collect();
        let draws = collect_draws_multi(spec.seed, spec.draws, kernel.nblocks(), kinds.len(), |xi, out| {
            let mut rho = vec![0.0; lag];
            kernel.apply(xi, &mut rho);
            for (o, k) in out.iter_mut().zip(kinds) {
                *o = k.evaluate(&rho, w.values(), n);
            }
        });
        let mut warnings = Vec::new();
        if self.lag_clipped {
            warnings.push(format!("lag rule clipped to n - 1 = {lag}"));
        }
        if self.filter.boundary() {
            warnings.push("GARCH estimate on the alpha + beta = 1 boundary".into());
        }
        Ok(kinds
            .iter()
            .zip(observed)
            .zip(draws)
            .map(|((k, stat), d)| TestResult {
                test: k.name().to_string(),
                statistic: stat,
                p_value: p_value(stat, &d),
                reference: bootstrap_reference(spec, scheme.block_len(), 0),
                n,
                lag: Some(lag),
                draws: d,
                warnings: warnings.clone(),
            })
            .collect())
    }
}

/// Fit, expand, and bootstrap one correlation statistic.
pub fn bootstrap_test(
    series: &Series,
    filter: FilterSpec,
    lag_rule: LagRule,
    weights: &WeightScheme,
    kind: StatisticKind,
    spec: &BootstrapSpec,
) -> Result<TestResult> {
    let prepared = Prepared::new(series, filter, lag_rule)?;
    Ok(prepared
        .test_many(&[kind], weights, spec)?
        .pop()
        .expect("one statistic requested"))
}

/// Two-point random weights with mean 1 and variance 1.
pub const BRWB_LOW: f64 = 0.381_966_011_250_105_1; // (3 - √5)/2
pub const BRWB_HIGH: f64 = 2.618_033_988_749_895; // (3 + √5)/2
/// `P[δ = low] = (1 + √5) / (2√5)`.
pub const BRWB_P_LOW: f64 = 0.723_606_797_749_979;

pub fn draw_brwb_weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<f64>() < BRWB_P_LOW {
        BRWB_LOW
    } else {
        BRWB_HIGH
    }
}

/// Maximum share of discarded random-weighting re-fits.
pub const BRWB_MAX_DISCARD: f64 = 0.05;

/// Block-wise random weighting bootstrap of the spectral Cramér-von Mises
/// statistic, with the first-order expansion in the re-estimated autocovariances.
pub fn brwb_test(series: &Series, filter: FilterSpec, spec: &BootstrapSpec) -> Result<TestResult> {
    brwb_test_on_grid(series, filter, spec, &SpectralGrid::default())
}

pub fn brwb_test_on_grid(
    series: &Series,
    filter: FilterSpec,
    spec: &BootstrapSpec,
    grid: &SpectralGrid,
) -> Result<TestResult> {
    spec.validate()?;
    let fitted = filter.fit(series)?;
    let basis = CvmBasis::new(fitted.n(), grid)?;
    brwb_from_fitted(series, &fitted, spec, &basis)
}

/// Everything a random-weighting draw needs besides its weights.
pub(crate) struct BrwbContext<'a> {
    y: &'a [f64],
    fitted: &'a FittedFilter,
    basis: &'a CvmBasis,
    gammas: Vec<f64>,
    s_obs: Vec<f64>,
    /// `v_h = Â' D̂(h)`, so that `D̂(h)' Â m = v_h · m`.
    v: Vec<Vec<f64>>,
}

impl<'a> BrwbContext<'a> {
    pub(crate) fn new(series: &'a Series, fitted: &'a FittedFilter, basis: &'a CvmBasis) -> Result<Self> {
        let eps = fitted.residuals();
        let n = eps.len();
        if basis.n() != n {
            return Err(Error::Invalid(format!(
                "spectral basis built for n = {}, residuals have {n}",
                basis.n()
            )));
        }
        let max_lag = n - 1;
        let expansion = compute_expansion(fitted, max_lag)?;
        let k = fitted.k();
        let gammas: Vec<f64> = (1..=max_lag).map(|h| autocov_unchecked(eps, h)).collect();
        let s_obs = basis.process(&gammas, n);
        let a = fitted.a_hat();
        let v = (1..=max_lag)
            .map(|h| {
                let d = expansion.d_hat(h);
                (0..k).map(|j| (0..k).map(|i| d[i] * a[(i, j)]).sum()).collect()
            })
            .collect();
        Ok(Self {
            y: series.values(),
            fitted,
            basis,
            gammas,
            s_obs,
            v,
        })
    }

    pub(crate) fn statistic(&self) -> f64 {
        cvm_from_gammas(&self.gammas, self.fitted.n(), self.basis)
    }

    /// `Δ(λ) = S*(λ) - S(λ) - Z(λ)` on the grid, or `None` if the re-fit fails.
    pub(crate) fn delta(&self, w: &[f64]) -> Option<Vec<f64>> {
        let n = self.fitted.n();
        let nf = n as f64;
        let refit = self.fitted.spec().fit_values(self.y, Some(w)).ok()?;
        let es = refit.residuals();
        let max_lag = n - 1;
        let mut gstar = vec![0.0; max_lag];
        for h in 1..=max_lag {
            let vh = &self.v[h - 1];
            let mut acc = 0.0;
            for t in h..n {
                let corr: f64 = vh.iter().zip(refit.m(t)).map(|(a, b)| a * b).sum();
                acc += w[t] * (es[t] * es[t - h] - corr);
            }
            gstar[h - 1] = acc / nf;
        }
        let mut suffix = vec![0.0; n + 1];
        for t in (0..n).rev() {
            suffix[t] = suffix[t + 1] + w[t];
        }
        // Z(λ) = n^{-1/2} Σ_h (Σ_{t>h} ω_t - n + h) γ̂(h) ψ_h(λ), written as a
        // process in the scaled coefficients below.
        let zc: Vec<f64> = (1..=max_lag)
            .map(|h| (suffix[h] - nf + h as f64) * self.gammas[h - 1] / nf)
            .collect();
        let s_star = self.basis.process(&gstar, n);
        let z = self.basis.process(&zc, n);
        let d: Vec<f64> = s_star
            .iter()
            .zip(&self.s_obs)
            .zip(&z)
            .map(|((a, b), c)| a - b - c)
            .collect();
        d.iter().all(|v| v.is_finite()).then_some(d)
    }

    pub(crate) fn draw(&self, w: &[f64]) -> Option<f64> {
        self.delta(w)
            .map(|d| d.iter().map(|v| v * v).sum::<f64>() * self.basis.width())
    }
}

pub(crate) fn brwb_from_fitted(
    series: &Series,
    fitted: &FittedFilter,
    spec: &BootstrapSpec,
    basis: &CvmBasis,
) -> Result<TestResult> {
    let n = fitted.n();
    let ctx = BrwbContext::new(series, fitted, basis)?;
    let statistic = ctx.statistic();
    let block_len = spec.block_len(n);
    let scheme = make_blocks(n, block_len)?;
    let outcomes: Vec<Option<f64>> = (0..spec.draws)
        .into_par_iter()
        .with_min_len(8)
        .map(|i| {
            let mut r = rng::stream(spec.seed, &[i as u64]);
            let per_block: Vec<f64> = (0..scheme.len()).map(|_| draw_brwb_weight(&mut r)).collect();
            ctx.draw(&expand_to_time(&scheme, &per_block))
        })
        .collect();
    let discarded = outcomes.iter().filter(|o| o.is_none()).count();
    if discarded as f64 > BRWB_MAX_DISCARD * spec.draws as f64 {
        return Err(Error::TooManyFailures {
            failed: discarded,
            total: spec.draws,
        });
    }
    let draws: Vec<f64> = outcomes.into_iter().flatten().collect();
    let mut warnings = Vec::new();
    if discarded > 0 {
        warnings.push(format!("{discarded} weighted re-fits discarded"));
    }
    Ok(TestResult {
        test: "cvm".into(),
        statistic,
        p_value: p_value(statistic, &draws),
        reference: bootstrap_reference(spec, block_len, discarded),
        n,
        lag: None,
        draws,
        warnings,
    })
}
