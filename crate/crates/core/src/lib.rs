//! Bootstrapped max-correlation white noise tests.
//!
//! The crate tests whether an observed series, or the residuals of a fitted
//! plug-in model, are serially uncorrelated. The headline statistic is the
//! largest weighted sample autocorrelation over lags `1..=L`,
//! `√n max_h |ω(h) ρ̂(h)|`, calibrated by a dependent wild bootstrap that
//! works on a first-order expansion of the residual autocovariances so that
//! estimation error in the plug-in is accounted for.
//!
//! Module map:
//!
//! * [`stats`]: autocovariances, lag rules, weights, statistic transforms.
//! * [`filters`]: mean, AR least squares and GARCH(1,1) QML plug-ins and the
//!   expansion objects.
//! * [`bootstrap`]: dependent wild, wild and block-wise random weighting
//!   bootstraps.
//! * [`competing`]: Hong, Ljung-Box, spectral Cramér-von Mises and the
//!   orthogonalized Q-test.
//! * [`montecarlo`]: data generating processes and the rejection-frequency
//!   engine.

// Negated comparisons are how NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bootstrap;
pub mod competing;
pub mod error;
pub mod filters;
pub mod montecarlo;
pub mod rng;
pub mod stats;

pub use bootstrap::{
    bootstrap_test, BlockRule, BlockScheme, BootstrapMethod, BootstrapSpec, TestResult,
};
pub use error::{Error, Result};
pub use filters::{compute_expansion, ExpansionSet, FilterSpec, FittedFilter};
pub use stats::{
    resolve_lag_rule, resolve_weights, sample_autocovariance, sample_correlations,
    CorrelationSet, LagRule, LagWeights, Series, StatisticKind, WeightScheme,
};
