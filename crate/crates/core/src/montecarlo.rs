//! Simulation designs and the rejection-frequency engine.
//!
//! Every replication draws from `rng::stream(seed, &[cell_id, rep])`, where
//! `cell_id` hashes the cell's canonical description. Cells can therefore be
//! reordered, and replications scheduled on any number of threads, without
//! changing a single emitted number.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{BlockRule, BootstrapMethod, BootstrapSpec, Prepared, TestResult};
use crate::competing::{
    cvm_bootstrap_fitted, dv_q_test_prepared, hong_asymptotic, CvmBasis, DvMode, LrvKind,
    SpectralGrid,
};
use crate::error::{Error, Result};
use crate::filters::FilterSpec;
use crate::rng;
use crate::stats::{LagRule, Series, StatisticKind, WeightScheme};

/// Nominal levels reported by default.
pub const DEFAULT_LEVELS: [f64; 3] = [0.01, 0.05, 0.10];

/// Largest share of failed replications a cell tolerates.
pub const MAX_FAILURE_SHARE: f64 = 0.02;

const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Iid,
    /// `e = ν w`, `w²_t = 1 + .2 e²_{t-1} + .5 w²_{t-1}`, `w²_1 = 1`.
    Garch,
    /// `e_t = ν_t + .5 ν_{t-1} + .25 ν_{t-2}`.
    Ma2,
    /// `e_t = .7 e_{t-1} + ν_t`.
    Ar1,
    /// `e_t = ν_t + .25 ν_{t-q}`.
    RemoteMa(usize),
}

impl ErrorKind {
    /// Unconditional variance of the raw error.
    pub fn variance(self) -> f64 {
        match self {
            ErrorKind::Iid => 1.0,
            ErrorKind::Garch => 1.0 / (1.0 - 0.2 - 0.5),
            ErrorKind::Ma2 => 1.0 + 0.25 + 0.0625,
            ErrorKind::Ar1 => 1.0 / (1.0 - 0.49),
            ErrorKind::RemoteMa(_) => 1.0 + 0.0625,
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Iid => write!(f, "iid"),
            ErrorKind::Garch => write!(f, "garch"),
            ErrorKind::Ma2 => write!(f, "ma2"),
            ErrorKind::Ar1 => write!(f, "ar1"),
            ErrorKind::RemoteMa(q) => write!(f, "remote_ma:{q}"),
        }
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "iid" => ErrorKind::Iid,
            "garch" => ErrorKind::Garch,
            "ma2" => ErrorKind::Ma2,
            "ar1" => ErrorKind::Ar1,
            other => {
                let q = other
                    .strip_prefix("remote_ma:")
                    .or_else(|| other.strip_prefix("ma:"))
                    .and_then(|q| q.parse::<usize>().ok())
                    .filter(|q| *q >= 1)
                    .ok_or_else(|| Error::Invalid(format!("unknown error kind `{other}`")))?;
                ErrorKind::RemoteMa(q)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorSpec {
    pub kind: ErrorKind,
    /// Divide by the unconditional standard deviation.
    pub standardize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    Simple,
    /// `y_t = .5 e_{t-1} y_{t-2} + e_t`.
    Bilinear,
    /// `y_t = .3 y_{t-1} - .15 y_{t-2} + e_t`.
    Ar2,
    /// `y_t = σ_t e_t`, `σ²_t = 1 + .2 y²_{t-1} + .5 σ²_{t-1}`.
    Garch11,
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessKind::Simple => "simple",
            ProcessKind::Bilinear => "bilinear",
            ProcessKind::Ar2 => "ar2",
            ProcessKind::Garch11 => "garch",
        })
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" => Ok(ProcessKind::Simple),
            "bilinear" => Ok(ProcessKind::Bilinear),
            "ar2" => Ok(ProcessKind::Ar2),
            "garch" | "garch11" => Ok(ProcessKind::Garch11),
            other => Err(Error::Invalid(format!("unknown process `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DgpSpec {
    pub process: ProcessKind,
    pub error: ErrorSpec,
    pub n: usize,
}

impl DgpSpec {
    /// Errors are standardized exactly when the process is GARCH.
    pub fn new(process: ProcessKind, error: ErrorKind, n: usize) -> Self {
        Self {
            process,
            error: ErrorSpec {
                kind: error,
                standardize: process == ProcessKind::Garch11,
            },
            n,
        }
    }
}

impl fmt::Display for DgpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}{}/n={}",
            self.process,
            self.error.kind,
            if self.error.standardize { "(std)" } else { "" },
            self.n
        )
    }
}

/// Error sequence of `length` values.
pub fn gen_error<R: Rng + ?Sized>(spec: &ErrorSpec, length: usize, rng: &mut R) -> Vec<f64> {
    let mut nu = |k: usize| -> Vec<f64> { (0..k).map(|_| StandardNormal.sample(&mut *rng)).collect() };
    let mut e = match spec.kind {
        ErrorKind::Iid => nu(length),
        ErrorKind::Garch => {
            let v = nu(length);
            let mut out = Vec::with_capacity(length);
            let mut w2 = 1.0;
            for (t, z) in v.iter().enumerate() {
                if t > 0 {
                    let prev: f64 = out[t - 1];
                    w2 = 1.0 + 0.2 * prev * prev + 0.5 * w2;
                }
                out.push(z * f64::sqrt(w2));
            }
            out
        }
        ErrorKind::Ma2 => {
            let v = nu(length + 2);
            (0..length)
                .map(|t| v[t + 2] + 0.5 * v[t + 1] + 0.25 * v[t])
                .collect()
        }
        ErrorKind::Ar1 => {
            let v = nu(length);
            let mut prev = 0.0;
            v.iter()
                .map(|z| {
                    prev = 0.7 * prev + z;
                    prev
                })
                .collect()
        }
        ErrorKind::RemoteMa(q) => {
            let v = nu(length + q);
            (0..length).map(|t| v[t + q] + 0.25 * v[t]).collect()
        }
    };
    if spec.standardize {
        let sd = spec.kind.variance().sqrt();
        e.iter_mut().for_each(|v| *v /= sd);
    }
    e
}

/// A simulated sample and whether the overflow guard fired.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub values: Vec<f64>,
    pub overflow: bool,
}

/// Draw `2n` observations from the process and keep the last `n`.
pub fn gen_process<R: Rng + ?Sized>(spec: &DgpSpec, rng: &mut R) -> Generated {
    let total = 2 * spec.n;
    let e = gen_error(&spec.error, total, rng);
    let y = run_process(spec.process, &e);
    let overflow = y.iter().any(|v| !(v.abs() < OVERFLOW_LIMIT));
    Generated {
        values: y[total - spec.n..].to_vec(),
        overflow,
    }
}

/// Feed an error sequence through the process recursion (pre-sample values 0).
pub fn run_process(process: ProcessKind, e: &[f64]) -> Vec<f64> {
    let n = e.len();
    let mut y = vec![0.0; n];
    match process {
        ProcessKind::Simple => y.copy_from_slice(e),
        ProcessKind::Bilinear => {
            for t in 0..n {
                let lag = if t >= 2 { 0.5 * e[t - 1] * y[t - 2] } else { 0.0 };
                y[t] = lag + e[t];
            }
        }
        ProcessKind::Ar2 => {
            for t in 0..n {
                let y1 = if t >= 1 { y[t - 1] } else { 0.0 };
                let y2 = if t >= 2 { y[t - 2] } else { 0.0 };
                y[t] = 0.3 * y1 - 0.15 * y2 + e[t];
            }
        }
        ProcessKind::Garch11 => {
            let mut s2 = 1.0 / (1.0 - 0.2 - 0.5);
            for t in 0..n {
                if t > 0 {
                    s2 = 1.0 + 0.2 * y[t - 1] * y[t - 1] + 0.5 * s2;
                }
                y[t] = s2.sqrt() * e[t];
            }
        }
    }
    y
}

/// Which test a cell runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestKind {
    /// Bootstrapped correlation statistic (max-corr, portmanteau, Hong, Ljung-Box).
    Corr {
        stat: StatisticKind,
        method: BootstrapMethod,
    },
    /// Hong's statistic against N(0, 1).
    HongAsymptotic,
    Cvm {
        method: BootstrapMethod,
    },
    /// Orthogonalized Q-test; `method = None` uses the χ² reference.
    Dv {
        lrv: LrvKind,
        method: Option<BootstrapMethod>,
    },
}

impl TestKind {
    pub fn max_corr_dwb() -> Self {
        TestKind::Corr {
            stat: StatisticKind::MaxCorr,
            method: BootstrapMethod::Dwb,
        }
    }

    pub fn uses_lag(&self) -> bool {
        !matches!(self, TestKind::Cvm { .. })
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::Corr { stat, method } => write!(f, "{}:{method}", stat.name()),
            TestKind::HongAsymptotic => write!(f, "hong:asymptotic"),
            TestKind::Cvm { method } => write!(f, "cvm:{method}"),
            TestKind::Dv { lrv, method } => {
                let l = match lrv {
                    LrvKind::Identity => "identity",
                    LrvKind::Bartlett => "bartlett",
                };
                match method {
                    Some(m) => write!(f, "dv:{l}:{m}"),
                    None => write!(f, "dv:{l}:chi2"),
                }
            }
        }
    }
}

impl FromStr for TestKind {
    type Err = Error;

    /// `maxcorr:dwb`, `portmanteau:wb`, `hong:asymptotic`, `ljungbox:dwb`,
    /// `cvm:brwb`, `dv:bartlett:chi2`, `dv:identity:dwb`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split(':').collect();
        let bad = || Error::Invalid(format!("unknown test `{s}`"));
        let stat = |name: &str| match name {
            "maxcorr" | "max" => Some(StatisticKind::MaxCorr),
            "portmanteau" => Some(StatisticKind::Portmanteau),
            "hong" => Some(StatisticKind::Hong),
            "ljungbox" => Some(StatisticKind::LjungBox),
            _ => None,
        };
        match parts.as_slice() {
            ["hong", "asymptotic" | "normal"] => Ok(TestKind::HongAsymptotic),
            ["cvm", m] => Ok(TestKind::Cvm { method: m.parse()? }),
            ["cvm"] => Ok(TestKind::Cvm {
                method: BootstrapMethod::Dwb,
            }),
            ["dv", l, m] => {
                let lrv = match *l {
                    "identity" => LrvKind::Identity,
                    "bartlett" => LrvKind::Bartlett,
                    _ => return Err(bad()),
                };
                let method = match *m {
                    "chi2" | "asymptotic" => None,
                    other => Some(other.parse()?),
                };
                Ok(TestKind::Dv { lrv, method })
            }
            [name, m] => {
                let method: BootstrapMethod = m.parse()?;
                if method == BootstrapMethod::Brwb {
                    return Err(bad());
                }
                Ok(TestKind::Corr {
                    stat: stat(name).ok_or_else(bad)?,
                    method,
                })
            }
            [name] => Ok(TestKind::Corr {
                stat: stat(name).ok_or_else(bad)?,
                method: BootstrapMethod::Dwb,
            }),
            _ => Err(bad()),
        }
    }
}

/// One design point of a Monte Carlo study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub dgp: DgpSpec,
    pub filter: FilterSpec,
    pub test: TestKind,
    pub lag: LagRule,
    pub draws: usize,
    pub block: BlockRule,
}

impl Cell {
    pub fn new(dgp: DgpSpec, filter: FilterSpec, test: TestKind, lag: LagRule) -> Self {
        Self {
            dgp,
            filter,
            test,
            lag,
            draws: 500,
            block: BlockRule::SqrtN,
        }
    }

    /// Canonical text used for the cell id.
    pub fn describe(&self) -> String {
        format!(
            "{}|{}|{}|{}|M={}|b={}",
            self.dgp, self.filter, self.test, self.lag, self.draws, self.block
        )
    }

    pub fn id(&self) -> u64 {
        rng::fnv1a(self.describe().as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::Invalid("bootstrap draw count must be at least 1".into()));
        }
        let n = self.dgp.n.saturating_sub(self.filter.lost_observations());
        if n < 8 {
            return Err(Error::TooShort { min: 8, got: n });
        }
        if self.test.uses_lag() {
            let l = crate::stats::resolve_lag_rule(self.lag, n)?;
            if l.clipped {
                return Err(Error::LagOutOfRange { lag: l.lag + 1, n });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub cells: Vec<Cell>,
    pub replications: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
}

/// Run the test of `cell` on one sample with bootstrap seed `boot_seed`.
pub fn run_once(
    cell: &Cell,
    y: &[f64],
    boot_seed: u64,
    basis: Option<&CvmBasis>,
) -> Result<TestResult> {
    let series = Series::unlabeled(y.to_vec())?;
    let setup = TestSetup {
        filter: cell.filter,
        test: cell.test,
        lag: cell.lag,
        draws: cell.draws,
        block: cell.block,
        seed: boot_seed,
    };
    run_test(&series, &setup, basis)
}

/// Everything needed to run one test on one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSetup {
    pub filter: FilterSpec,
    pub test: TestKind,
    pub lag: LagRule,
    pub draws: usize,
    pub block: BlockRule,
    pub seed: u64,
}

impl TestSetup {
    fn bootstrap(&self, method: BootstrapMethod) -> BootstrapSpec {
        let mut spec = BootstrapSpec::with_method(method, self.draws, self.seed);
        if method != BootstrapMethod::Wb {
            spec.block = self.block;
        }
        spec
    }
}

/// Fit the filter and run the configured test. `basis` is reused when its
/// size matches the residual count.
pub fn run_test(series: &Series, setup: &TestSetup, basis: Option<&CvmBasis>) -> Result<TestResult> {
    match setup.test {
        TestKind::Corr { stat, method } => {
            let p = Prepared::new(series, setup.filter, setup.lag)?;
            let spec = setup.bootstrap(method);
            Ok(p.test_many(&[stat], &WeightScheme::Constant, &spec)?.remove(0))
        }
        TestKind::HongAsymptotic => {
            let p = Prepared::new(series, setup.filter, setup.lag)?;
            Ok(hong_asymptotic(&p.corrs))
        }
        TestKind::Cvm { method } => {
            let fitted = setup.filter.fit(series)?;
            let owned;
            let basis = match basis {
                Some(b) if b.n() == fitted.n() => b,
                _ => {
                    owned = CvmBasis::new(fitted.n(), &SpectralGrid::default())?;
                    &owned
                }
            };
            cvm_bootstrap_fitted(series, &fitted, None, &setup.bootstrap(method), basis)
        }
        TestKind::Dv { lrv, method } => {
            let p = Prepared::new(series, setup.filter, setup.lag)?;
            let mode = match method {
                None => DvMode::Asymptotic,
                Some(m) => DvMode::Bootstrap(setup.bootstrap(m)),
            };
            dv_q_test_prepared(&p.filter, &p.corrs, &p.expansion, lrv, mode)
        }
    }
}

/// Share of p-values strictly below each level.
pub fn rejection_frequencies(p_values: &[f64], levels: &[f64]) -> Vec<f64> {
    levels
        .iter()
        .map(|a| {
            if p_values.is_empty() {
                f64::NAN
            } else {
                p_values.iter().filter(|p| **p < *a).count() as f64 / p_values.len() as f64
            }
        })
        .collect()
}

/// Outcome of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub description: String,
    pub cell_id: u64,
    pub replications: usize,
    pub completed: usize,
    pub failures: usize,
    pub overflows: usize,
    pub frequencies: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Per-replication p-values in replication order (NaN for failures).
    #[serde(skip)]
    pub p_values: Vec<f64>,
    pub error: Option<String>,
}

/// Simulate `replications` samples of `cell` and record rejections at `levels`.
pub fn run_cell(cell: &Cell, replications: usize, seed: u64, levels: &[f64]) -> Result<CellResult> {
    if replications == 0 {
        return Err(Error::Invalid("replication count must be at least 1".into()));
    }
    cell.validate()?;
    let cell_id = cell.id();
    let basis = match cell.test {
        TestKind::Cvm { .. } => Some(CvmBasis::new(
            cell.dgp.n - cell.filter.lost_observations(),
            &SpectralGrid::default(),
        )?),
        _ => None,
    };
    let outcomes: Vec<(Option<f64>, bool)> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut r = rng::stream(seed, &[cell_id, rep as u64]);
            let sample = gen_process(&cell.dgp, &mut r);
            if sample.overflow {
                return (None, true);
            }
            let boot_seed = rng::derive_seed(seed, &[cell_id, rep as u64, 1]);
            let p = run_once(cell, &sample.values, boot_seed, basis.as_ref())
                .ok()
                .map(|t| t.p_value)
                .filter(|p| p.is_finite());
            (p, false)
        })
        .collect();
    let overflows = outcomes.iter().filter(|o| o.1).count();
    let p_values: Vec<f64> = outcomes.iter().map(|o| o.0.unwrap_or(f64::NAN)).collect();
    let ok: Vec<f64> = p_values.iter().copied().filter(|p| p.is_finite()).collect();
    let failures = replications - ok.len();
    let frequencies = rejection_frequencies(&ok, levels);
    let std_errors = frequencies
        .iter()
        .map(|p| (p * (1.0 - p) / ok.len().max(1) as f64).sqrt())
        .collect();
    let error = (failures as f64 > MAX_FAILURE_SHARE * replications as f64).then(|| {
        Error::TooManyFailures {
            failed: failures,
            total: replications,
        }
        .to_string()
    });
    Ok(CellResult {
        cell: *cell,
        description: cell.describe(),
        cell_id,
        replications,
        completed: ok.len(),
        failures,
        overflows,
        frequencies,
        std_errors,
        p_values,
        error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub levels: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub cells: Vec<CellResult>,
    /// Wall-clock seconds per cell; excluded from the serialized table.
    #[serde(skip)]
    pub timings: Vec<f64>,
}

impl RejectionTable {
    /// Delimited text, one row per cell, with frequency and standard error per level.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("process,error,n,filter,test,lag,M,block");
        for a in &self.levels {
            out.push_str(&format!(",rej_{}", pct(*a)));
        }
        for a in &self.levels {
            out.push_str(&format!(",se_{}", pct(*a)));
        }
        out.push_str(",completed,failures,status\n");
        for c in &self.cells {
            let cell = &c.cell;
            let error = if cell.dgp.error.standardize {
                format!("{}(std)", cell.dgp.error.kind)
            } else {
                cell.dgp.error.kind.to_string()
            };
            let lag = if cell.test.uses_lag() {
                cell.lag.to_string()
            } else {
                "all".into()
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}",
                cell.dgp.process, error, cell.dgp.n, cell.filter, cell.test, lag, cell.draws, cell.block
            ));
            for f in &c.frequencies {
                out.push_str(&format!(",{f:.3}"));
            }
            for s in &c.std_errors {
                out.push_str(&format!(",{s:.4}"));
            }
            let status = c.error.as_deref().unwrap_or("ok").replace(',', ";");
            out.push_str(&format!(",{},{},{}\n", c.completed, c.failures, status));
        }
        out
    }

    pub fn has_errors(&self) -> bool {
        self.cells.iter().any(|c| c.error.is_some())
    }
}

fn pct(a: f64) -> String {
    let v = a * 100.0;
    if (v - v.round()).abs() < 1e-9 {
        format!("{}pct", v.round() as i64)
    } else {
        format!("{v}pct")
    }
}

/// Evaluate every cell of `config`; cell-level failures are recorded, not raised.
pub fn run_table(config: &McConfig) -> Result<RejectionTable> {
    if config.replications == 0 {
        return Err(Error::Invalid("replication count must be at least 1".into()));
    }
    if let Some(a) = config.levels.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::Invalid(format!("nominal level {a} outside (0, 1)")));
    }
    for c in &config.cells {
        c.validate()?;
    }
    let mut cells = Vec::with_capacity(config.cells.len());
    let mut timings = Vec::with_capacity(config.cells.len());
    for c in &config.cells {
        let start = Instant::now();
        let result = run_cell(c, config.replications, config.seed, &config.levels);
        timings.push(start.elapsed().as_secs_f64());
        cells.push(match result {
            Ok(r) => r,
            Err(e) => CellResult {
                cell: *c,
                description: c.describe(),
                cell_id: c.id(),
                replications: config.replications,
                completed: 0,
                failures: config.replications,
                overflows: 0,
                frequencies: vec![f64::NAN; config.levels.len()],
                std_errors: vec![f64::NAN; config.levels.len()],
                p_values: Vec::new(),
                error: Some(e.to_string()),
            },
        });
    }
    Ok(RejectionTable {
        levels: config.levels.clone(),
        replications: config.replications,
        seed: config.seed,
        cells,
        timings,
    })
}

/// Max-corr DWB rows of the mean-filter design at `n ∈ {100, 500}` with
/// the three lag rules, for each error kind.
pub fn table2_cells(draws: usize) -> Vec<Cell> {
    let mut cells = Vec::new();
    for error in [ErrorKind::Iid, ErrorKind::Garch, ErrorKind::Ma2, ErrorKind::Ar1] {
        for n in [100, 500] {
            for lag in [
                LagRule::Fixed(5),
                LagRule::Proportional(0.5),
                LagRule::Proportional(1.0),
            ] {
                let mut c = Cell::new(
                    DgpSpec::new(ProcessKind::Simple, error, n),
                    FilterSpec::Mean,
                    TestKind::max_corr_dwb(),
                    lag,
                );
                c.draws = draws;
                cells.push(c);
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::sample_correlations;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rng::stream(seed, &[])
    }

    #[test]
    fn iid_variance() {
        let e = gen_error(
            &ErrorSpec {
                kind: ErrorKind::Iid,
                standardize: false,
            },
            100_000,
            &mut rng(1),
        );
        let v = e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64;
        assert!((v - 1.0).abs() < 0.02);
    }

    #[test]
    fn standardized_ma2_variance() {
        let e = gen_error(
            &ErrorSpec {
                kind: ErrorKind::Ma2,
                standardize: true,
            },
            100_000,
            &mut rng(2),
        );
        let v = e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64;
        assert!((v - 1.0).abs() < 0.03, "{v}");
    }

    #[test]
    fn garch_error_starts_at_unit_variance() {
        // w²_1 = 1, so the first error equals the first innovation.
        let spec = ErrorSpec {
            kind: ErrorKind::Garch,
            standardize: false,
        };
        let e = gen_error(&spec, 5, &mut rng(3));
        let mut r = rng(3);
        let z: f64 = StandardNormal.sample(&mut r);
        assert_eq!(e[0], z);
    }

    #[test]
    fn process_examples() {
        let e = [0.5, -1.0, 2.0, 0.3];
        assert_eq!(run_process(ProcessKind::Simple, &e), e.to_vec());
        assert!(run_process(ProcessKind::Ar2, &[0.0; 10]).iter().all(|v| *v == 0.0));
        let b = run_process(ProcessKind::Bilinear, &e);
        assert_eq!(b[2], 0.5 * e[1] * b[0] + e[2]);
    }

    #[test]
    fn bilinear_is_uncorrelated() {
        let spec = DgpSpec::new(ProcessKind::Bilinear, ErrorKind::Iid, 100_000);
        let y = gen_process(&spec, &mut rng(4)).values;
        let c = sample_correlations(&Series::unlabeled(y).unwrap(), 5).unwrap();
        for r in c.rhos() {
            assert!(r.abs() < 0.02, "{r}");
        }
    }

    #[test]
    fn frequencies_from_p_values() {
        assert_eq!(rejection_frequencies(&[1.0; 10], &DEFAULT_LEVELS), vec![0.0; 3]);
        let f = rejection_frequencies(&[0.0], &DEFAULT_LEVELS);
        assert_eq!(f, vec![1.0; 3]);
    }

    #[test]
    fn test_kind_roundtrip() {
        for s in [
            "maxcorr:dwb",
            "portmanteau:wb",
            "hong:asymptotic",
            "ljungbox:dwb",
            "cvm:brwb",
            "dv:bartlett:chi2",
            "dv:identity:dwb",
        ] {
            assert_eq!(s.parse::<TestKind>().unwrap().to_string(), s);
        }
        assert!("maxcorr:brwb".parse::<TestKind>().is_err());
    }

    #[test]
    fn single_replication_is_binary() {
        let c = Cell::new(
            DgpSpec::new(ProcessKind::Simple, ErrorKind::Iid, 100),
            FilterSpec::Mean,
            TestKind::max_corr_dwb(),
            LagRule::Fixed(5),
        );
        let r = run_cell(&c, 1, 9, &DEFAULT_LEVELS).unwrap();
        assert!(r.frequencies.iter().all(|f| *f == 0.0 || *f == 1.0));
    }
}
