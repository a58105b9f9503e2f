use std::fmt::Write as _;

use maxcorr_core::bootstrap::Reference;
use maxcorr_core::montecarlo::{run_test, TestKind, TestSetup};
use maxcorr_core::{resolve_lag_rule, CorrelationSet, Series};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report {
    pub input: String,
    pub observations: usize,
    pub filter: String,
    pub theta: Vec<f64>,
    pub converged: bool,
    pub boundary: bool,
    pub residuals: usize,
    pub test: String,
    pub lag_rule: String,
    /// False when the statistic uses every lag (the correlogram still stops at `lag`).
    pub uses_lag: bool,
    pub lag: usize,
    pub lag_clipped: bool,
    pub reference: Reference,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub correlogram: Vec<(usize, f64)>,
    pub warnings: Vec<String>,
}

pub fn build(
    input: &str,
    series: &Series,
    setup: &TestSetup,
    alpha: f64,
) -> maxcorr_core::Result<Report> {
    let fitted = setup.filter.fit(series)?;
    let n = fitted.n();
    let lag = resolve_lag_rule(setup.lag, n)?;
    let result = run_test(series, setup, None)?;
    let corrs = CorrelationSet::from_values(fitted.residuals(), lag.lag)?;
    let mut warnings = result.warnings.clone();
    if lag.clipped && !warnings.iter().any(|w| w.contains("clipped")) {
        warnings.push(format!("lag rule clipped to n - 1 = {}", lag.lag));
    }
    Ok(Report {
        input: input.to_string(),
        observations: series.len(),
        filter: setup.filter.to_string(),
        theta: fitted.theta().to_vec(),
        converged: fitted.converged(),
        boundary: fitted.boundary(),
        residuals: n,
        test: setup.test.to_string(),
        lag_rule: setup.lag.to_string(),
        uses_lag: setup.test.uses_lag(),
        lag: lag.lag,
        lag_clipped: lag.clipped,
        reference: result.reference.clone(),
        statistic: result.statistic,
        p_value: result.p_value,
        alpha,
        reject: result.reject(alpha),
        correlogram: (1..=lag.lag).map(|h| (h, corrs.rho(h))).collect(),
        warnings,
    })
}

/// Combine `--test`, `--bootstrap` and `--lrv` into a test id.
pub fn test_kind(test: &str, bootstrap: &str, lrv: &str) -> maxcorr_core::Result<TestKind> {
    let t = test.trim().to_ascii_lowercase();
    let id = if t.contains(':') {
        t
    } else if t == "dv" {
        format!("dv:{lrv}:{bootstrap}")
    } else {
        format!("{t}:{bootstrap}")
    };
    id.parse()
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let fmt_vec = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:.6}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(s, "input       {} ({} observations)", self.input, self.observations);
        if self.theta.is_empty() {
            let _ = writeln!(s, "filter      {}", self.filter);
        } else {
            let _ = writeln!(s, "filter      {}  theta = [{}]", self.filter, fmt_vec(&self.theta));
        }
        if self.boundary {
            let _ = writeln!(s, "            estimate on the stationarity boundary");
        }
        let _ = writeln!(s, "residuals   {}", self.residuals);
        let _ = writeln!(s, "test        {}", self.test);
        if self.uses_lag {
            let _ = writeln!(s, "lag         L = {} ({})", self.lag, self.lag_rule);
        } else {
            let _ = writeln!(s, "lag         all lags 1..{}", self.residuals - 1);
        }
        match &self.reference {
            Reference::Bootstrap {
                method,
                block_len,
                draws,
                seed,
                recenter,
                discarded,
            } => {
                let _ = write!(
                    s,
                    "reference   {method} bootstrap, M = {draws}, b = {block_len}, seed = {seed}, recenter = {recenter}"
                );
                if *discarded > 0 {
                    let _ = write!(s, ", {discarded} draws discarded");
                }
                s.push('\n');
            }
            Reference::StandardNormal => {
                let _ = writeln!(s, "reference   N(0, 1)");
            }
            Reference::ChiSquared { df } => {
                let _ = writeln!(s, "reference   chi-squared({df})");
            }
        }
        let _ = writeln!(s, "statistic   {:.6}", self.statistic);
        let _ = writeln!(s, "p-value     {:.4}", self.p_value);
        let _ = writeln!(
            s,
            "decision    {} at alpha = {}",
            if self.reject { "reject white noise" } else { "do not reject" },
            self.alpha
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning     {w}");
        }
        let _ = writeln!(s, "correlogram");
        for (h, r) in &self.correlogram {
            let _ = writeln!(s, "  {h:>4}  {r:>9.5}");
        }
        s
    }
}
