use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use maxcorr_core::montecarlo::{
    table2_cells, Cell, DgpSpec, ErrorSpec, McConfig, DEFAULT_LEVELS,
};
use maxcorr_core::BlockRule;
use serde::{Deserialize, Serialize};

/// Simulation config as written in TOML.
///
/// ```toml
/// replications = 1000
/// seed = 42
/// levels = [0.01, 0.05, 0.10]
///
/// [[cell]]
/// process = "simple"
/// error = "iid"
/// n = 100
/// filter = "mean"
/// test = "maxcorr:dwb"
/// lag = ["fixed:5", "prop:0.5"]
/// draws = 500
/// block = "sqrt"
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub levels: Option<Vec<f64>>,
    #[serde(default, rename = "cell")]
    pub cells: Vec<CellEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub process: String,
    pub error: String,
    pub n: usize,
    pub filter: String,
    pub test: String,
    #[serde(default)]
    pub lag: Lags,
    pub draws: Option<usize>,
    pub block: Option<String>,
    /// Defaults to true exactly when the process is GARCH.
    pub standardize: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Lags {
    One(String),
    Many(Vec<String>),
}

impl Default for Lags {
    fn default() -> Self {
        Lags::One("fixed:5".into())
    }
}

impl Lags {
    fn items(&self) -> Vec<&str> {
        match self {
            Lags::One(s) => vec![s.as_str()],
            Lags::Many(v) => v.iter().map(String::as_str).collect(),
        }
    }
}

pub const DEFAULT_REPLICATIONS: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DRAWS: usize = 500;

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    Ok(toml::from_str(text)?)
}

pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_config(&text).with_context(|| format!("malformed config {}", path.display()))
}

impl ConfigFile {
    pub fn resolve(&self) -> Result<McConfig> {
        let mut cells = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            cells.extend(c.resolve().with_context(|| format!("cell {}", i + 1))?);
        }
        Ok(McConfig {
            cells,
            replications: self.replications.unwrap_or(DEFAULT_REPLICATIONS),
            levels: self.levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec()),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

impl CellEntry {
    fn resolve(&self) -> Result<Vec<Cell>> {
        let mut dgp = DgpSpec::new(self.process.parse()?, self.error.parse()?, self.n);
        if let Some(s) = self.standardize {
            dgp.error = ErrorSpec {
                kind: dgp.error.kind,
                standardize: s,
            };
        }
        let filter = self.filter.parse()?;
        let test = self.test.parse()?;
        let block: BlockRule = match &self.block {
            Some(b) => b.parse()?,
            None => BlockRule::SqrtN,
        };
        let draws = self.draws.unwrap_or(DEFAULT_DRAWS);
        let lags = self.lag.items();
        if lags.is_empty() {
            bail!("empty lag list");
        }
        lags.into_iter()
            .map(|l| {
                let mut cell = Cell::new(dgp, filter, test, l.parse()?);
                cell.draws = draws;
                cell.block = block;
                cell.validate()?;
                Ok(cell)
            })
            .collect()
    }
}

/// The bundled max-corr rows of the mean-filter design.
pub fn preset(name: &str, draws: usize) -> Result<Vec<Cell>> {
    match name {
        "table2" => Ok(table2_cells(draws)),
        other => bail!("unknown preset `{other}` (available: table2)"),
    }
}

#[derive(Debug, Serialize)]
pub struct CellTiming {
    pub description: String,
    pub seconds: f64,
}

/// Provenance of a simulation run; written next to the tables.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: &'static str,
    pub config: McConfig,
    pub seed: u64,
    pub threads: usize,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    pub stages: Vec<(String, f64)>,
    pub cells: Vec<CellTiming>,
}
