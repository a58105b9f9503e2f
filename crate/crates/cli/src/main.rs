//! `maxcorr`: white noise tests on a series, and Monte Carlo rejection tables.

mod input;
mod report;
mod simulate;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use maxcorr_core::montecarlo::{run_table, McConfig, TestSetup, DEFAULT_LEVELS};
use maxcorr_core::{BlockRule, FilterSpec, LagRule, Series};

use simulate::{CellTiming, RunManifest};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "maxcorr", version, about = "Bootstrapped max-correlation white noise tests")]
struct Cli {
    /// Worker threads (never changes results).
    #[arg(long, global = true, env = "MAXCORR_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a single-column series for white noise.
    Test(TestArgs),
    /// Run a Monte Carlo rejection-frequency study.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct TestArgs {
    /// Single-column numeric file, optional header line.
    input: PathBuf,
    /// none, mean, ar:p, ar:p:nointercept, garch
    #[arg(long, default_value = "mean")]
    filter: FilterSpec,
    /// maxcorr, portmanteau, hong, ljungbox, cvm, dv, or a full id such as hong:asymptotic
    #[arg(long, default_value = "maxcorr")]
    test: String,
    /// dwb, wb, brwb (CvM only), or chi2 (DV only)
    #[arg(long, default_value = "dwb")]
    bootstrap: String,
    /// Long-run variance for the DV test: bartlett or identity
    #[arg(long, default_value = "bartlett")]
    lrv: String,
    /// fixed:L, L, or prop:delta for trunc(delta n / ln n)
    #[arg(long, default_value = "fixed:5")]
    lag: LagRule,
    /// Bootstrap draws
    #[arg(long = "M", short = 'M', visible_alias = "draws", default_value_t = 500)]
    draws: usize,
    /// Block length: sqrt or an integer
    #[arg(long, default_value = "sqrt")]
    block: BlockRule,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Print the structured report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML config with [[cell]] sections
    config: Option<PathBuf>,
    /// Bundled design instead of a config file (table2)
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Replications per cell (overrides the config)
    #[arg(long)]
    reps: Option<usize>,
    /// Bootstrap draws per replication for presets
    #[arg(long, default_value_t = simulate::DEFAULT_DRAWS)]
    draws: usize,
    /// Master seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for table.csv, table.json and manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of CSV when no output directory is given
    #[arg(long)]
    json: bool,
}

enum Failure {
    Input(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let numeric = e
            .chain()
            .filter_map(|c| c.downcast_ref::<maxcorr_core::Error>())
            .any(maxcorr_core::Error::is_numeric);
        if numeric {
            Failure::Numeric(e)
        } else {
            Failure::Input(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads(cli.threads).map_err(Failure::from).and_then(|threads| {
        match cli.command {
            Command::Test(args) => cmd_test(&args).map_err(Failure::from),
            Command::Simulate(args) => cmd_simulate(&args, threads),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e:#}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<usize> {
    if let Some(k) = threads {
        if k == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("cannot start the thread pool")?;
    }
    Ok(rayon::current_num_threads())
}

fn cmd_test(args: &TestArgs) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        bail!("--alpha must lie in (0, 1)");
    }
    let values = input::read_series(&args.input)?;
    let series = Series::new(values, args.input.display().to_string())?;
    let setup = TestSetup {
        filter: args.filter,
        test: report::test_kind(&args.test, &args.bootstrap, &args.lrv)?,
        lag: args.lag,
        draws: args.draws,
        block: args.block,
        seed: args.seed,
    };
    let report = report::build(series.label(), &series, &setup, args.alpha)?;
    if args.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))
    } else {
        emit(&report.to_text())
    }
}

fn cmd_simulate(args: &SimulateArgs, threads: usize) -> std::result::Result<(), Failure> {
    let started = Instant::now();
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut config = resolve_config(args)?;
    if let Some(r) = args.reps {
        config.replications = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if config.replications == 0 {
        return Err(Failure::Input(anyhow::anyhow!("--reps must be at least 1")));
    }
    let resolved = started.elapsed().as_secs_f64();

    let table = run_table(&config).map_err(|e| Failure::from(anyhow::Error::from(e)))?;
    let simulated = started.elapsed().as_secs_f64() - resolved;

    match &args.out {
        Some(dir) => {
            let write_start = Instant::now();
            write_outputs(dir, &table).map_err(Failure::Input)?;
            let manifest = RunManifest {
                command: std::env::args().collect(),
                version: env!("CARGO_PKG_VERSION"),
                seed: config.seed,
                config: config.clone(),
                threads,
                started_unix,
                wall_clock_seconds: started.elapsed().as_secs_f64(),
                stages: vec![
                    ("resolve".into(), resolved),
                    ("simulate".into(), simulated),
                    ("write".into(), write_start.elapsed().as_secs_f64()),
                ],
                cells: table
                    .cells
                    .iter()
                    .zip(&table.timings)
                    .map(|(c, t)| CellTiming {
                        description: c.description.clone(),
                        seconds: *t,
                    })
                    .collect(),
            };
            let path = dir.join("manifest.json");
            fs::write(&path, serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Input(e.into()))?)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(Failure::Input)?;
            eprintln!(
                "wrote {} cells to {} in {:.1}s",
                table.cells.len(),
                dir.display(),
                started.elapsed().as_secs_f64()
            );
        }
        None if args.json => {
            let text = serde_json::to_string_pretty(&table).map_err(|e| Failure::Input(e.into()))?;
            emit(&format!("{text}\n")).map_err(Failure::Input)?;
        }
        None => emit(&table.to_csv()).map_err(Failure::Input)?,
    }
    if table.has_errors() {
        let failed: Vec<String> = table
            .cells
            .iter()
            .filter_map(|c| c.error.as_ref().map(|e| format!("{}: {e}", c.description)))
            .collect();
        return Err(Failure::Numeric(anyhow::anyhow!(
            "{} cell(s) failed\n{}",
            failed.len(),
            failed.join("\n")
        )));
    }
    Ok(())
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn resolve_config(args: &SimulateArgs) -> Result<McConfig> {
    match (&args.config, &args.preset) {
        (Some(path), None) => simulate::load_config(path)?.resolve(),
        (None, Some(name)) => Ok(McConfig {
            cells: simulate::preset(name, args.draws)?,
            replications: simulate::DEFAULT_REPLICATIONS,
            levels: DEFAULT_LEVELS.to_vec(),
            seed: simulate::DEFAULT_SEED,
        }),
        _ => bail!("give either a config file or --preset"),
    }
}

fn write_outputs(dir: &Path, table: &maxcorr_core::montecarlo::RejectionTable) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let csv = format!("# manifest: manifest.json\n{}", table.to_csv());
    fs::write(dir.join("table.csv"), csv)?;
    let json = serde_json::json!({ "manifest": "manifest.json", "table": table });
    fs::write(dir.join("table.json"), serde_json::to_string_pretty(&json)?)?;
    Ok(())
}
