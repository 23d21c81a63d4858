//! Command-line front end for `magbound-core`.

pub mod commands;
pub mod config;
pub mod envelope;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use config::RunConfig;
use envelope::{round_all, ResultEnvelope};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "MAGBOUND_THREADS";

#[derive(Parser, Debug)]
#[command(name = "magbound", version, about = "Magnetic eigenvalue bounds: constants, scans and lattice checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON envelope here (scan rows also go to the `.csv` sibling).
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constants of the semiclassical and magnetic inequalities.
    #[command(allow_negative_numbers = true)]
    Constants {
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Supremum of the Landau-level Riesz sum over its semiclassical value.
    #[command(allow_negative_numbers = true)]
    LandauSup {
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Aharonov-Bohm excess constant R_gamma(flux).
    #[command(allow_negative_numbers = true)]
    AbConstant {
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        flux: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Lowest eigenvalues of a lattice magnetic Laplacian.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        bc: Option<String>,
        /// symmetric, landau, ab or zero.
        #[arg(long)]
        gauge: Option<String>,
        /// Aharonov-Bohm flux for `--gauge ab`.
        #[arg(long)]
        flux: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check one inequality on a lattice spectrum, or run an abstract suite.
    #[command(allow_negative_numbers = true)]
    Verify {
        id: VerifyId,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        slack: Option<f64>,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long)]
        instances: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Counting-function ratio N(lambda) / (L^cl lambda |Omega|) between two eigenvalue indices.
    #[command(allow_negative_numbers = true)]
    WeylScan {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        from_index: Option<usize>,
        #[arg(long)]
        to_index: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// square, rectangle, disk or lshape.
    #[arg(long)]
    shape: Option<String>,
    /// Grid spacing is 1/n.
    #[arg(long)]
    n: Option<usize>,
    /// Homogeneous field strength.
    #[arg(long)]
    b: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyId {
    Bly,
    Polya,
    Blyhommod,
    Homneu,
    Magdomain,
    Diamagdisc,
    Lifting,
    Abstract,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Average,
    Domination,
    Diamag,
}

fn name_of<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

#[derive(Default)]
struct Collected(BTreeMap<String, Value>);

impl Collected {
    fn put<T: Into<Value>>(&mut self, key: &str, v: Option<T>) -> &mut Self {
        if let Some(v) = v {
            self.0.insert(key.to_string(), v.into());
        }
        self
    }

    fn lattice(&mut self, l: LatticeArgs) -> &mut Self {
        self.put("shape", l.shape).put("n", l.n).put("b", l.b)
    }
}

fn into_config(cli: Cli) -> Result<RunConfig> {
    let mut c = Collected::default();
    let (command, common) = match cli.command {
        Command::Constants { gamma, d, alpha, sigma, kappa, common } => {
            c.put("gamma", gamma).put("d", d).put("alpha", alpha).put("sigma", sigma).put("kappa", kappa);
            ("constants", common)
        }
        Command::LandauSup { b, gamma, tol, common } => {
            c.put("b", b).put("gamma", gamma).put("tol", tol);
            ("landau-sup", common)
        }
        Command::AbConstant { gamma, flux, common } => {
            c.put("gamma", gamma).put("flux", flux);
            ("ab-constant", common)
        }
        Command::Spectrum { lattice, bc, gauge, flux, count, common } => {
            c.lattice(lattice).put("bc", bc).put("gauge", gauge).put("flux", flux).put("count", count);
            ("spectrum", common)
        }
        Command::Verify { id, lattice, gamma, alpha, sigma, lambda_min, lambda_max, points, slack, suite, instances, common } => {
            c.put("id", Some(name_of(&id)))
                .lattice(lattice)
                .put("gamma", gamma)
                .put("alpha", alpha)
                .put("sigma", sigma)
                .put("lambda_min", lambda_min)
                .put("lambda_max", lambda_max)
                .put("points", points)
                .put("slack", slack)
                .put("suite", suite.map(|s| name_of(&s)))
                .put("instances", instances);
            ("verify", common)
        }
        Command::WeylScan { lattice, from_index, to_index, common } => {
            c.lattice(lattice).put("from_index", from_index).put("to_index", to_index);
            ("weyl-scan", common)
        }
    };
    let mut cfg = match &common.config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            if cfg.command != command {
                bail!("config is for `{}`, not `{command}`", cfg.command);
            }
            cfg
        }
        None => RunConfig::new(command),
    };
    cfg.overlay(c.0, common.output, common.seed);
    Ok(cfg)
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
    }
}

/// Executes a fully resolved configuration and returns the envelope with
/// the CSV rows and whether an unexpected verdict occurred.
pub fn execute(mut cfg: RunConfig) -> Result<(ResultEnvelope, Option<Vec<Value>>, bool)> {
    let start = Instant::now();
    let out = match thread_count()? {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| commands::dispatch(&mut cfg))?,
        None => commands::dispatch(&mut cfg)?,
    };
    if out.results.is_empty() {
        bail!("no results");
    }
    let envelope = ResultEnvelope {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: cfg,
        results: out.results.into_iter().map(round_all).collect(),
        timing_ms: start.elapsed().as_millis() as u64,
    };
    let csv = out.csv.map(|rows| rows.into_iter().map(round_all).collect());
    Ok((envelope, csv, out.unexpected))
}

/// Runs the tool on `argv` (including the program name): 0 on success,
/// 2 when a verification produced an unexpected verdict, 1 on any error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = into_config(cli).and_then(execute).and_then(|(env, csv, unexpected)| {
        env.write(csv.as_deref())?;
        Ok(unexpected)
    });
    match result {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
