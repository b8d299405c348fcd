//! `pinch-sop`: SOP sweeps, distribution dumps and self-validation.
//!
//! Exit status: 0 on success, 1 when validation or a computation fails,
//! 2 on usage or parameter errors.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pinch_sop::monte_carlo::{DEFAULT_SEED, DEFAULT_TRIALS};
use pinch_sop::sop::DEFAULT_CHEBYSHEV_ORDER;
use pinch_sop::sweep::{
    dump_distribution, grid_from_range, run_sweep, write_dist_csv, DistKind, GridScale, SweepSpec,
    XAxis,
};
use pinch_sop::system_model::dbm_to_watts;
use pinch_sop::validate::{run_validation, Level, ValidateOptions};
use pinch_sop::{Error, McConfig, SopMethod, SystemConfig, SystemParams};

#[derive(Parser)]
#[command(
    name = "pinch-sop",
    version,
    about = "Secrecy outage probability of pinching-antenna systems"
)]
struct Cli {
    /// Plain `key=value` file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Monte Carlo seed.
    #[arg(long, global = true, env = "PINCH_SEED")]
    seed: Option<u64>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate SOP methods over a parameter grid.
    Sweep(SweepArgs),
    /// Tabulate a distribution over its support.
    Dist(DistArgs),
    /// Run the self-check suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Side length D of the square region, m.
    #[arg(long, allow_negative_numbers = true)]
    region: Option<f64>,
    /// Waveguide height h, m.
    #[arg(long, allow_negative_numbers = true)]
    height: Option<f64>,
    /// Carrier frequency, GHz.
    #[arg(long, allow_negative_numbers = true)]
    freq_ghz: Option<f64>,
    /// Effective refractive index of the waveguide.
    #[arg(long, allow_negative_numbers = true)]
    n_eff: Option<f64>,
    /// Transmit power, dBm.
    #[arg(long, allow_negative_numbers = true)]
    power_dbm: Option<f64>,
    /// Noise power, dBm.
    #[arg(long, allow_negative_numbers = true)]
    noise_dbm: Option<f64>,
    /// Target secrecy rate, bps/Hz.
    #[arg(long, allow_negative_numbers = true)]
    rate: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Swept parameter: power (dBm), rate (bps/Hz) or region (m).
    #[arg(long)]
    x_axis: Option<String>,
    /// First grid value.
    #[arg(long, allow_negative_numbers = true)]
    min: Option<f64>,
    /// Last grid value (inclusive).
    #[arg(long, allow_negative_numbers = true)]
    max: Option<f64>,
    /// Grid spacing.
    #[arg(long)]
    step: Option<f64>,
    /// Explicit comma-separated x values (instead of min/max/step).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    /// Comma-separated methods: mc, exact, chebyshev, asymptotic, lower-pas,
    /// lower-fpa, mc-fpa.
    #[arg(long)]
    methods: Option<String>,
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    /// Gauss-Chebyshev order N.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// gamma-b-cdf, gamma-e-pdf, chi-cdf or w-pdf.
    #[arg(long)]
    which: Option<String>,
    /// Number of grid points.
    #[arg(long)]
    grid: Option<usize>,
    /// Logarithmic grid spacing.
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// fast or full.
    #[arg(long)]
    level: Option<String>,
    /// Deliberately break a constant to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt_constant: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Usage(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "seed",
    "workers",
    "region",
    "height",
    "freq-ghz",
    "n-eff",
    "power-dbm",
    "noise-dbm",
    "rate",
    "x-axis",
    "min",
    "max",
    "step",
    "values",
    "methods",
    "trials",
    "order",
    "which",
    "grid",
    "level",
];

/// Settings from the config file, looked up only when a flag is absent.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self(HashMap::new()));
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut map = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Failure::Usage(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    n + 1
                )));
            };
            let k = k.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(Failure::Usage(format!(
                    "{}:{}: unknown key `{k}`",
                    path.display(),
                    n + 1
                )));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Failure::Usage(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn list(&self, flag: Option<Vec<f64>>, key: &str) -> Result<Option<Vec<f64>>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim().parse().map_err(|_| {
                            Failure::Usage(format!("config key `{key}`: cannot parse `{s}`"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

fn system_config(m: &ModelArgs, file: &FileConfig) -> Result<SystemConfig, Failure> {
    let d = SystemParams::default();
    let params = SystemParams {
        region_side: file.pick(m.region, "region")?.unwrap_or(d.region_side),
        height: file.pick(m.height, "height")?.unwrap_or(d.height),
        carrier_freq: file
            .pick(m.freq_ghz, "freq-ghz")?
            .map_or(d.carrier_freq, |g| g * 1e9),
        n_eff: file.pick(m.n_eff, "n-eff")?.unwrap_or(d.n_eff),
        transmit_power: file
            .pick(m.power_dbm, "power-dbm")?
            .map_or(d.transmit_power, dbm_to_watts),
        noise_power: file
            .pick(m.noise_dbm, "noise-dbm")?
            .map_or(d.noise_power, dbm_to_watts),
        target_rate: file.pick(m.rate, "rate")?.unwrap_or(d.target_rate),
    };
    Ok(SystemConfig::new(params)?)
}

fn parse_methods(s: &str) -> Result<Vec<SopMethod>, Failure> {
    s.split(',')
        .map(|m| m.trim().parse::<SopMethod>().map_err(Failure::from))
        .collect()
}

fn mc_config(cli: &Cli, file: &FileConfig, trials: Option<u64>) -> Result<McConfig, Failure> {
    let mc = McConfig {
        trials: file.pick(trials, "trials")?.unwrap_or(DEFAULT_TRIALS),
        seed: file.pick(cli.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        workers: file.pick(cli.workers, "workers")?.unwrap_or(1),
    };
    mc.validate()?;
    Ok(mc)
}

fn sweep(cli: &Cli, a: &SweepArgs, file: &FileConfig) -> Result<Vec<u8>, Failure> {
    let base = system_config(&a.model, file)?;
    let axis: XAxis = file
        .pick(a.x_axis.clone(), "x-axis")?
        .unwrap_or_else(|| "power".into())
        .parse()?;
    let values = match file.list(a.values.clone(), "values")? {
        Some(v) => v,
        None => {
            let (lo, hi, step) = match axis {
                XAxis::PowerDbm => (0.0, 40.0, 5.0),
                XAxis::RateBpsHz => (0.1, 2.0, 0.1),
                XAxis::RegionD => (10.0, 30.0, 5.0),
            };
            grid_from_range(
                file.pick(a.min, "min")?.unwrap_or(lo),
                file.pick(a.max, "max")?.unwrap_or(hi),
                file.pick(a.step, "step")?.unwrap_or(step),
            )?
        }
    };
    let mut spec = SweepSpec::new(axis, values, base);
    if let Some(m) = file.pick(a.methods.clone(), "methods")? {
        spec.methods = parse_methods(&m)?;
    }
    spec.mc = mc_config(cli, file, a.trials)?;
    spec.chebyshev_order = file
        .pick(a.order, "order")?
        .unwrap_or(DEFAULT_CHEBYSHEV_ORDER);
    let result = run_sweep(&spec)?;
    let mut buf = Vec::new();
    result.write_csv(&mut buf)?;
    Ok(buf)
}

fn dist(a: &DistArgs, file: &FileConfig) -> Result<Vec<u8>, Failure> {
    let cfg = system_config(&a.model, file)?;
    let which: DistKind = file
        .pick(a.which.clone(), "which")?
        .ok_or_else(|| Failure::Usage("--which is required".into()))?
        .parse()?;
    let grid = file.pick(a.grid, "grid")?.unwrap_or(1000);
    let scale = if a.log {
        GridScale::Log
    } else {
        GridScale::Linear
    };
    let rows = dump_distribution(which, grid, scale, &cfg)?;
    let mut buf = Vec::new();
    write_dist_csv(&rows, &mut buf)?;
    Ok(buf)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let res = match out {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| Failure::Runtime(format!("cannot write output: {e}")))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Sweep(a) => emit(cli.out.as_deref(), &sweep(cli, a, &file)?).map(|_| true),
        Command::Dist(a) => emit(cli.out.as_deref(), &dist(a, &file)?).map(|_| true),
        Command::Validate(a) => {
            let level: Level = file
                .pick(a.level.clone(), "level")?
                .unwrap_or_else(|| "fast".into())
                .parse()?;
            let mc = mc_config(cli, &file, None)?;
            let opts = ValidateOptions {
                level,
                seed: mc.seed,
                workers: mc.workers,
                corrupt_constant: a.corrupt_constant,
            };
            let checks = run_validation(&opts);
            let mut report = String::new();
            for c in &checks {
                report.push_str(&format!("{c}\n"));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            report.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
            emit(cli.out.as_deref(), report.as_bytes())?;
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("pinch-sop: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("pinch-sop: {msg}");
            ExitCode::from(1)
        }
    }
}
