//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid usage or parameters.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::report::{self, RunConfig, Sweep};
use crate::zoo::{FamilyKind, FamilySpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cslgeom", version, about = "Verify Legendrian submanifold geometry in S^{2n+1}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every residual check and the threshold classifier over a chart grid.
    Verify(VerifyArgs),
    /// Sweep one family parameter and write a CSV of margins.
    Scan(ScanArgs),
    /// Print every pinching threshold at (n, |H|^2).
    Thresholds(ThresholdArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Family: totally-geodesic, calabi-torus, calabi-product, clifford-torus.
    #[arg(long)]
    pub family: Option<String>,
    /// Intrinsic dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Family parameters as k=v,...
    #[arg(long)]
    pub params: Option<String>,
    /// Samples per chart axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Cap on grid points; larger grids are subsampled with the seed.
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub fd_step: Option<f64>,
    #[arg(long)]
    pub tol_ad: Option<f64>,
    #[arg(long)]
    pub tol_fd: Option<f64>,
    #[arg(long)]
    pub eq_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Key-value TOML file with defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Report format; only json is supported.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// name=lo:hi:count
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: usize,
    /// |H|^2
    #[arg(long, default_value_t = 0.0)]
    pub hsq: f64,
    /// Codimension for the Simons constant (defaults to n).
    #[arg(long)]
    pub codim: Option<usize>,
}

/// Config-file mirror of the flags. `params` is either `"k=v,..."` or a table.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub params: Option<ParamsValue>,
    pub grid: Option<usize>,
    pub max_points: Option<usize>,
    pub fd_step: Option<f64>,
    pub tol_ad: Option<f64>,
    pub tol_fd: Option<f64>,
    pub eq_tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub sweep: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ParamsValue {
    Text(String),
    Table(BTreeMap<String, f64>),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Parse `k=v,k=v`.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("parameter '{item}' is not k=v")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("parameter {k} has non-numeric value '{v}'")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// A resolved run: flags override the config file, which overrides defaults.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub sweep: Option<String>,
}

pub fn resolve(args: &RunArgs, format: Option<&str>, sweep: Option<&str>) -> Result<Resolved> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let family = args
        .family
        .clone()
        .or(file.family)
        .ok_or_else(|| Error::Usage("--family is required".into()))?;
    let kind: FamilyKind = family.parse()?;
    let n = match (args.n.or(file.n), kind) {
        (Some(n), _) => n,
        (None, FamilyKind::CalabiTorus) => 2,
        (None, _) => return Err(Error::Usage("--n is required".into())),
    };
    let params = match (&args.params, file.params) {
        (Some(s), _) => parse_params(s)?,
        (None, Some(ParamsValue::Text(s))) => parse_params(&s)?,
        (None, Some(ParamsValue::Table(t))) => t,
        (None, None) => BTreeMap::new(),
    };
    let mut config = RunConfig::new(FamilySpec { kind, n, params });
    if let Some(v) = args.grid.or(file.grid) {
        config.grid = v;
    }
    if let Some(v) = args.max_points.or(file.max_points) {
        config.max_points = v;
    }
    if let Some(v) = args.fd_step.or(file.fd_step) {
        config.fd_step = v;
    }
    if let Some(v) = args.tol_ad.or(file.tol_ad) {
        config.tol_ad = v;
    }
    if let Some(v) = args.tol_fd.or(file.tol_fd) {
        config.tol_fd = v;
    }
    if let Some(v) = args.eq_tol.or(file.eq_tol) {
        config.eq_tol = v;
    }
    if let Some(v) = args.seed.or(file.seed) {
        config.seed = v;
    }
    config.validate()?;
    Ok(Resolved {
        config,
        out: args.out.clone().or(file.out),
        format: format.map(str::to_string).or(file.format),
        sweep: sweep.map(str::to_string).or(file.sweep),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let r = resolve(&args.run, args.format.as_deref(), None)?;
    if let Some(f) = r.format.as_deref() {
        if f != "json" {
            return Err(Error::Usage(format!("unsupported format '{f}' (only json)")));
        }
    }
    let report = report::run_verify(&r.config)?;
    emit(r.out.as_deref(), &report.to_json())?;
    if report.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("check failed: {}", report.failed_checks().join(", "));
        Ok(EXIT_CHECK_FAILED)
    }
}

fn cmd_scan(args: &ScanArgs) -> Result<i32> {
    let r = resolve(&args.run, None, args.sweep.as_deref())?;
    let sweep: Sweep = r
        .sweep
        .as_deref()
        .ok_or_else(|| Error::Usage("--sweep is required".into()))?
        .parse()?;
    let rows = report::run_scan(&r.config, &sweep)?;
    emit(r.out.as_deref(), &report::scan_csv(&rows))?;
    Ok(EXIT_OK)
}

fn cmd_thresholds(args: &ThresholdArgs) -> Result<i32> {
    let lines = report::threshold_table(args.n, args.hsq, args.codim.unwrap_or(args.n))?;
    emit(None, &report::threshold_text(&lines))?;
    Ok(EXIT_OK)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParams(_)
        | Error::Usage(_)
        | Error::NonpositiveEpsilon(_)
        | Error::NoOracle(_)
        | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Thresholds(a) => cmd_thresholds(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let p = parse_params("r1=0.8, r2=0.6").unwrap();
        assert_eq!(p["r1"], 0.8);
        assert_eq!(p["r2"], 0.6);
        assert!(parse_params("").unwrap().is_empty());
        assert!(matches!(parse_params("r1"), Err(Error::Usage(_))));
        assert!(matches!(parse_params("r1=x"), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "family = \"calabi-product\"\nn = 4\ngrid = 5\nseed = 9\n[params]\nr1 = 0.5\n",
        )
        .unwrap();
        let args = RunArgs {
            config: Some(path),
            grid: Some(3),
            ..Default::default()
        };
        let r = resolve(&args, None, None).unwrap();
        assert_eq!(r.config.grid, 3);
        assert_eq!(r.config.seed, 9);
        assert_eq!(r.config.family.n, 4);
        assert_eq!(r.config.family.params["r1"], 0.5);
    }

    #[test]
    fn unknown_config_key_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "famly = \"tg\"\n").unwrap();
        let args = RunArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(matches!(resolve(&args, None, None), Err(Error::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidParams("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::DegenerateMetric { det: 0.0 }), EXIT_CHECK_FAILED);
        assert_eq!(run(["cslgeom", "thresholds", "--n", "3"]), EXIT_OK);
        assert_eq!(run(["cslgeom", "bogus"]), EXIT_USAGE);
    }
}
