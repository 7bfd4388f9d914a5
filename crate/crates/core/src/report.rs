//! Verification runs over a chart grid, parameter scans and threshold tables.
//!
//! Grid points are evaluated on scoped worker threads; results are collected
//! and reduced in grid order, so reports are reproducible given the seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{ric_jh, FundamentalData};
use crate::identities::{
    b2_relation_residual, cdk_matrix_bound_sigma, codazzi_symmetry_residual, csl_residual,
    dmu_residual, ricci_lower_bound, simons_rhs, traceless_chain, H_MIN,
};
use crate::contact::legendrian_residual;
use crate::geom::reeb_component_residual;
use crate::pinch::{self, classify, GapReport, ReferenceConstants, Threshold};
use crate::sample::{self, evaluate, family_grid, random_family_points};
use crate::tensor::{SymTensor3, Tensor3};
use crate::zoo::{FamilySpec, ImmersionFamily, OracleData};

/// Fixed tolerance for the Legendrian conditions, independent of `tol_ad`.
pub const LEGENDRIAN_TOL: f64 = 1e-10;
/// Random chart points added to the grid.
pub const RANDOM_POINTS: usize = 32;
/// Random tensors drawn for each algebraic inequality.
pub const RANDOM_TENSORS: usize = 1000;
/// Grid points per axis and cap used for each scan row.
const SCAN_PER_AXIS: usize = 4;
const SCAN_MAX_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: FamilySpec,
    pub grid: usize,
    /// Largest number of grid points; larger tensor grids are subsampled.
    pub max_points: usize,
    pub fd_step: f64,
    pub tol_ad: f64,
    pub tol_fd: f64,
    pub eq_tol: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(family: FamilySpec) -> Self {
        Self {
            family,
            grid: 16,
            max_points: 4096,
            fd_step: crate::adnum::DEFAULT_FD_STEP,
            tol_ad: 1e-8,
            tol_fd: 1e-5,
            eq_tol: pinch::DEFAULT_EQ_TOL,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidParams(format!("grid must be >= 2, got {}", self.grid)));
        }
        if self.max_points < 1 {
            return Err(Error::InvalidParams("max_points must be >= 1".into()));
        }
        for (name, v) in [
            ("fd_step", self.fd_step),
            ("tol_ad", self.tol_ad),
            ("tol_fd", self.tol_fd),
            ("eq_tol", self.eq_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Closedness of `μ` is checked an order of magnitude tighter than the CSL condition.
    pub fn tol_dmu(&self) -> f64 {
        0.1 * self.tol_fd
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Largest residual, or largest `rhs - lhs` for inequalities `lhs >= rhs`.
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub name: &'static str,
    pub conclusion: &'static str,
    pub pointwise_margin_min: f64,
    pub hypothesis_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariants {
    #[serde(rename = "normB2")]
    pub norm_b2: f64,
    #[serde(rename = "normH2")]
    pub norm_h2: f64,
    pub minimal: bool,
    pub equality_basic: bool,
    /// Gauss curvature of largest magnitude over the samples (surfaces only).
    pub gauss_curv: Option<f64>,
    pub equality_points: usize,
    pub inf_h2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleDiff {
    pub sigma: Option<f64>,
    #[serde(rename = "normB2")]
    pub norm_b2: f64,
    #[serde(rename = "normH2")]
    pub norm_h2: f64,
    pub expected: OracleData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub seed: u64,
    pub grid: usize,
    pub points: usize,
    pub checks: Vec<CheckResult>,
    pub thresholds: Vec<ThresholdRow>,
    pub invariants: Invariants,
    pub reference: ReferenceConstants,
    pub oracle_diff: Option<OracleDiff>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn margin(&self, threshold: &str) -> Option<f64> {
        self.thresholds
            .iter()
            .find(|t| t.name == threshold)
            .map(|t| t.pointwise_margin_min)
    }

    /// Pretty JSON with every float rounded to 9 significant digits.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_json(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }
}

/// Round to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn round_json(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(r) = num.as_f64().map(sig9).and_then(serde_json::Number::from_f64) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Ordered parallel map over a slice.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Per-point residuals.
struct PointResult {
    fund: FundamentalData,
    legendrian: f64,
    orthonormality: f64,
    normal_frame: f64,
    reeb: f64,
    codazzi: f64,
    pythagorean: f64,
    dmu: f64,
    csl: f64,
    simons: f64,
    bochner: f64,
    b2: Option<f64>,
    traceless_chain: f64,
    ricci_bound: Option<f64>,
    oracle: Option<(Option<f64>, f64, f64)>,
}

fn evaluate_point(
    family: &ImmersionFamily,
    oracle: Option<&OracleData>,
    u: &[f64],
    h: f64,
) -> Result<PointResult> {
    let pd = evaluate(family, u)?;
    let fund = pd.fund;
    let n = fund.n;
    let (chain_lhs, chain_rhs) = traceless_chain(&fund);
    let b2 = if n == 2 && fund.norm_h() > H_MIN {
        Some(b2_relation_residual(&fund)?)
    } else {
        None
    };
    let oracle = oracle.map(|o| {
        (
            o.sigma_expected.as_ref().map(|s| s.max_abs_diff(&fund.sigma)),
            (o.norm_b2 - fund.norm_b2).abs(),
            (o.norm_h2 - fund.norm_h2).abs(),
        )
    });
    Ok(PointResult {
        legendrian: legendrian_residual(&pd.jet),
        orthonormality: pd.frame.orthonormality_residual(),
        normal_frame: pd.frame.normal_residual(),
        reeb: reeb_component_residual(&pd.jet, &pd.frame),
        codazzi: codazzi_symmetry_residual(&pd.sigma_raw),
        pythagorean: fund.pythagorean_residual(),
        dmu: dmu_residual(family, u, h)?,
        csl: csl_residual(family, u, h)?,
        simons: simons_rhs(&fund, &Tensor3::zeros(n))?.max_abs(),
        bochner: ric_jh(&fund).abs(),
        b2,
        traceless_chain: chain_rhs - chain_lhs,
        ricci_bound: ricci_lower_bound(&fund).map(|(lhs, rhs)| rhs - lhs),
        oracle,
        fund,
    })
}

struct CheckAcc {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    samples: usize,
}

impl CheckAcc {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: f64::NEG_INFINITY,
            samples: 0,
        }
    }

    fn push(&mut self, v: f64) {
        // NaN must fail the check
        self.worst = if v.is_nan() { f64::NAN } else { self.worst.max(v) };
        self.samples += 1;
    }

    fn finish(self) -> CheckResult {
        let worst = if self.samples == 0 { 0.0 } else { self.worst };
        CheckResult {
            name: self.name,
            max_residual: worst,
            tolerance: self.tolerance,
            samples: self.samples,
            passed: worst <= self.tolerance,
        }
    }
}

/// Largest-magnitude value, keeping its sign.
fn signed_extreme(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc: Option<f64>, v| match acc {
        Some(a) if a.abs() >= v.abs() => Some(a),
        _ => Some(v),
    })
}

/// Seeded random-tensor checks of the algebraic inequalities.
fn random_tensor_checks(n: usize, seed: u64, slack: f64) -> Vec<CheckResult> {
    let mut rng = sample::rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut cdk = CheckAcc::new("cdk_bound_random", slack);
    let mut chain = CheckAcc::new("traceless_chain_random", slack);
    let mut ricci = CheckAcc::new("ricci_lower_bound_random", slack);
    for _ in 0..RANDOM_TENSORS {
        let s = sample::random_symmetric(n, &mut rng);
        let (lhs, rhs) = cdk_matrix_bound_sigma(&s);
        cdk.push((lhs - rhs) / (1.0 + rhs));

        let mu = sample::random_covector(n, 2.0, &mut rng);
        let sigma0 = sample::random_traceless(n, &mut rng);
        let sigma = sigma0.zip_map(&SymTensor3::trace_part(&mu), |a, b| a + b);
        let fund = FundamentalData::from_sigma(sigma);
        let (lhs, rhs) = traceless_chain(&fund);
        chain.push((rhs - lhs) / (1.0 + lhs.abs()));
        if let Some((lhs, rhs)) = ricci_lower_bound(&fund) {
            ricci.push((rhs - lhs) / (1.0 + lhs.abs()));
        }
    }
    vec![cdk.finish(), chain.finish(), ricci.finish()]
}

/// Run every residual check and the threshold classifier over the chart grid.
pub fn run_verify(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let family = config.family.build()?;
    let n = family.n();
    let oracle = match family.oracle() {
        Ok(o) => Some(o),
        Err(Error::NoOracle(_)) => None,
        Err(e) => return Err(e),
    };

    let mut points = family_grid(&family, config.grid, config.max_points, config.seed);
    let mut rng = sample::rng(config.seed);
    points.extend(random_family_points(&family, RANDOM_POINTS, &mut rng));

    let results = par_map(&points, |u| evaluate_point(&family, oracle.as_ref(), u, config.fd_step))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let tol = config.tol_ad;
    let mut acc = [
        CheckAcc::new("legendrian", LEGENDRIAN_TOL),
        CheckAcc::new("frame_orthonormality", tol),
        CheckAcc::new("normal_frame", tol),
        CheckAcc::new("reeb_component", tol),
        CheckAcc::new("codazzi_symmetry", tol),
        CheckAcc::new("pythagorean", tol),
        CheckAcc::new("dmu", config.tol_dmu()),
        CheckAcc::new("csl", config.tol_fd),
        CheckAcc::new("simons_parallel", tol),
        CheckAcc::new("bochner_ricci_jh", tol),
        CheckAcc::new("b2_relation", tol),
        CheckAcc::new("traceless_chain", tol),
        CheckAcc::new("ricci_lower_bound", tol),
    ];
    let mut oracle_acc = [
        CheckAcc::new("oracle_sigma", tol),
        CheckAcc::new("oracle_norm_b2", tol),
        CheckAcc::new("oracle_norm_h2", tol),
    ];
    for r in &results {
        let fixed = [
            r.legendrian,
            r.orthonormality,
            r.normal_frame,
            r.reeb,
            r.codazzi,
            r.pythagorean,
            r.dmu,
            r.csl,
            r.simons,
            r.bochner,
        ];
        for (a, v) in acc.iter_mut().zip(fixed) {
            a.push(v);
        }
        if let Some(v) = r.b2 {
            acc[10].push(v);
        }
        acc[11].push(r.traceless_chain);
        if let Some(v) = r.ricci_bound {
            acc[12].push(v);
        }
        if let Some((sigma, b2, h2)) = r.oracle {
            if let Some(s) = sigma {
                oracle_acc[0].push(s);
            }
            oracle_acc[1].push(b2);
            oracle_acc[2].push(h2);
        }
    }
    let oracle_diff = oracle.map(|expected| {
        let [s, b, h] = &oracle_acc;
        OracleDiff {
            sigma: (s.samples > 0).then_some(s.worst),
            norm_b2: b.worst,
            norm_h2: h.worst,
            expected,
        }
    });

    let mut checks: Vec<CheckResult> = acc.into_iter().map(CheckAcc::finish).collect();
    if oracle_diff.is_some() {
        checks.extend(oracle_acc.into_iter().filter(|a| a.samples > 0).map(CheckAcc::finish));
    }
    checks.extend(random_tensor_checks(n, config.seed, tol));

    let funds: Vec<FundamentalData> = results.iter().map(|r| r.fund.clone()).collect();
    let gap = classify(&funds, n, config.eq_tol)?;
    let invariants = Invariants {
        norm_b2: gap.sup_b2,
        norm_h2: gap.sup_h2,
        minimal: gap.sup_h2 <= tol,
        equality_basic: gap.equality_points == gap.samples,
        gauss_curv: signed_extreme(funds.iter().filter_map(|f| f.gauss_curv)),
        equality_points: gap.equality_points,
        inf_h2: gap.inf_h2,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        family: family.kind().name().to_string(),
        params: family.spec().params.clone(),
        n,
        seed: config.seed,
        grid: config.grid,
        points: points.len(),
        checks,
        thresholds: threshold_rows(&gap),
        invariants,
        reference: pinch::reference_constants(n, n),
        oracle_diff,
        passed,
    })
}

fn threshold_rows(gap: &GapReport) -> Vec<ThresholdRow> {
    Threshold::ALL
        .iter()
        .filter_map(|t| {
            gap.entry(t.name()).map(|e| ThresholdRow {
                name: e.name,
                conclusion: t.conclusion(),
                pointwise_margin_min: e.pointwise_margin_min,
                hypothesis_holds: e.hypothesis_holds,
            })
        })
        .collect()
}

/// `name=lo:hi:count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl std::str::FromStr for Sweep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("sweep must look like name=lo:hi:count, got '{s}'"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        if count < 2 {
            return Err(Error::Usage(format!("sweep count must be >= 2, got {count}")));
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        Ok(Self {
            name: name.trim().to_string(),
            lo,
            hi,
            count,
        })
    }
}

impl Sweep {
    /// `count` evenly spaced values in ascending order, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let (lo, hi) = if self.lo <= self.hi { (self.lo, self.hi) } else { (self.hi, self.lo) };
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { hi } else { lo + (hi - lo) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub param: f64,
    pub norm_b2: f64,
    pub norm_h2: f64,
    pub threshold_basic: f64,
    pub margin_basic: f64,
    pub threshold_main: Option<f64>,
    pub margin_main: Option<f64>,
    pub equality_flag: bool,
    pub kappa: Option<f64>,
}

pub const SCAN_HEADER: &str = "param,normB2,normH2,threshold_basic,margin_basic,threshold_main,margin_main,equality_flag,kappa";

fn partner(name: &str) -> Option<&'static str> {
    match name {
        "r1" => Some("r2"),
        "r2" => Some("r1"),
        "r3" => Some("r4"),
        "r4" => Some("r3"),
        _ => None,
    }
}

/// One row per sweep value. The swept parameter's partner (`r2` for `r1`, …)
/// is recomputed from the unit constraint unless it is the one being swept.
pub fn run_scan(config: &RunConfig, sweep: &Sweep) -> Result<Vec<ScanRow>> {
    config.validate()?;
    let kind = config.family.kind;
    if !kind.param_names().contains(&sweep.name.as_str()) {
        return Err(Error::InvalidParams(format!(
            "parameter '{}' does not belong to {kind}",
            sweep.name
        )));
    }
    let specs: Vec<FamilySpec> = sweep
        .values()
        .into_iter()
        .map(|v| {
            let mut spec = config.family.clone();
            if let Some(p) = partner(&sweep.name) {
                spec.params.remove(p);
            }
            spec.params.insert(sweep.name.clone(), v);
            spec
        })
        .collect();
    let rows = par_map(&specs, |spec| scan_row(spec, &sweep.name, config));
    rows.into_iter().collect()
}

fn scan_row(spec: &FamilySpec, name: &str, config: &RunConfig) -> Result<ScanRow> {
    let family = spec.build()?;
    let n = family.n();
    let per_axis = config.grid.min(SCAN_PER_AXIS);
    let points = family_grid(&family, per_axis, SCAN_MAX_POINTS, config.seed);
    let funds = points
        .iter()
        .map(|u| evaluate(&family, u).map(|p| p.fund))
        .collect::<Result<Vec<_>>>()?;
    let gap = classify(&funds, n, config.eq_tol)?;
    // thresholds are reported at the sample realizing the smallest margin
    let at_worst = |t: Threshold| {
        funds
            .iter()
            .map(|f| (t.value(n, f.norm_h2) - f.norm_b2, t.value(n, f.norm_h2)))
            .fold((f64::INFINITY, f64::NAN), |a, b| if b.0 < a.0 { b } else { a })
    };
    let (margin_basic, threshold_basic) = at_worst(Threshold::Basic);
    let main = Threshold::Main.applies(n).then(|| at_worst(Threshold::Main));
    Ok(ScanRow {
        param: family.param(name).unwrap_or(f64::NAN),
        norm_b2: gap.sup_b2,
        norm_h2: gap.sup_h2,
        threshold_basic,
        margin_basic,
        threshold_main: main.map(|m| m.1),
        margin_main: main.map(|m| m.0),
        equality_flag: gap.equality_points == gap.samples,
        kappa: signed_extreme(funds.iter().filter_map(|f| f.gauss_curv)),
    })
}

/// 9 significant digits, shortest round-trip spelling.
fn csv_num(x: f64) -> String {
    match serde_json::Number::from_f64(sig9(x)) {
        Some(num) => num.to_string(),
        None => x.to_string(),
    }
}

fn csv_opt(x: Option<f64>) -> String {
    x.map(csv_num).unwrap_or_default()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_num(r.param),
            csv_num(r.norm_b2),
            csv_num(r.norm_h2),
            csv_num(r.threshold_basic),
            csv_num(r.margin_basic),
            csv_opt(r.threshold_main),
            csv_opt(r.margin_main),
            r.equality_flag,
            csv_opt(r.kappa),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdLine {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: f64,
}

/// Every threshold and reference constant at `(n, h2)`, in a fixed order.
/// Bounds stated only for `n >= 3` are omitted for surfaces.
pub fn threshold_table(n: usize, h2: f64, codim: usize) -> Result<Vec<ThresholdLine>> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("thresholds need n >= 2, got {n}")));
    }
    if !(h2 >= 0.0 && h2.is_finite()) {
        return Err(Error::InvalidParams(format!("|H|^2 must be >= 0, got {h2}")));
    }
    if codim < 1 {
        return Err(Error::InvalidParams("codimension must be >= 1".into()));
    }
    let mut lines = vec![ThresholdLine {
        name: "basic",
        formula: "(n-1)(n+2)/n + (n^2+3n-2)/(2n^2) h2 - (n-1)(n-2) sqrt(h2 (4n+h2))/(2n^2)",
        value: pinch::threshold_basic(n, h2),
    }];
    if n >= 3 {
        lines.extend([
            ThresholdLine {
                name: "main",
                formula: "4(n-1)/n + (3n-2)/n^2 h2",
                value: pinch::threshold_main(n, h2),
            },
            ThresholdLine {
                name: "main1",
                formula: "2(n+1)/3 - (n-17)/(3(n+3)) h2",
                value: pinch::threshold_main1(n, h2),
            },
            ThresholdLine {
                name: "main3",
                formula: "2(n+1)/3 if n <= 16, else 2(sqrt(3n-2)-1)",
                value: pinch::threshold_main3(n),
            },
            ThresholdLine {
                name: "tg",
                formula: "2 + 3/(n+1) h2",
                value: pinch::threshold_tg(n, h2),
            },
        ]);
    }
    let rc = pinch::reference_constants(n, codim);
    lines.extend([
        ThresholdLine {
            name: "simons",
            formula: "n/(2-1/p)",
            value: rc.simons,
        },
        ThresholdLine {
            name: "lili",
            formula: "2n/3",
            value: rc.lili,
        },
    ]);
    Ok(lines)
}

pub fn threshold_text(lines: &[ThresholdLine]) -> String {
    let mut out = String::new();
    for l in lines {
        let _ = writeln!(out, "{:<7} {:<16} {}", l.name, csv_num(l.value), l.formula);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::FamilyKind;

    #[test]
    fn sig9_rounds() {
        assert_eq!(sig9(3.7152777777777), 3.71527778);
        assert_eq!(sig9(-0.39506172839), -0.395061728);
        assert_eq!(sig9(0.0), 0.0);
        assert!(sig9(f64::NAN).is_nan());
    }

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "r1=0.1:0.95:86".parse().unwrap();
        assert_eq!(s.count, 86);
        let v = s.values();
        assert_eq!(v[0], 0.1);
        assert_eq!(v[85], 0.95);
        assert!(matches!("r1=0:1:1".parse::<Sweep>(), Err(Error::Usage(_))));
        assert!("r1=0:1".parse::<Sweep>().is_err());
        assert!("r1".parse::<Sweep>().is_err());
        let desc: Sweep = "r1=0.9:0.1:3".parse().unwrap();
        assert_eq!(desc.values(), vec![0.1, 0.5, 0.9]);
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(FamilySpec::new(FamilyKind::TotallyGeodesic, 2));
        assert!(c.validate().is_ok());
        c.grid = 1;
        assert!(c.validate().is_err());
        c.grid = 4;
        c.tol_fd = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn threshold_table_order() {
        let names: Vec<_> = threshold_table(3, 0.0, 3).unwrap().iter().map(|l| l.name).collect();
        assert_eq!(names, ["basic", "main", "main1", "main3", "tg", "simons", "lili"]);
        let names: Vec<_> = threshold_table(2, 0.0, 2).unwrap().iter().map(|l| l.name).collect();
        assert_eq!(names, ["basic", "simons", "lili"]);
        assert!(threshold_table(1, 0.0, 1).is_err());
        assert!(threshold_table(3, -1.0, 3).is_err());
    }

    #[test]
    fn small_verify_passes() {
        let mut c = RunConfig::new(FamilySpec::new(FamilyKind::CalabiProduct, 3).with("r1", 0.8));
        c.grid = 3;
        let r = run_verify(&c).unwrap();
        assert!(r.passed, "{:?}", r.failed_checks());
        assert!((r.margin("main").unwrap() + 0.395062).abs() < 1e-6);
        assert!(r.invariants.equality_basic);
    }
}
