//! Built-in Legendrian immersions with closed-form reference data.
//!
//! * totally geodesic: the real unit sphere `S^n ⊂ R^{n+1} ⊂ C^{n+1}` in an
//!   angular chart;
//! * Calabi torus: the flat CSL surfaces in `S^5` parametrized by
//!   `r1, r2, r3, r4` with `r1² + r2² = r3² + r4² = 1`;
//! * Calabi product: `(γ₁ F, γ₂)` of the Legendrian curve
//!   `γ(t) = (r1 e^{i r2/r1 t}, r2 e^{-i r1/r2 t})` with the totally geodesic
//!   `S^{n-1} ⊂ S^{2n-1}`;
//! * Clifford torus: the flat minimal torus
//!   `(e^{iθ_1}, …, e^{iθ_n}, e^{-i Σθ}) / √(n+1)`. It has no published closed
//!   form beyond `n = 2` and is validated by the residual checks only.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::adnum::{Jet2, Jet2Scalar};
use crate::error::{Error, Result};
use crate::tensor::SymTensor3;

/// Tolerance on `r1² + r2² = 1`.
pub const PARAM_TOL: f64 = 1e-12;
/// Smallest admissible `|r_i|`.
pub const MIN_RADIUS: f64 = 1e-6;
/// Inset of polar angles from the chart poles.
pub const POLE_MARGIN: f64 = 0.1;
/// Smallest accepted product of polar sines, the coordinate speed of the
/// azimuth relative to the sphere radius. Below it rounding in the angular
/// chart dominates finite-difference residuals.
pub const CHART_SPEED_MIN: f64 = 5e-3;

const CLOSED_FORM_TOL: f64 = 1e-9;

/// A parametrized immersion with exact 2-jets.
pub trait Immersion: Send + Sync {
    fn chart_dim(&self) -> usize;
    fn eval(&self, u: &[f64]) -> Result<Jet2>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    TotallyGeodesic,
    CalabiTorus,
    CalabiProduct,
    CliffordTorus,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::TotallyGeodesic => "totally_geodesic",
            FamilyKind::CalabiTorus => "calabi_torus",
            FamilyKind::CalabiProduct => "calabi_product",
            FamilyKind::CliffordTorus => "clifford_torus",
        }
    }

    /// Parameter names accepted by the family.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyKind::CalabiTorus => &["r1", "r2", "r3", "r4"],
            FamilyKind::CalabiProduct => &["r1", "r2"],
            _ => &[],
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "totally_geodesic" | "tg" => Ok(FamilyKind::TotallyGeodesic),
            "calabi_torus" => Ok(FamilyKind::CalabiTorus),
            "calabi_product" => Ok(FamilyKind::CalabiProduct),
            "clifford_torus" | "clifford" => Ok(FamilyKind::CliffordTorus),
            other => Err(Error::InvalidParams(format!("unknown family '{other}'"))),
        }
    }
}

/// A family request as given by a user: missing `r2`/`r4` are completed to
/// the positive root of `r1² + r2² = 1` by [`FamilySpec::build`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        Self {
            kind,
            n,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn build(&self) -> Result<ImmersionFamily> {
        for key in self.params.keys() {
            if !self.kind.param_names().contains(&key.as_str()) {
                return Err(Error::InvalidParams(format!(
                    "parameter '{key}' does not belong to {}",
                    self.kind
                )));
            }
        }
        match self.kind {
            FamilyKind::TotallyGeodesic => totally_geodesic(self.n),
            FamilyKind::CliffordTorus => clifford_torus(self.n),
            FamilyKind::CalabiTorus => {
                if self.n != 2 {
                    return Err(Error::InvalidParams(format!(
                        "calabi_torus is a surface (n = 2), got n = {}",
                        self.n
                    )));
                }
                let (r1, r2) = self.pair("r1", "r2")?;
                let (r3, r4) = self.pair("r3", "r4")?;
                calabi_torus(r1, r2, r3, r4)
            }
            FamilyKind::CalabiProduct => {
                let (r1, r2) = self.pair("r1", "r2")?;
                calabi_product(self.n, r1, r2)
            }
        }
    }

    fn pair(&self, a: &str, b: &str) -> Result<(f64, f64)> {
        let get = |k: &str| self.params.get(k).copied();
        match (get(a), get(b)) {
            (Some(x), Some(y)) => Ok((x, y)),
            (Some(x), None) => Ok((x, complement(x, a)?)),
            (None, Some(y)) => Ok((complement(y, b)?, y)),
            (None, None) => Err(Error::InvalidParams(format!(
                "{} needs at least one of {a}, {b}",
                self.kind
            ))),
        }
    }
}

fn complement(x: f64, name: &str) -> Result<f64> {
    if !x.is_finite() || x.abs() >= 1.0 {
        return Err(Error::InvalidParams(format!(
            "|{name}| must be below 1 to complete {name}² + r² = 1, got {x}"
        )));
    }
    Ok((1.0 - x * x).sqrt())
}

fn check_unit_pair(a: f64, b: f64, na: &str, nb: &str) -> Result<()> {
    for (v, name) in [(a, na), (b, nb)] {
        if !v.is_finite() || v.abs() < MIN_RADIUS {
            return Err(Error::InvalidParams(format!(
                "{name} must be nonzero (|{name}| >= {MIN_RADIUS:e}), got {v}"
            )));
        }
    }
    let defect = a * a + b * b - 1.0;
    if defect.abs() > PARAM_TOL {
        return Err(Error::InvalidParams(format!(
            "{na}² + {nb}² = 1 violated: {na}² + {nb}² - 1 = {defect:e}"
        )));
    }
    Ok(())
}

/// One chart axis for sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Axis {
    const fn angle() -> Self {
        Self {
            lo: 0.0,
            hi: TAU,
            periodic: true,
        }
    }

    const fn polar() -> Self {
        Self {
            lo: POLE_MARGIN,
            hi: PI - POLE_MARGIN,
            periodic: false,
        }
    }

    /// `count` samples: endpoints included on closed axes, `[lo, hi)` on periodic ones.
    pub fn samples(&self, count: usize) -> Vec<f64> {
        if count <= 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        let span = self.hi - self.lo;
        let denom = if self.periodic { count } else { count - 1 } as f64;
        (0..count).map(|i| self.lo + span * i as f64 / denom).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    TotallyGeodesic,
    CalabiTorus { r1: f64, r2: f64, r3: f64, r4: f64 },
    CalabiProduct { r1: f64, r2: f64 },
    CliffordTorus,
}

/// A validated member of one of the built-in families.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionFamily {
    spec: FamilySpec,
    shape: Shape,
}

pub fn totally_geodesic(n: usize) -> Result<ImmersionFamily> {
    if n < 1 {
        return Err(Error::InvalidParams("totally_geodesic needs n >= 1".into()));
    }
    Ok(ImmersionFamily {
        spec: FamilySpec::new(FamilyKind::TotallyGeodesic, n),
        shape: Shape::TotallyGeodesic,
    })
}

pub fn calabi_torus(r1: f64, r2: f64, r3: f64, r4: f64) -> Result<ImmersionFamily> {
    check_unit_pair(r1, r2, "r1", "r2")?;
    check_unit_pair(r3, r4, "r3", "r4")?;
    Ok(ImmersionFamily {
        spec: FamilySpec::new(FamilyKind::CalabiTorus, 2)
            .with("r1", r1)
            .with("r2", r2)
            .with("r3", r3)
            .with("r4", r4),
        shape: Shape::CalabiTorus { r1, r2, r3, r4 },
    })
}

pub fn calabi_product(n: usize, r1: f64, r2: f64) -> Result<ImmersionFamily> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "calabi_product needs n >= 2, got {n}"
        )));
    }
    check_unit_pair(r1, r2, "r1", "r2")?;
    Ok(ImmersionFamily {
        spec: FamilySpec::new(FamilyKind::CalabiProduct, n)
            .with("r1", r1)
            .with("r2", r2),
        shape: Shape::CalabiProduct { r1, r2 },
    })
}

pub fn clifford_torus(n: usize) -> Result<ImmersionFamily> {
    if n < 1 {
        return Err(Error::InvalidParams("clifford_torus needs n >= 1".into()));
    }
    Ok(ImmersionFamily {
        spec: FamilySpec::new(FamilyKind::CliffordTorus, n),
        shape: Shape::CliffordTorus,
    })
}

/// Real unit sphere `S^k` from polar angles `θ_1..θ_{k-1}` and a final azimuth:
/// `(sin θ_1 · y, cos θ_1)` with `y ∈ S^{k-1}`, and `(cos θ, sin θ)` for `k = 1`.
fn sphere_point(angles: &[Jet2Scalar]) -> Result<Vec<Jet2Scalar>> {
    match angles {
        [] => Err(Error::ShapeMismatch("sphere chart with no angles".into())),
        [theta] => Ok(vec![theta.cos(), theta.sin()]),
        [theta, rest @ ..] => {
            let s = theta.sin();
            let mut out = sphere_point(rest)?
                .iter()
                .map(|y| s.mul(y))
                .collect::<Result<Vec<_>>>()?;
            out.push(theta.cos());
            Ok(out)
        }
    }
}

fn seed_variables(u: &[f64]) -> Result<Vec<Jet2Scalar>> {
    let d = u.len();
    u.iter()
        .enumerate()
        .map(|(a, x)| Jet2Scalar::variable(a, *x, d))
        .collect()
}

/// `exp(i Σ c_a u_a)` for a linear form given by its coefficients.
fn exp_i_linear(vars: &[Jet2Scalar], coeffs: &[f64]) -> Result<Jet2Scalar> {
    let d = vars.first().map(Jet2Scalar::chart_dim).unwrap_or(0);
    let mut form = Jet2Scalar::real_constant(0.0, d);
    for (v, c) in vars.iter().zip(coeffs) {
        if *c != 0.0 {
            form = form.add(&v.scale_real(*c))?;
        }
    }
    Ok(form.exp_i())
}

impl ImmersionFamily {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.kind
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.spec.params.get(key).copied()
    }

    pub fn axes(&self) -> Vec<Axis> {
        let n = self.n();
        match self.shape {
            Shape::TotallyGeodesic => {
                let mut axes = vec![Axis::polar(); n - 1];
                axes.push(Axis::angle());
                axes
            }
            Shape::CalabiTorus { .. } | Shape::CliffordTorus => vec![Axis::angle(); n],
            Shape::CalabiProduct { .. } => {
                let mut axes = vec![Axis::angle()];
                axes.extend(std::iter::repeat_n(Axis::polar(), n.saturating_sub(2)));
                axes.push(Axis::angle());
                axes
            }
        }
    }

    /// Smallest relative coordinate speed `Π sin θ_j` of the spherical factor
    /// at `u`; `1` for the tori, which have flat charts.
    pub fn chart_speed(&self, u: &[f64]) -> f64 {
        let polar = match self.shape {
            Shape::TotallyGeodesic => u.get(..u.len().saturating_sub(1)),
            Shape::CalabiProduct { .. } => u.get(1..u.len().saturating_sub(1)),
            Shape::CalabiTorus { .. } | Shape::CliffordTorus => None,
        };
        polar.map_or(1.0, |p| p.iter().map(|t| t.sin().abs()).product())
    }

    /// Whether `u` is far enough from the chart's singular set for residual checks.
    pub fn well_conditioned(&self, u: &[f64]) -> bool {
        self.chart_speed(u) >= CHART_SPEED_MIN
    }

    /// Closed-form reference data in the frame `E_1 = ∂_0 F / |∂_0 F|, …`
    /// produced by chart-order Gram–Schmidt.
    pub fn oracle(&self) -> Result<OracleData> {
        let n = self.n();
        match self.shape {
            Shape::TotallyGeodesic => Ok(OracleData::from_sigma(SymTensor3::zeros(n), false, false)),
            Shape::CalabiTorus { r1, r2, r3, r4 } => {
                let mut s = SymTensor3::zeros(2);
                s.set(0, 0, 0, r2 / r1 - r1 / r2);
                s.set(0, 1, 1, r2 / r1);
                // Gram–Schmidt normalizes ∂_s F by |r1|, so E_2 flips with the sign of r1
                s.set(1, 1, 1, (r4 / r3 - r3 / r4) / r1.abs());
                let minimal = (r1.abs() - (6.0f64).sqrt() / 3.0).abs() < CLOSED_FORM_TOL
                    && (r3.abs() - r4.abs()).abs() < CLOSED_FORM_TOL;
                // flat: |B|² = 2 + |H|², the n = 2 equality case
                Ok(OracleData::from_sigma(s, minimal, true))
            }
            Shape::CalabiProduct { r1, r2 } => {
                let mut s = SymTensor3::zeros(n);
                s.set(0, 0, 0, r2 / r1 - r1 / r2);
                for j in 1..n {
                    s.set(0, j, j, r2 / r1);
                }
                let critical = (n as f64 / (n as f64 + 1.0)).sqrt();
                let minimal = (r1.abs() - critical).abs() < CLOSED_FORM_TOL;
                let equality = r1.abs() <= critical + PARAM_TOL;
                Ok(OracleData::from_sigma(s, minimal, equality))
            }
            Shape::CliffordTorus if n <= 2 => {
                let norm_b2 = if n == 2 { 2.0 } else { 0.0 };
                Ok(OracleData {
                    sigma_expected: None,
                    h_frame: vec![0.0; n],
                    norm_b2,
                    norm_h2: 0.0,
                    minimal: true,
                    equality_basic: true,
                })
            }
            Shape::CliffordTorus => Err(Error::NoOracle(format!("clifford_torus with n = {n}"))),
        }
    }
}

impl Immersion for ImmersionFamily {
    fn chart_dim(&self) -> usize {
        self.n()
    }

    fn eval(&self, u: &[f64]) -> Result<Jet2> {
        let n = self.n();
        if u.len() != n {
            return Err(Error::ChartDimMismatch {
                expected: n,
                got: u.len(),
            });
        }
        let vars = seed_variables(u)?;
        let comps = match self.shape {
            Shape::TotallyGeodesic => sphere_point(&vars)?,
            Shape::CalabiTorus { r1, r2, r3, r4 } => {
                let phi1 = exp_i_linear(&vars, &[r2 / r1, r4 / r3])?;
                let phi2 = exp_i_linear(&vars, &[r2 / r1, -r3 / r4])?;
                let phi3 = exp_i_linear(&vars, &[-r1 / r2, 0.0])?;
                vec![
                    phi1.scale_real(r1 * r3),
                    phi2.scale_real(r1 * r4),
                    phi3.scale_real(r2),
                ]
            }
            Shape::CalabiProduct { r1, r2 } => {
                let t = &vars[0..1];
                let gamma1 = exp_i_linear(t, &[r2 / r1])?.scale_real(r1);
                let gamma2 = exp_i_linear(t, &[-r1 / r2])?.scale_real(r2);
                let mut comps = sphere_point(&vars[1..])?
                    .iter()
                    .map(|f| gamma1.mul(f))
                    .collect::<Result<Vec<_>>>()?;
                comps.push(gamma2);
                comps
            }
            Shape::CliffordTorus => {
                let scale = 1.0 / ((n + 1) as f64).sqrt();
                let mut comps = Vec::with_capacity(n + 1);
                let mut coeffs = vec![0.0; n];
                for a in 0..n {
                    coeffs.iter_mut().for_each(|c| *c = 0.0);
                    coeffs[a] = 1.0;
                    comps.push(exp_i_linear(&vars, &coeffs)?.scale_real(scale));
                }
                comps.push(exp_i_linear(&vars, &vec![-1.0; n])?.scale_real(scale));
                comps
            }
        };
        Jet2::new(comps)
    }
}

/// The curve `u ↦ (cos u, sin u · e^{iu})` in `S^3`, which is not Legendrian.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwistedCurve;

impl Immersion for TwistedCurve {
    fn chart_dim(&self) -> usize {
        1
    }

    fn eval(&self, u: &[f64]) -> Result<Jet2> {
        if u.len() != 1 {
            return Err(Error::ChartDimMismatch {
                expected: 1,
                got: u.len(),
            });
        }
        let x = Jet2Scalar::variable(0, u[0], 1)?;
        Jet2::new(vec![
            x.cos(),
            x.sin().mul(&x.exp_i())?,
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleData {
    /// `σ` in the chart-order frame, when a closed form exists.
    #[serde(skip)]
    pub sigma_expected: Option<SymTensor3>,
    #[serde(rename = "H_frame")]
    pub h_frame: Vec<f64>,
    #[serde(rename = "normB2")]
    pub norm_b2: f64,
    #[serde(rename = "normH2")]
    pub norm_h2: f64,
    pub minimal: bool,
    pub equality_basic: bool,
}

impl OracleData {
    fn from_sigma(sigma: SymTensor3, minimal: bool, equality_basic: bool) -> Self {
        let h_frame = sigma.trace();
        let norm_h2 = h_frame.iter().map(|h| h * h).sum();
        let norm_b2 = sigma.norm2();
        Self {
            sigma_expected: Some(sigma),
            h_frame,
            norm_b2,
            norm_h2,
            minimal,
            equality_basic,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn totally_geodesic_s2_at_equator() {
        let f = totally_geodesic(2).unwrap();
        let jet = f.eval(&[FRAC_PI_2, 0.0]).unwrap();
        let x = jet.value();
        assert_abs_diff_eq!(x[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[2].re, 0.0, epsilon = 1e-15);
        assert!(x.iter().all(|z| z.im.abs() < 1e-16));
    }

    #[test]
    fn calabi_torus_base_point() {
        let f = calabi_torus(0.6, 0.8, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let x = f.eval(&[0.0, 0.0]).unwrap().value();
        assert_abs_diff_eq!(x[0].re, 0.6 * FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1].re, 0.6 * FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(x[2].re, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn invalid_torus_parameters_name_the_constraint() {
        let err = calabi_torus(0.6, 0.7, 0.6, 0.8).unwrap_err();
        match err {
            Error::InvalidParams(msg) => assert!(msg.contains("r1² + r2² = 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(calabi_torus(0.0, 1.0, 0.6, 0.8).is_err());
        assert!(calabi_product(1, 0.6, 0.8).is_err());
    }

    #[test]
    fn spec_completes_missing_radius() {
        let fam = FamilySpec::new(FamilyKind::CalabiProduct, 3)
            .with("r1", 0.8)
            .build()
            .unwrap();
        assert_abs_diff_eq!(fam.param("r2").unwrap(), 0.6, epsilon = 1e-15);
        let bad = FamilySpec::new(FamilyKind::CalabiProduct, 3).with("r5", 0.1).build();
        assert!(matches!(bad, Err(Error::InvalidParams(_))));
        assert!(FamilySpec::new(FamilyKind::CalabiTorus, 3).with("r1", 0.5).with("r3", 0.5).build().is_err());
    }

    #[test]
    fn kinds_parse_from_cli_spellings() {
        assert_eq!("calabi-torus".parse::<FamilyKind>().unwrap(), FamilyKind::CalabiTorus);
        assert_eq!("calabi_product".parse::<FamilyKind>().unwrap(), FamilyKind::CalabiProduct);
        assert_eq!("totally-geodesic".parse::<FamilyKind>().unwrap(), FamilyKind::TotallyGeodesic);
        assert!("veronese".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn oracle_flags() {
        let s6 = (6.0f64).sqrt() / 3.0;
        let s3 = (3.0f64).sqrt() / 3.0;
        let o = calabi_torus(s6, s3, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap().oracle().unwrap();
        assert!(o.minimal);
        assert_abs_diff_eq!(o.norm_b2, 2.0, epsilon = 1e-14);

        let o = calabi_product(4, (0.8f64).sqrt(), (0.2f64).sqrt()).unwrap().oracle().unwrap();
        assert!(o.minimal);

        let o = calabi_product(3, 0.8, 0.6).unwrap().oracle().unwrap();
        assert!(o.equality_basic);
        assert!(!o.minimal);
        // |B|² = λ1² + 3(n-1)λ2² and |H|² = (λ1 + (n-1)λ2)² with λ1 = -7/12, λ2 = 3/4
        assert_abs_diff_eq!(o.norm_b2, 49.0 / 144.0 + 6.0 * 9.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(o.norm_h2, (-7.0 / 12.0 + 1.5f64).powi(2), epsilon = 1e-14);

        assert!(matches!(clifford_torus(3).unwrap().oracle(), Err(Error::NoOracle(_))));
    }

    #[test]
    fn axis_sampling() {
        let a = Axis::angle().samples(4);
        assert_eq!(a, vec![0.0, TAU / 4.0, TAU / 2.0, 3.0 * TAU / 4.0]);
        let p = Axis::polar().samples(3);
        assert_abs_diff_eq!(p[0], POLE_MARGIN);
        assert_abs_diff_eq!(p[2], PI - POLE_MARGIN);
    }
}
