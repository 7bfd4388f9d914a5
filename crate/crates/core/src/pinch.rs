//! Pinching thresholds for `|B|²` in terms of `|H|²`, and a pointwise classifier.
//!
//! All thresholds take `h2 = |H|²`; `|H|` is recovered internally where needed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::FundamentalData;

/// Default tolerance for calling a margin zero.
pub const DEFAULT_EQ_TOL: f64 = 1e-7;

fn nf(n: usize) -> f64 {
    n as f64
}

/// `(n-1)(n+2)/n + (n²+3n-2)/(2n²) h2 - (n-1)(n-2) √h2 √(4n+h2) / (2n²)`.
pub fn threshold_basic(n: usize, h2: f64) -> f64 {
    let n = nf(n);
    let h2 = h2.max(0.0);
    (n - 1.0) * (n + 2.0) / n + (n * n + 3.0 * n - 2.0) / (2.0 * n * n) * h2
        - (n - 1.0) * (n - 2.0) * h2.sqrt() * (4.0 * n + h2).sqrt() / (2.0 * n * n)
}

/// The Young-relaxed bound; maximal over `eps` at [`optimal_eps`], where it equals [`threshold_basic`].
pub fn threshold_eps(n: usize, h2: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::NonpositiveEpsilon(eps));
    }
    let n = nf(n);
    let c = (n - 1.0) * (n - 2.0);
    Ok((n - 1.0) * (n + 2.0) / n - c * eps / n
        + ((n * n + 3.0 * n - 2.0) / (2.0 * n * n) - c * (eps + 1.0 / eps) / (4.0 * n * n)) * h2)
}

/// `ε* = √(h2 / (4n + h2))`.
pub fn optimal_eps(n: usize, h2: f64) -> f64 {
    (h2 / (4.0 * nf(n) + h2)).sqrt()
}

/// `4(n-1)/n + (3n-2)/n² h2`, evaluated as the `ε = 1` case of [`threshold_eps`].
pub fn threshold_main(n: usize, h2: f64) -> f64 {
    threshold_eps(n, h2, 1.0).expect("eps = 1 is positive")
}

/// The closed form `4(n-1)/n + (3n-2)/n² h2`, which rounds differently from [`threshold_main`].
pub fn threshold_main_closed(n: usize, h2: f64) -> f64 {
    let n = nf(n);
    4.0 * (n - 1.0) / n + (3.0 * n - 2.0) / (n * n) * h2
}

/// `2(n+1)/3 - (n-17)/(3(n+3)) h2`.
pub fn threshold_main1(n: usize, h2: f64) -> f64 {
    let n = nf(n);
    2.0 * (n + 1.0) / 3.0 - (n - 17.0) / (3.0 * (n + 3.0)) * h2
}

/// `2(n+1)/3` for `n <= 16`, `2(√(3n-2) - 1)` from `n = 17` on.
pub fn threshold_main3(n: usize) -> f64 {
    if n <= 16 {
        main3_low_branch(n)
    } else {
        main3_high_branch(n)
    }
}

pub fn main3_low_branch(n: usize) -> f64 {
    2.0 * (nf(n) + 1.0) / 3.0
}

pub fn main3_high_branch(n: usize) -> f64 {
    2.0 * ((3.0 * nf(n) - 2.0).sqrt() - 1.0)
}

/// `2 + 3/(n+1) h2`.
pub fn threshold_tg(n: usize, h2: f64) -> f64 {
    2.0 + 3.0 / (nf(n) + 1.0) * h2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceConstants {
    /// `n / (2 - 1/p)`.
    pub simons: f64,
    /// `2n/3`.
    pub lili: f64,
}

pub fn reference_constants(n: usize, p: usize) -> ReferenceConstants {
    let n = nf(n);
    ReferenceConstants {
        simons: n / (2.0 - 1.0 / p as f64),
        lili: 2.0 * n / 3.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Basic,
    Main,
    Main1,
    Main3,
    Tg,
}

impl Threshold {
    pub const ALL: [Threshold; 5] = [
        Threshold::Basic,
        Threshold::Main,
        Threshold::Main1,
        Threshold::Main3,
        Threshold::Tg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Threshold::Basic => "basic",
            Threshold::Main => "main",
            Threshold::Main1 => "main1",
            Threshold::Main3 => "main3",
            Threshold::Tg => "tg",
        }
    }

    /// Smallest dimension the bound is stated for.
    pub fn min_dim(self) -> usize {
        match self {
            Threshold::Basic => 2,
            _ => 3,
        }
    }

    pub fn applies(self, n: usize) -> bool {
        n >= self.min_dim()
    }

    pub fn value(self, n: usize, h2: f64) -> f64 {
        match self {
            Threshold::Basic => threshold_basic(n, h2),
            Threshold::Main => threshold_main(n, h2),
            Threshold::Main1 => threshold_main1(n, h2),
            Threshold::Main3 => threshold_main3(n),
            Threshold::Tg => threshold_tg(n, h2),
        }
    }

    /// What the corresponding rigidity statement concludes when its hypothesis holds.
    pub fn conclusion(self) -> &'static str {
        match self {
            Threshold::Basic | Threshold::Main => "totally geodesic or Calabi product",
            Threshold::Main1 | Threshold::Main3 => "totally geodesic (if minimal)",
            Threshold::Tg => "totally geodesic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEntry {
    pub name: &'static str,
    pub pointwise_margin_min: f64,
    pub hypothesis_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub samples: usize,
    pub sup_b2: f64,
    pub inf_h2: f64,
    pub sup_h2: f64,
    pub thresholds: Vec<ThresholdEntry>,
    /// Samples with `|threshold_basic - |B|²| < eq_tol`.
    pub equality_points: usize,
}

impl GapReport {
    pub fn entry(&self, name: &str) -> Option<&ThresholdEntry> {
        self.thresholds.iter().find(|e| e.name == name)
    }
}

/// Pointwise comparison of every applicable threshold against the samples.
pub fn classify(samples: &[FundamentalData], n: usize, eq_tol: f64) -> Result<GapReport> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if !(eq_tol > 0.0) {
        return Err(Error::InvalidParams(format!("eq_tol must be positive, got {eq_tol}")));
    }
    if let Some(bad) = samples.iter().find(|s| s.n != n) {
        return Err(Error::WrongDimension {
            expected: n,
            got: bad.n,
        });
    }

    let active: Vec<Threshold> = Threshold::ALL.into_iter().filter(|t| t.applies(n)).collect();
    let mut margins = vec![f64::INFINITY; active.len()];
    let mut sup_b2 = f64::NEG_INFINITY;
    let mut inf_h2 = f64::INFINITY;
    let mut sup_h2 = f64::NEG_INFINITY;
    let mut equality_points = 0;
    for s in samples {
        sup_b2 = sup_b2.max(s.norm_b2);
        inf_h2 = inf_h2.min(s.norm_h2);
        sup_h2 = sup_h2.max(s.norm_h2);
        for (m, t) in margins.iter_mut().zip(&active) {
            *m = m.min(t.value(n, s.norm_h2) - s.norm_b2);
        }
        if (threshold_basic(n, s.norm_h2) - s.norm_b2).abs() < eq_tol {
            equality_points += 1;
        }
    }

    let thresholds = active
        .iter()
        .zip(margins)
        .map(|(t, m)| ThresholdEntry {
            name: t.name(),
            pointwise_margin_min: m,
            hypothesis_holds: m >= -eq_tol,
        })
        .collect();
    Ok(GapReport {
        n,
        samples: samples.len(),
        sup_b2,
        inf_h2,
        sup_h2,
        thresholds,
        equality_points,
    })
}
