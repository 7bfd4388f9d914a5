//! Frames and fundamental forms of a Legendrian immersion into `S^{2n+1}`.
//!
//! Everything is built from a [`Jet2`] at one chart point: the induced metric
//! from first derivatives, an orthonormal tangent frame by modified
//! Gram–Schmidt in chart order, and the cubic form
//! `σ_{ijk} = ⟨B(E_i, E_j), J E_k⟩` from second derivatives paired with the
//! normals `ν_k = i E_k`. Ricci curvature comes from the Gauss equation, never
//! from differentiating the metric.

use nalgebra::DMatrix;

use crate::adnum::Jet2;
use crate::contact::{real_inner, AmbientVector};
use crate::error::{Error, Result};
use crate::tensor::{SymTensor3, Tensor3};

/// Smallest accepted [`metric_conditioning`] before a chart point is called degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Scale-free determinant `det g / Π_a g_aa`, in `[0, 1]` for a positive
/// semidefinite `g`; zero (or NaN) exactly when the chart is singular.
pub fn metric_conditioning(g: &DMatrix<f64>) -> f64 {
    let diag: f64 = g.diagonal().iter().product();
    g.determinant() / diag
}

/// `Err(DegenerateMetric)` unless [`metric_conditioning`] reaches [`DEGENERACY_TOL`].
pub fn check_nondegenerate(g: &DMatrix<f64>) -> Result<f64> {
    let det = metric_conditioning(g);
    if !(det >= DEGENERACY_TOL) {
        return Err(Error::DegenerateMetric { det });
    }
    Ok(det)
}

/// `g_ab = Re ⟨∂_a F, conj(∂_b F)⟩`.
pub fn induced_metric(jet: &Jet2) -> DMatrix<f64> {
    let d = jet.chart_dim();
    let tangents: Vec<_> = (0..d).map(|a| jet.partial(a)).collect();
    DMatrix::from_fn(d, d, |a, b| real_inner(&tangents[a], &tangents[b]))
}

#[derive(Debug, Clone)]
pub struct FrameData {
    pub metric: DMatrix<f64>,
    /// Row `i` holds `e_i^a` with `E_i = Σ_a e_i^a ∂_a F`.
    pub frame_coeffs: DMatrix<f64>,
    pub tangents: Vec<AmbientVector>,
    pub normals: Vec<AmbientVector>,
    pub reeb: AmbientVector,
    pub position: AmbientVector,
}

impl FrameData {
    pub fn dim(&self) -> usize {
        self.tangents.len()
    }

    /// Inverse metric `g^{ab} = Σ_i e_i^a e_i^b`.
    pub fn inverse_metric(&self) -> DMatrix<f64> {
        self.frame_coeffs.transpose() * &self.frame_coeffs
    }

    /// `max |⟨E_i, E_j⟩ - δ_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.tangents[i].dot(&self.tangents[j]) - target).abs());
            }
        }
        worst
    }

    /// `max(|⟨ν_i, E_j⟩|, |⟨ν_i, F⟩|, |⟨ν_i, ν_j⟩ - δ_ij|)`; small exactly when the jet is Legendrian.
    pub fn normal_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(self.normals[i].dot(&self.position).abs());
            for j in 0..n {
                worst = worst.max(self.normals[i].dot(&self.tangents[j]).abs());
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.normals[i].dot(&self.normals[j]) - target).abs());
            }
        }
        worst
    }
}

/// Orthonormal frame by modified Gram–Schmidt on `∂_0 F, ∂_1 F, …` in that order.
pub fn build_frame(jet: &Jet2) -> Result<FrameData> {
    let d = jet.chart_dim();
    let metric = induced_metric(jet);
    let det = check_nondegenerate(&metric)?;

    let mut tangents: Vec<AmbientVector> = Vec::with_capacity(d);
    let mut coeffs = DMatrix::<f64>::zeros(d, d);
    for a in 0..d {
        let mut v = AmbientVector::new(jet.partial(a));
        let mut c = vec![0.0; d];
        c[a] = 1.0;
        for (j, ej) in tangents.iter().enumerate() {
            let r = v.dot(ej);
            v.axpy(-r, ej);
            for (cb, cj) in c.iter_mut().zip(coeffs.row(j).iter()) {
                *cb -= r * cj;
            }
        }
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::DegenerateMetric { det });
        }
        for (b, cb) in c.iter().enumerate() {
            coeffs[(a, b)] = cb / norm;
        }
        tangents.push(v.scaled(1.0 / norm));
    }

    let normals = tangents.iter().map(AmbientVector::j).collect();
    let position = AmbientVector::new(jet.value());
    Ok(FrameData {
        metric,
        frame_coeffs: coeffs,
        tangents,
        normals,
        reeb: position.j(),
        position,
    })
}

/// `Σ_{a,b} e_i^a e_j^b Re ⟨∂_a ∂_b F, conj(w)⟩` for a fixed ambient `w`.
fn frame_hessian_pairing(jet: &Jet2, frame: &FrameData, w: &AmbientVector) -> DMatrix<f64> {
    let d = jet.chart_dim();
    let mut coord = DMatrix::<f64>::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let v = real_inner(&jet.second(a, b), w.entries());
            coord[(a, b)] = v;
            coord[(b, a)] = v;
        }
    }
    &frame.frame_coeffs * coord * frame.frame_coeffs.transpose()
}

/// Cubic form before symmetrization: `T_{ijk} = ⟨B(E_i, E_j), ν_k⟩`.
///
/// Tangential parts of `∂_a ∂_b F` drop out against the normal `ν_k`, so no
/// connection terms are needed. Symmetry in `(i, j)` is automatic; symmetry in
/// the last slot holds only for Legendrian immersions.
pub fn cubic_form_raw(jet: &Jet2, frame: &FrameData) -> Tensor3 {
    let n = frame.dim();
    let slices: Vec<DMatrix<f64>> = frame
        .normals
        .iter()
        .map(|nu| frame_hessian_pairing(jet, frame, nu))
        .collect();
    Tensor3::from_fn(n, |i, j, k| slices[k][(i, j)])
}

/// `max_{i,j} |⟨B(E_i, E_j), i F⟩|`, which vanishes for Legendrian immersions.
pub fn reeb_component_residual(jet: &Jet2, frame: &FrameData) -> f64 {
    frame_hessian_pairing(jet, frame, &frame.reeb).amax()
}

#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub n: usize,
    pub sigma: SymTensor3,
    pub mu: Vec<f64>,
    pub sigma0: SymTensor3,
    pub norm_b2: f64,
    pub norm_h2: f64,
    pub ricci: DMatrix<f64>,
    pub gauss_curv: Option<f64>,
}

impl FundamentalData {
    /// Every derived quantity from the cubic form alone.
    pub fn from_sigma(sigma: SymTensor3) -> Self {
        let n = sigma.dim();
        let mu = sigma.trace();
        let sigma0 = sigma.traceless();
        let norm_b2 = sigma.norm2();
        let norm_h2 = mu.iter().map(|m| m * m).sum();
        let ricci = ricci_from_sigma(&sigma, &mu);
        let gauss_curv = (n == 2).then_some(0.5 * (2.0 + norm_h2 - norm_b2));
        Self {
            n,
            sigma,
            mu,
            sigma0,
            norm_b2,
            norm_h2,
            ricci,
            gauss_curv,
        }
    }

    pub fn norm_h(&self) -> f64 {
        self.norm_h2.sqrt()
    }

    /// `|σ̊|^2`.
    pub fn traceless_norm2(&self) -> f64 {
        self.sigma0.norm2()
    }

    /// `| |σ|^2 - |σ̊|^2 - 3/(n+2) |μ|^2 |`.
    pub fn pythagorean_residual(&self) -> f64 {
        let n = self.n as f64;
        (self.norm_b2 - self.traceless_norm2() - 3.0 / (n + 2.0) * self.norm_h2).abs()
    }
}

/// `Ric_ij = (n-1) δ_ij + Σ_k σ_ijk μ_k - Σ_{k,l} σ_ikl σ_jkl`.
fn ricci_from_sigma(sigma: &SymTensor3, mu: &[f64]) -> DMatrix<f64> {
    let n = sigma.dim();
    let dense = sigma.to_dense();
    let mut ric = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut v = if i == j { n as f64 - 1.0 } else { 0.0 };
            for k in 0..n {
                v += dense.get(i, j, k) * mu[k];
                for l in 0..n {
                    v -= dense.get(i, k, l) * dense.get(j, k, l);
                }
            }
            ric[(i, j)] = v;
            ric[(j, i)] = v;
        }
    }
    ric
}

pub fn fundamental_forms(jet: &Jet2, frame: &FrameData) -> Result<FundamentalData> {
    let n = jet.chart_dim();
    if frame.dim() != n {
        return Err(Error::ShapeMismatch(format!(
            "frame of dimension {} for a jet with chart dimension {n}",
            frame.dim()
        )));
    }
    if jet.ambient_dim() != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "Legendrian immersion of dimension {n} needs C^{}, got C^{}",
            n + 1,
            jet.ambient_dim()
        )));
    }
    let raw = cubic_form_raw(jet, frame);
    Ok(FundamentalData::from_sigma(SymTensor3::symmetrize(&raw)))
}

/// `κ = (2 + |H|^2 - |B|^2) / 2` for surfaces.
pub fn gauss_curvature(fund: &FundamentalData) -> Result<f64> {
    if fund.n != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: fund.n,
        });
    }
    Ok(0.5 * (2.0 + fund.norm_h2 - fund.norm_b2))
}

/// `μ^T Ric μ = Ric(JH, JH)`.
pub fn ric_jh(fund: &FundamentalData) -> f64 {
    let mu = nalgebra::DVector::from_column_slice(&fund.mu);
    (mu.transpose() * &fund.ricci * &mu)[(0, 0)]
}
