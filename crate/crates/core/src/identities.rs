//! Residual checkers for the identities and inequalities satisfied by CSL
//! Legendrian submanifolds of the round sphere.
//!
//! Residuals built only from 2-jets are exact up to rounding. Those that need a
//! derivative of the mean curvature form or of the metric (closedness of `μ`,
//! the CSL condition `δμ = 0`) use central differences with step `h`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::adnum::fd_partial;
use crate::contact::{real_inner, AmbientVector};
use crate::error::{Error, Result};
use crate::geom::{check_nondegenerate, induced_metric, ric_jh, FundamentalData};
use crate::sample::evaluate;
use crate::tensor::{SymTensor3, Tensor3};
use crate::zoo::Immersion;

/// Below this `|H|` the mean curvature direction is not used to fix a frame.
pub const H_MIN: f64 = 1e-8;

/// `max |T_{ijk} - T_{π(ijk)}|` over all index permutations.
pub fn codazzi_symmetry_residual(sigma_raw: &Tensor3) -> f64 {
    let n = sigma_raw.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = sigma_raw.get(i, j, k);
                for w in [
                    sigma_raw.get(i, k, j),
                    sigma_raw.get(j, i, k),
                    sigma_raw.get(j, k, i),
                    sigma_raw.get(k, i, j),
                    sigma_raw.get(k, j, i),
                ] {
                    worst = worst.max((v - w).abs());
                }
            }
        }
    }
    worst
}

/// Coordinate components `η_a = Re ⟨H, conj(i ∂_a F)⟩` of the mean curvature form.
pub fn mean_curvature_covector(family: &dyn Immersion, u: &[f64]) -> Result<Vec<f64>> {
    let pd = evaluate(family, u)?;
    let mut h = AmbientVector::zeros(pd.jet.ambient_dim());
    for (mu_k, nu_k) in pd.fund.mu.iter().zip(&pd.frame.normals) {
        h.axpy(*mu_k, nu_k);
    }
    Ok((0..pd.jet.chart_dim())
        .map(|a| AmbientVector::new(pd.jet.partial(a)).j().dot(&h))
        .collect())
}

/// Jacobian `∂_a η_b` of the mean curvature covector, row `a`.
fn covector_jacobian(family: &dyn Immersion, u: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    let field = |p: &[f64]| mean_curvature_covector(family, p);
    (0..u.len()).map(|a| fd_partial(field, u, a, h)).collect()
}

/// `max_{a<b} |∂_a η_b - ∂_b η_a|`: closedness of the mean curvature form.
pub fn dmu_residual(family: &dyn Immersion, u: &[f64], h: f64) -> Result<f64> {
    let d = family.chart_dim();
    if u.len() != d {
        return Err(Error::ChartDimMismatch {
            expected: d,
            got: u.len(),
        });
    }
    let jac = covector_jacobian(family, u, h)?;
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in (a + 1)..d {
            worst = worst.max((jac[a][b] - jac[b][a]).abs());
        }
    }
    Ok(worst)
}

/// Christoffel symbols `Γ^c_{ab}` (flattened as `[c][a + b d]`) from the
/// exact first-kind symbols `Γ_{ab,e} = Re ⟨∂_a ∂_b F, conj(∂_e F)⟩`.
pub fn christoffels(family: &dyn Immersion, u: &[f64]) -> Result<Vec<Vec<f64>>> {
    let jet = family.eval(u)?;
    let d = jet.chart_dim();
    let g = induced_metric(&jet);
    check_nondegenerate(&g)?;
    let ginv = g.try_inverse().ok_or(Error::DegenerateMetric { det: 0.0 })?;
    let tangents: Vec<_> = (0..d).map(|e| jet.partial(e)).collect();
    let mut first = vec![vec![0.0; d]; d * d];
    for a in 0..d {
        for b in a..d {
            let second = jet.second(a, b);
            for e in 0..d {
                let v = real_inner(&second, &tangents[e]);
                first[a + b * d][e] = v;
                first[b + a * d][e] = v;
            }
        }
    }
    Ok((0..d)
        .map(|c| {
            (0..d * d)
                .map(|ab| (0..d).map(|e| ginv[(c, e)] * first[ab][e]).sum())
                .collect()
        })
        .collect())
}

/// [`christoffels`] from central differences of the induced metric instead.
pub fn christoffels_fd(family: &dyn Immersion, u: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    let d = family.chart_dim();
    let g = induced_metric(&family.eval(u)?);
    check_nondegenerate(&g)?;
    let ginv = g.try_inverse().ok_or(Error::DegenerateMetric { det: 0.0 })?;
    let metric_field = |p: &[f64]| -> Result<Vec<f64>> {
        let g = induced_metric(&family.eval(p)?);
        check_nondegenerate(&g)?;
        Ok(g.iter().copied().collect())
    };
    // dg[c][a + b d] = ∂_c g_ab, column-major as stored by nalgebra
    let dg: Vec<Vec<f64>> = (0..d)
        .map(|c| fd_partial(metric_field, u, c, h))
        .collect::<Result<_>>()?;
    let dgab = |c: usize, a: usize, b: usize| dg[c][a + b * d];
    Ok((0..d)
        .map(|c| {
            let mut row = vec![0.0; d * d];
            for a in 0..d {
                for b in 0..d {
                    row[a + b * d] = (0..d)
                        .map(|e| {
                            0.5 * ginv[(c, e)] * (dgab(a, b, e) + dgab(b, a, e) - dgab(e, a, b))
                        })
                        .sum();
                }
            }
            row
        })
        .collect())
}

/// `|g^{ab}(∂_a η_b - Γ^c_{ab} η_c)|`, the codifferential of the mean curvature
/// form. It vanishes exactly for CSL immersions. `∂_a η_b` comes from central
/// differences with step `h`; the Christoffel symbols are exact.
pub fn csl_residual(family: &dyn Immersion, u: &[f64], h: f64) -> Result<f64> {
    let d = family.chart_dim();
    if u.len() != d {
        return Err(Error::ChartDimMismatch {
            expected: d,
            got: u.len(),
        });
    }
    let ginv = evaluate(family, u)?.frame.inverse_metric();
    let eta = mean_curvature_covector(family, u)?;
    let jac = covector_jacobian(family, u, h)?;
    let gamma = christoffels(family, u)?;

    let mut div = 0.0;
    for a in 0..d {
        for b in 0..d {
            let gab = ginv[(a, b)];
            if gab == 0.0 {
                continue;
            }
            let gamma_eta: f64 = (0..d).map(|c| gamma[c][a + b * d] * eta[c]).sum();
            div += gab * (jac[a][b] - gamma_eta);
        }
    }
    Ok(div.abs())
}

/// Right-hand side of Simons' identity for `Δσ_{ijk}`, given `μ_{i,jk}`:
///
/// `μ_{i,jk} - μ_i δ_jk - μ_j δ_ik + Σ σ_ijt σ_tks μ_s + (n+1) σ_ijk
///  + 2 Σ σ_isl σ_jlt σ_kts - Σ σ_tli σ_tls σ_jks - Σ σ_tlj σ_tls σ_iks
///  - Σ σ_tlk σ_tls σ_ijs`.
pub fn simons_rhs(fund: &FundamentalData, hess_mu: &Tensor3) -> Result<Tensor3> {
    let n = fund.n;
    if hess_mu.dim() != n {
        return Err(Error::ShapeMismatch(format!(
            "hess_mu has dimension {}, expected {n}",
            hess_mu.dim()
        )));
    }
    let sigma = fund.sigma.to_dense();
    let mu = &fund.mu;
    let slices: Vec<DMatrix<f64>> = (0..n).map(|i| sigma.slice(i)).collect();
    // M_tk = Σ_s σ_tks μ_s ; P_is = Σ_{t,l} σ_tli σ_tls
    let m: DMatrix<f64> = DMatrix::from_fn(n, n, |t, k| (0..n).map(|s| sigma.get(t, k, s) * mu[s]).sum::<f64>());
    let p = DMatrix::from_fn(n, n, |i, s| (slices[i].transpose() * &slices[s]).trace());
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    let mut out = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let aij = &slices[i] * &slices[j];
            for k in 0..n {
                let mut v = hess_mu.get(i, j, k) - mu[i] * delta(j, k) - mu[j] * delta(i, k);
                v += (0..n).map(|t| sigma.get(i, j, t) * m[(t, k)]).sum::<f64>();
                v += (n as f64 + 1.0) * sigma.get(i, j, k);
                v += 2.0 * (&aij * &slices[k]).trace();
                for s in 0..n {
                    v -= p[(i, s)] * sigma.get(j, k, s)
                        + p[(j, s)] * sigma.get(i, k, s)
                        + p[(k, s)] * sigma.get(i, j, s);
                }
                out.set(i, j, k, v);
            }
        }
    }
    Ok(out)
}

/// Ricci term of the Bochner formula for `JH`; with `∇(JH) = 0` and constant
/// `|H|` the formula reduces to this quantity vanishing.
pub fn bochner_quantity(fund: &FundamentalData) -> f64 {
    ric_jh(fund)
}

/// Orthogonal matrix with first column `u` (unit), by a Householder reflection.
fn householder_with_first_column(u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut v = DVector::from_column_slice(u);
    v[0] -= 1.0;
    let vv = v.dot(&v);
    if vv < 1e-30 {
        return DMatrix::identity(n, n);
    }
    DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv)
}

/// Unit vector along `μ`; with `fix_sign` its first non-negligible component is made positive.
fn mean_curvature_direction(mu: &[f64], fix_sign: bool) -> Vec<f64> {
    let norm = mu.iter().map(|m| m * m).sum::<f64>().sqrt();
    let mut u: Vec<f64> = mu.iter().map(|m| m / norm).collect();
    if fix_sign {
        if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    u
}

/// `σ` in an orthonormal frame with `ê_1 ∥ μ`.
pub fn adapted_sigma(fund: &FundamentalData, fix_sign: bool) -> Option<(SymTensor3, f64)> {
    if fund.norm_h() <= H_MIN {
        return None;
    }
    let u = mean_curvature_direction(&fund.mu, fix_sign);
    let mu_hat1 = fund.mu.iter().zip(&u).map(|(m, x)| m * x).sum();
    let q = householder_with_first_column(&u);
    Some((fund.sigma.rotate(&q), mu_hat1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityCaseFit {
    pub lambda1: f64,
    pub lambda2: f64,
    pub structural_residual: f64,
    pub relation_residual: f64,
    /// Signed `⟨μ, ê_1⟩`, equal to `±|H|`.
    pub mu_hat1: f64,
    pub valid: bool,
}

impl EqualityCaseFit {
    /// `|λ2 - (μ̂_1 - λ1)/(n - 1)|`, the trace identity in the adapted frame.
    pub fn trace_residual(&self, n: usize) -> f64 {
        if n < 2 {
            return 0.0;
        }
        (self.lambda2 - (self.mu_hat1 - self.lambda1) / (n as f64 - 1.0)).abs()
    }
}

/// Fit of `σ` to the pattern `σ̂_111 = λ1, σ̂_1jj = λ2, all other σ̂ = 0`
/// in the frame `ê_1 ∥ μ` (sign fixed by the first nonzero component).
pub fn equality_case_fit(fund: &FundamentalData) -> EqualityCaseFit {
    let Some((s, mu_hat1)) = adapted_sigma(fund, true) else {
        return EqualityCaseFit {
            lambda1: 0.0,
            lambda2: 0.0,
            structural_residual: 0.0,
            relation_residual: 0.0,
            mu_hat1: 0.0,
            valid: false,
        };
    };
    let n = fund.n;
    let lambda1 = s.get(0, 0, 0);
    let lambda2 = if n > 1 {
        (1..n).map(|j| s.get(0, j, j)).sum::<f64>() / (n as f64 - 1.0)
    } else {
        0.0
    };
    let mut structural = 0.0f64;
    for j in 1..n {
        structural = structural.max(s.get(0, 0, j).abs());
        structural = structural.max((s.get(0, j, j) - lambda2).abs());
        for k in (j + 1)..n {
            structural = structural.max(s.get(0, j, k).abs());
        }
        for k in j..n {
            for l in k..n {
                structural = structural.max(s.get(j, k, l).abs());
            }
        }
    }
    EqualityCaseFit {
        lambda1,
        lambda2,
        structural_residual: structural,
        relation_residual: (1.0 + lambda1 * lambda2 - lambda2 * lambda2).abs(),
        mu_hat1,
        valid: true,
    }
}

fn require_surface(fund: &FundamentalData) -> Result<()> {
    if fund.n != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: fund.n,
        });
    }
    Ok(())
}

/// `f = 3σ̂_111 - 2|H|` with `ê_1 = JH/|H|`; equals `σ̂_111 - 2σ̂_122`.
pub fn surface_f(fund: &FundamentalData) -> Result<f64> {
    require_surface(fund)?;
    let (s, mu_hat1) = adapted_sigma(fund, false).ok_or(Error::ZeroMeanCurvature {
        norm: fund.norm_h(),
    })?;
    Ok(3.0 * s.get(0, 0, 0) - 2.0 * mu_hat1)
}

/// Unit direction maximizing the cubic form `σ(x, x, x)` on the unit circle,
/// returned as the rotation `[x, x⊥]`. At such a point `σ̂_112 = 0`.
pub fn cubic_critical_frame(sigma: &SymTensor3) -> DMatrix<f64> {
    let c = |th: f64| sigma.cubic(&[th.cos(), th.sin()]);
    let steps = 720;
    let mut best = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..steps {
        let th = std::f64::consts::TAU * i as f64 / steps as f64;
        let v = c(th);
        if v > best_val {
            best_val = v;
            best = th;
        }
    }
    // Newton on C'(θ) = 3σ(x, x, x⊥), C''(θ) = 6σ(x, x⊥, x⊥) - 3C(θ)
    let mixed = |th: f64, a: usize| {
        let x = [th.cos(), th.sin()];
        let y = [-th.sin(), th.cos()];
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let (p, q, r) = match a {
                        1 => (x[i], x[j], y[k]),
                        _ => (x[i], y[j], y[k]),
                    };
                    acc += sigma.get(i, j, k) * p * q * r;
                }
            }
        }
        acc
    };
    let mut th = best;
    for _ in 0..50 {
        let d1 = 3.0 * mixed(th, 1);
        let d2 = 6.0 * mixed(th, 2) - 3.0 * c(th);
        if d2 >= 0.0 || d1.abs() < 1e-16 {
            break;
        }
        let step = d1 / d2;
        th -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()])
}

/// `|1 + σ̂_111 σ̂_122 - σ̂_122²|` in the frame where `ê_1` maximizes the cubic
/// form (so `σ̂_112 = 0`). In that frame the quantity equals the Gauss curvature.
pub fn b2_relation_residual(fund: &FundamentalData) -> Result<f64> {
    require_surface(fund)?;
    let s = fund.sigma.rotate(&cubic_critical_frame(&fund.sigma));
    let (a, b) = (s.get(0, 0, 0), s.get(0, 1, 1));
    Ok((1.0 + a * b - b * b).abs())
}

/// `(Σ_{i,j} |[A_i, A_j]|² + Σ_{i,j} ⟨A_i, A_j⟩², 3/2 |σ|⁴)` for the slice
/// matrices `A_i = (σ_ijk)_{jk}`; the first never exceeds the second.
pub fn cdk_matrix_bound(fund: &FundamentalData) -> (f64, f64) {
    cdk_matrix_bound_sigma(&fund.sigma)
}

pub fn cdk_matrix_bound_sigma(sigma: &SymTensor3) -> (f64, f64) {
    let n = sigma.dim();
    let dense = sigma.to_dense();
    let slices: Vec<DMatrix<f64>> = (0..n).map(|i| dense.slice(i)).collect();
    let mut lhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            let comm = &slices[i] * &slices[j] - &slices[j] * &slices[i];
            lhs += comm.norm_squared();
            lhs += slices[i].dot(&slices[j]).powi(2);
        }
    }
    let s2 = sigma.norm2();
    (lhs, 1.5 * s2 * s2)
}

/// `(|σ̊|², (n+2)/(n-1) σ̊_111²)` with `ê_1 ∥ μ` (or the first frame vector when `μ = 0`).
pub fn traceless_chain(fund: &FundamentalData) -> (f64, f64) {
    let n = fund.n as f64;
    let s0 = match adapted_sigma(fund, true) {
        Some(_) => {
            let u = mean_curvature_direction(&fund.mu, true);
            fund.sigma0.rotate(&householder_with_first_column(&u))
        }
        None => fund.sigma0.clone(),
    };
    let lhs = fund.traceless_norm2();
    let rhs = if fund.n > 1 {
        (n + 2.0) / (n - 1.0) * s0.get(0, 0, 0).powi(2)
    } else {
        lhs
    };
    (lhs, rhs)
}

/// `(Ric(ê_1, ê_1), lower bound)` with `ê_1 = JH/|H|`, where the bound is
/// `n-1 - (n-2)/(n+2) √((n-1)/(n+2) |σ̊|²) |H| + 2(n-1)/(n+2)² |H|² - n/(n+2) |σ̊|²`.
/// `None` when `|H| <= H_MIN`.
pub fn ricci_lower_bound(fund: &FundamentalData) -> Option<(f64, f64)> {
    let h = fund.norm_h();
    if h <= H_MIN {
        return None;
    }
    let n = fund.n as f64;
    let s0 = fund.traceless_norm2();
    let lhs = ric_jh(fund) / fund.norm_h2;
    let rhs = n - 1.0 - (n - 2.0) / (n + 2.0) * ((n - 1.0) / (n + 2.0) * s0).sqrt() * h
        + 2.0 * (n - 1.0) / (n + 2.0).powi(2) * fund.norm_h2
        - n / (n + 2.0) * s0;
    Some((lhs, rhs))
}
