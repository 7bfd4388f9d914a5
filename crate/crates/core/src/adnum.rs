//! Second-order jets of complex-valued maps of several real variables.
//!
//! A [`Jet2Scalar`] carries the value, gradient and Hessian of a function
//! `f: R^d -> C` at one point. Arithmetic follows the Leibniz and chain rules
//! truncated at order two, so compositions of polynomials and exponentials of
//! imaginary affine forms are differentiated exactly. The Hessian is stored as
//! its upper triangle and is therefore symmetric by construction.
//!
//! Third-order quantities (derivatives of the mean curvature form, Christoffel
//! symbols) are taken by central differences with [`fd_partial`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default central-difference step on O(1) chart scales.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
fn packed_len(d: usize) -> usize {
    d * (d + 1) / 2
}

#[inline]
fn packed_index(d: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * (2 * d - a + 1) / 2 + (b - a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2Scalar {
    value: Complex64,
    grad: Vec<Complex64>,
    hess: Vec<Complex64>,
}

impl Jet2Scalar {
    /// Constant jet: no derivatives.
    pub fn constant(c: Complex64, d: usize) -> Self {
        Self {
            value: c,
            grad: vec![ZERO; d],
            hess: vec![ZERO; packed_len(d)],
        }
    }

    pub fn real_constant(c: f64, d: usize) -> Self {
        Self::constant(Complex64::new(c, 0.0), d)
    }

    /// Seed for chart variable `a` at value `x`.
    pub fn variable(a: usize, x: f64, d: usize) -> Result<Self> {
        if a >= d {
            return Err(Error::IndexOutOfRange { index: a, dim: d });
        }
        let mut jet = Self::real_constant(x, d);
        jet.grad[a] = Complex64::new(1.0, 0.0);
        Ok(jet)
    }

    pub fn chart_dim(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn grad(&self) -> &[Complex64] {
        &self.grad
    }

    pub fn partial(&self, a: usize) -> Complex64 {
        self.grad[a]
    }

    pub fn second(&self, a: usize, b: usize) -> Complex64 {
        self.hess[packed_index(self.chart_dim(), a, b)]
    }

    /// Dense Hessian, row-major `d x d`.
    pub fn hess_dense(&self) -> Vec<Complex64> {
        let d = self.chart_dim();
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                out.push(self.second(a, b));
            }
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart_dim() != other.chart_dim() {
            return Err(Error::ChartDimMismatch {
                expected: self.chart_dim(),
                got: other.chart_dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: self.value + other.value,
            grad: zip_with(&self.grad, &other.grad, |x, y| x + y),
            hess: zip_with(&self.hess, &other.hess, |x, y| x + y),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            value: self.value - other.value,
            grad: zip_with(&self.grad, &other.grad, |x, y| x - y),
            hess: zip_with(&self.hess, &other.hess, |x, y| x - y),
        })
    }

    /// Product rule: `(fg)'' = f''g + f'g'^T + g'f'^T + fg''`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.chart_dim();
        let (f, g) = (self.value, other.value);
        let grad = zip_with(&self.grad, &other.grad, |df, dg| df * g + f * dg);
        let mut hess = vec![ZERO; packed_len(d)];
        for a in 0..d {
            for b in a..d {
                let k = packed_index(d, a, b);
                hess[k] = self.hess[k] * g
                    + f * other.hess[k]
                    + self.grad[a] * other.grad[b]
                    + self.grad[b] * other.grad[a];
            }
        }
        Ok(Self {
            value: f * g,
            grad,
            hess,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            value: self.value * c,
            grad: self.grad.iter().map(|x| x * c).collect(),
            hess: self.hess.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_real(-1.0)
    }

    /// `exp(i f)`. With `w = exp(i f)`: `w' = i f' w`, `w'' = (i f')(i f')^T w + i f'' w`.
    /// For an affine `f` the last term vanishes.
    pub fn exp_i(&self) -> Self {
        let d = self.chart_dim();
        let w = (I * self.value).exp();
        let igrad: Vec<Complex64> = self.grad.iter().map(|g| I * g).collect();
        let grad = igrad.iter().map(|g| g * w).collect();
        let mut hess = vec![ZERO; packed_len(d)];
        for a in 0..d {
            for b in a..d {
                let k = packed_index(d, a, b);
                hess[k] = (igrad[a] * igrad[b] + I * self.hess[k]) * w;
            }
        }
        Self {
            value: w,
            grad,
            hess,
        }
    }

    /// `cos f = (exp(i f) + exp(-i f)) / 2`, exact for real affine `f`.
    pub fn cos(&self) -> Self {
        let p = self.exp_i();
        let m = self.neg().exp_i();
        p.add(&m).expect("same chart").scale_real(0.5)
    }

    /// `sin f = (exp(i f) - exp(-i f)) / 2i`.
    pub fn sin(&self) -> Self {
        let p = self.exp_i();
        let m = self.neg().exp_i();
        p.sub(&m)
            .expect("same chart")
            .scale(Complex64::new(0.0, -0.5))
    }
}

fn zip_with(
    a: &[Complex64],
    b: &[Complex64],
    f: impl Fn(Complex64, Complex64) -> Complex64,
) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

/// 2-jet of a map into `C^m`: one [`Jet2Scalar`] per ambient component.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    components: Vec<Jet2Scalar>,
    chart_dim: usize,
}

impl Jet2 {
    pub fn new(components: Vec<Jet2Scalar>) -> Result<Self> {
        let chart_dim = components
            .first()
            .map(Jet2Scalar::chart_dim)
            .ok_or_else(|| Error::ShapeMismatch("jet with no components".into()))?;
        for c in &components {
            if c.chart_dim() != chart_dim {
                return Err(Error::ChartDimMismatch {
                    expected: chart_dim,
                    got: c.chart_dim(),
                });
            }
        }
        Ok(Self {
            components,
            chart_dim,
        })
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Jet2Scalar] {
        &self.components
    }

    pub fn value(&self) -> Vec<Complex64> {
        self.components.iter().map(Jet2Scalar::value).collect()
    }

    /// `∂_a F` as an ambient vector.
    pub fn partial(&self, a: usize) -> Vec<Complex64> {
        self.components.iter().map(|c| c.partial(a)).collect()
    }

    /// `∂_a ∂_b F` as an ambient vector.
    pub fn second(&self, a: usize, b: usize) -> Vec<Complex64> {
        self.components.iter().map(|c| c.second(a, b)).collect()
    }

    /// `| |F|^2 - 1 |`.
    pub fn sphere_defect(&self) -> f64 {
        let n2: f64 = self.components.iter().map(|c| c.value().norm_sqr()).sum();
        (n2 - 1.0).abs()
    }
}

/// Central difference `(f(p + h e_a) - f(p - h e_a)) / 2h` of a vector field.
pub fn fd_partial<F>(field: F, point: &[f64], a: usize, h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if a >= point.len() {
        return Err(Error::IndexOutOfRange {
            index: a,
            dim: point.len(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParams(format!("fd step must be positive, got {h}")));
    }
    let mut plus = point.to_vec();
    let mut minus = point.to_vec();
    plus[a] += h;
    minus[a] -= h;
    let fp = field(&plus)?;
    let fm = field(&minus)?;
    if fp.len() != fm.len() {
        return Err(Error::ShapeMismatch("field changed length across stencil".into()));
    }
    Ok(fp
        .iter()
        .zip(&fm)
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect())
}
