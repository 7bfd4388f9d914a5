//! Standard contact structure of the round sphere `S^{2n+1} ⊂ C^{n+1}`.
//!
//! `C^{n+1}` is identified with `R^{2n+2}` through the real inner product
//! `Re Σ u_α conj(v_α)`, and the complex structure `J` is multiplication by `i`.
//! The contact form is normalized so that the Reeb field `i x` pairs to one.

use std::ops::Index;

use num_complex::Complex64;

use crate::adnum::Jet2;
use crate::error::{Error, Result};

/// Absolute tolerance for `| |x| - 1 |`.
pub const ON_SPHERE_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector(pub Vec<Complex64>);

impl AmbientVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    /// Real inner product `Re ⟨u, v̄⟩` on `R^{2m}`.
    pub fn dot(&self, other: &Self) -> f64 {
        real_inner(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `J v = i v`.
    pub fn j(&self) -> Self {
        Self(self.0.iter().map(|z| I * z).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        for (z, w) in self.0.iter_mut().zip(&other.0) {
            *z += w * c;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for AmbientVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for AmbientVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

pub fn real_inner(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a * b.conj()).re).sum()
}

/// Hermitian product `Σ u_α conj(v_α)`.
pub fn hermitian(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

fn check_on_sphere(x: &AmbientVector) -> Result<()> {
    let norm = x.norm();
    if !x.is_finite() || (norm - 1.0).abs() >= ON_SPHERE_TOL {
        return Err(Error::OffSphere { norm });
    }
    Ok(())
}

/// `α_x(v) = Re ⟨v, conj(i x)⟩`, i.e. `Σ (x_j dy_j - y_j dx_j)(v)` without the ½.
pub fn contact_alpha(x: &AmbientVector, v: &AmbientVector) -> Result<f64> {
    check_on_sphere(x)?;
    Ok(v.dot(&x.j()))
}

/// Reeb field `R(x) = i x`.
pub fn reeb(x: &AmbientVector) -> Result<AmbientVector> {
    check_on_sphere(x)?;
    Ok(x.j())
}

/// Largest violation of the Legendrian conditions
/// `Σ_α F^α_a conj(F^α) = 0` and `Σ_α F^α_a conj(F^α_b) = Σ_α F^α_b conj(F^α_a)`.
pub fn legendrian_residual(jet: &Jet2) -> f64 {
    let f = jet.value();
    let d = jet.chart_dim();
    let tangents: Vec<Vec<Complex64>> = (0..d).map(|a| jet.partial(a)).collect();
    let mut worst = 0.0f64;
    for ta in &tangents {
        worst = worst.max(hermitian(ta, &f).norm());
    }
    for a in 0..d {
        for b in (a + 1)..d {
            let sym = hermitian(&tangents[a], &tangents[b]) - hermitian(&tangents[b], &tangents[a]);
            worst = worst.max(sym.norm());
        }
    }
    worst
}

/// `max_a |α_F(∂_a F)|`.
pub fn contact_alpha_on_tangents(jet: &Jet2) -> Result<f64> {
    let x = AmbientVector::new(jet.value());
    (0..jet.chart_dim()).try_fold(0.0f64, |acc, a| {
        let v = AmbientVector::new(jet.partial(a));
        Ok(acc.max(contact_alpha(&x, &v)?.abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn alpha_examples() {
        let x = AmbientVector::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(contact_alpha(&x, &x.j()).unwrap(), 1.0);
        let v = AmbientVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(contact_alpha(&x, &v).unwrap(), 0.0);

        let x = AmbientVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]);
        assert_abs_diff_eq!(contact_alpha(&x, &x.j()).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn off_sphere_is_rejected() {
        let x = AmbientVector::new(vec![c(1.1, 0.0), c(0.0, 0.0)]);
        assert!(matches!(contact_alpha(&x, &x), Err(Error::OffSphere { .. })));
        assert!(matches!(reeb(&x), Err(Error::OffSphere { .. })));
    }

    #[test]
    fn reeb_examples() {
        let x = AmbientVector::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(reeb(&x).unwrap().0, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let x = AmbientVector::new(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(reeb(&x).unwrap().0, vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn j_squared_is_minus_identity() {
        let v = AmbientVector::new(vec![c(0.3, -1.7), c(2.5, 0.125), c(-0.0, 4.0)]);
        let jj = v.j().j();
        for (a, b) in jj.0.iter().zip(&v.0) {
            assert_eq!(*a, -*b);
        }
    }
}
