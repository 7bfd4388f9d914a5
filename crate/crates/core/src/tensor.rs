//! Small dense 3-tensors and fully symmetric 3-tensors in packed storage.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense `n x n x n` array, index order `(i, j, k)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries for n = {n}, got {}",
                n * n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Slice matrix `(t_{ijk})_{jk}` for fixed `i`.
    pub fn slice(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |j, k| self.get(i, j, k))
    }
}

/// Fully symmetric 3-tensor storing the `n(n+1)(n+2)/6` entries with `i <= j <= k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor3 {
    n: usize,
    entries: Vec<f64>,
}

pub fn packed_len3(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

fn sorted3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

fn packed_index3(n: usize, i: usize, j: usize, k: usize) -> usize {
    let (i, j, k) = sorted3(i, j, k);
    let mut idx = 0;
    for a in 0..i {
        idx += (n - a) * (n - a + 1) / 2;
    }
    for b in i..j {
        idx += n - b;
    }
    idx + (k - j)
}

impl SymTensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; packed_len3(n)],
        }
    }

    pub fn from_packed(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != packed_len3(n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} packed entries for n = {n}, got {}",
                packed_len3(n),
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    /// Average over the six index permutations.
    pub fn symmetrize(t: &Tensor3) -> Self {
        let n = t.dim();
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let sum = t.get(i, j, k)
                        + t.get(i, k, j)
                        + t.get(j, i, k)
                        + t.get(j, k, i)
                        + t.get(k, i, j)
                        + t.get(k, j, i);
                    s.set(i, j, k, sum / 6.0);
                }
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn packed(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries[packed_index3(self.n, i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let idx = packed_index3(self.n, i, j, k);
        self.entries[idx] = v;
    }

    pub fn to_dense(&self) -> Tensor3 {
        Tensor3::from_fn(self.n, |i, j, k| self.get(i, j, k))
    }

    /// `Σ_{ijk} σ_{ijk}^2` over all (not only independent) index triples.
    pub fn norm2(&self) -> f64 {
        let n = self.n;
        let mut sum = 0.0;
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mult = if i == j && j == k {
                        1.0
                    } else if i == j || j == k {
                        3.0
                    } else {
                        6.0
                    };
                    sum += mult * self.get(i, j, k).powi(2);
                }
            }
        }
        sum
    }

    /// `μ_k = Σ_i σ_{iik}`.
    pub fn trace(&self) -> Vec<f64> {
        (0..self.n)
            .map(|k| (0..self.n).map(|i| self.get(i, i, k)).sum())
            .collect()
    }

    /// The part `(μ_i δ_jk + μ_j δ_ki + μ_k δ_ij) / (n + 2)` built from a covector.
    pub fn trace_part(mu: &[f64]) -> Self {
        let n = mu.len();
        let c = 1.0 / (n as f64 + 2.0);
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                    s.set(i, j, k, c * (mu[i] * d(j, k) + mu[j] * d(k, i) + mu[k] * d(i, j)));
                }
            }
        }
        s
    }

    /// Traceless part `σ̊ = σ - trace_part(μ)`.
    pub fn traceless(&self) -> Self {
        let tp = Self::trace_part(&self.trace());
        self.zip_map(&tp, |a, b| a - b)
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Components in the frame whose `i`-th vector is column `i` of `q`:
    /// `σ̂_{ijk} = Σ σ_{abc} q_{ai} q_{bj} q_{ck}`.
    pub fn rotate(&self, q: &DMatrix<f64>) -> Self {
        let n = self.n;
        let dense = self.to_dense();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            let qab = q[(a, i)] * q[(b, j)];
                            if qab == 0.0 {
                                continue;
                            }
                            for c in 0..n {
                                acc += dense.get(a, b, c) * qab * q[(c, k)];
                            }
                        }
                    }
                    out.set(i, j, k, acc);
                }
            }
        }
        out
    }

    /// Cubic form `σ(x, x, x)`.
    pub fn cubic(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    acc += self.get(i, j, k) * x[i] * x[j] * x[k];
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_index_is_a_bijection_onto_sorted_triples() {
        for n in 1..=6 {
            let mut seen = vec![false; packed_len3(n)];
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let idx = packed_index3(n, i, j, k);
                        assert!(!seen[idx]);
                        seen[idx] = true;
                        assert_eq!(idx, packed_index3(n, k, i, j));
                    }
                }
            }
            assert!(seen.iter().all(|s| *s));
        }
    }

    #[test]
    fn norm_counts_permutations() {
        let mut s = SymTensor3::zeros(3);
        s.set(0, 0, 0, 1.0);
        s.set(0, 1, 1, 2.0);
        s.set(0, 1, 2, 1.0);
        let dense = s.to_dense();
        let brute: f64 = dense.as_slice().iter().map(|x| x * x).sum();
        assert_eq!(s.norm2(), brute);
        assert_eq!(brute, 1.0 + 3.0 * 4.0 + 6.0);
    }

    #[test]
    fn traceless_part_has_zero_trace() {
        let entries: Vec<f64> = (0..packed_len3(4)).map(|i| (i as f64 * 0.37).sin()).collect();
        let s = SymTensor3::from_packed(4, entries).unwrap();
        for m in s.traceless().trace() {
            assert!(m.abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_by_identity_is_exact() {
        let entries: Vec<f64> = (0..packed_len3(3)).map(|i| i as f64).collect();
        let s = SymTensor3::from_packed(3, entries).unwrap();
        assert_eq!(s.rotate(&DMatrix::identity(3, 3)), s);
    }
}
