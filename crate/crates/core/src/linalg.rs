//! Dense symmetric linear algebra: Cholesky with jitter escalation and the
//! largest eigenvalue of a symmetric matrix.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Retries after the unjittered attempt.
pub const MAX_JITTER_RETRIES: usize = 6;
/// First nonzero jitter, relative to the mean diagonal.
pub const INITIAL_RELATIVE_JITTER: f64 = 1e-14;

/// Lower-triangular `L` with `L Lᵀ = A + jitter·I`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerFactor {
    pub dim: usize,
    pub data: Vec<f64>,
    pub jitter: f64,
    /// Smallest diagonal entry of `L` squared over the largest; a cheap
    /// conditioning diagnostic.
    pub pivot_ratio: f64,
}

impl LowerFactor {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..i * self.dim + i + 1]
    }

    /// `out = L z`.
    pub fn mul_vec(&self, z: &[f64], out: &mut [f64]) {
        debug_assert_eq!(z.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = self.row(i).iter().zip(z).map(|(l, z)| l * z).sum();
        }
    }
}

/// Plain Cholesky. On failure returns the 0-based index of the first
/// nonpositive pivot.
pub fn cholesky(a: &[f64], n: usize) -> std::result::Result<Vec<f64>, usize> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = l[i * n..i * n + j].iter().zip(&l[j * n..j * n + j]).map(|(x, y)| x * y).sum();
            let v = a[i * n + j] - dot;
            if i == j {
                if !(v > 0.0) {
                    return Err(i);
                }
                l[i * n + i] = v.sqrt();
            } else {
                l[i * n + j] = v / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Cholesky with jitter escalation: no jitter first, then
/// `1e-14·mean(diag)`, growing tenfold per retry, at most
/// [`MAX_JITTER_RETRIES`] retries.
pub fn factorize_jittered(a: &[f64], n: usize) -> Result<LowerFactor> {
    if n == 0 {
        return Ok(LowerFactor { dim: 0, data: vec![], jitter: 0.0, pivot_ratio: 1.0 });
    }
    let mean_diag = (0..n).map(|i| a[i * n + i]).sum::<f64>() / n as f64;
    let mut jitter = 0.0;
    let mut work = a.to_vec();
    for attempt in 0..=MAX_JITTER_RETRIES {
        if attempt > 0 {
            jitter = if attempt == 1 { INITIAL_RELATIVE_JITTER * mean_diag.abs() } else { jitter * 10.0 };
            for i in 0..n {
                work[i * n + i] = a[i * n + i] + jitter;
            }
        }
        if let Ok(data) = cholesky(&work, n) {
            let diag = (0..n).map(|i| data[i * n + i] * data[i * n + i]);
            let (lo, hi) = diag.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
            return Ok(LowerFactor { dim: n, data, jitter, pivot_ratio: lo / hi });
        }
    }
    Err(Error::numerical(format!(
        "Cholesky factorization of a {n}x{n} covariance failed even with jitter {jitter:e}"
    )))
}

/// Largest eigenvalue of a symmetric matrix.
pub fn largest_eigenvalue(a: &[f64], n: usize) -> f64 {
    let m = DMatrix::from_row_slice(n, n, a);
    m.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
