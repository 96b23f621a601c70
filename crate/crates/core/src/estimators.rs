//! Monte Carlo estimators checked against the closed forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::increments::IncrementWindow;
use crate::simulate::PathEnsemble;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl EstimateWithError {
    /// Mean of `samples` with standard error `sd / √n`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::domain(format!("need at least 2 samples, got {n}")));
        }
        let nf = n as f64;
        let mean = samples.iter().sum::<f64>() / nf;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
        Ok(EstimateWithError { value: mean, std_error: (var / nf).sqrt(), n_samples: n })
    }

    /// Whether `target` lies within `k` standard errors.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    /// Difference of two independent estimates, standard errors combined in quadrature.
    pub fn minus(&self, other: &EstimateWithError) -> EstimateWithError {
        EstimateWithError {
            value: self.value - other.value,
            std_error: self.std_error.hypot(other.std_error),
            n_samples: self.n_samples.min(other.n_samples),
        }
    }
}

fn check_index(e: &PathEnsemble, i: usize) -> Result<()> {
    let m = e.grid().len();
    if i < m {
        Ok(())
    } else {
        Err(Error::domain(format!("grid index {i} out of range (grid has {m} points)")))
    }
}

/// Mean of `X_i X_j` over paths, without mean subtraction (the processes are centered).
pub fn empirical_cov(e: &PathEnsemble, i: usize, j: usize) -> Result<EstimateWithError> {
    check_index(e, i)?;
    check_index(e, j)?;
    let products: Vec<f64> = e.paths().map(|p| p[i] * p[j]).collect();
    EstimateWithError::from_samples(&products)
}

fn grid_index(e: &PathEnsemble, t: f64) -> Result<usize> {
    e.grid()
        .index_of(t)
        .ok_or_else(|| Error::domain(format!("time {t} is not a grid point (no interpolation is done)")))
}

/// Pearson correlation of `S_{s+h} - S_s` and `S_{t+h} - S_t` across paths.
///
/// The standard error is the Fisher-transform value `1/√(n-3)` carried back
/// to the correlation scale, `(1 - r²)/√(n-3)`.
pub fn empirical_incr_corr(e: &PathEnsemble, w: IncrementWindow) -> Result<EstimateWithError> {
    let n = e.n_paths();
    if n < 4 {
        return Err(Error::domain(format!("increment correlation needs at least 4 paths, got {n}")));
    }
    let (s0, s1) = (grid_index(e, w.s)?, grid_index(e, w.s + w.h)?);
    let (t0, t1) = (grid_index(e, w.t)?, grid_index(e, w.t + w.h)?);
    let xs: Vec<f64> = e.paths().map(|p| p[s1] - p[s0]).collect();
    let ys: Vec<f64> = e.paths().map(|p| p[t1] - p[t0]).collect();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("increment correlation undefined: an increment has zero sample variance"));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(EstimateWithError { value: r, std_error: (1.0 - r * r) / (nf - 3.0).sqrt(), n_samples: n })
}

/// Mean over paths of `Σ_j (X_{t_{j+1}} - X_{t_j})²` on a uniform grid starting at 0.
pub fn realized_qv(e: &PathEnsemble) -> Result<EstimateWithError> {
    let g = e.grid();
    if !(g.starts_at_zero() && g.is_uniform()) {
        return Err(Error::domain("realized quadratic variation needs a uniform grid starting at 0"));
    }
    let sums: Vec<f64> = e
        .paths()
        .map(|p| p.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum())
        .collect();
    EstimateWithError::from_samples(&sums)
}
