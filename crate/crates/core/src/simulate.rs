//! Exact Gaussian path sampling by covariance factorization.
//!
//! Two routes are provided. The direct one factors the target covariance on
//! the grid. The constructive one builds the process from its definition:
//! an fBm sampled jointly at `±t_k` gives `ξ^H_t = (B^H_t + B^H_{-t})/√2`,
//! a two-sided Bm gives `ξ` the same way, and `S = a ξ + b ξ^H`.
//!
//! Randomness: path `p` draws from `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `p`, so each path depends only on `(seed, p)` and the draw order
//! inside the path. Ensembles are bit-identical across thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{cov_matrix, fbm_cov, CovarianceMatrix, Hurst, ProcessKind, ProcessSpec, TimeGrid};
use crate::linalg::{factorize_jittered, LowerFactor};

/// Largest grid accepted by the samplers.
pub const MAX_GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMethod {
    Direct,
    Constructive,
}

impl SamplingMethod {
    pub fn name(self) -> &'static str {
        match self {
            SamplingMethod::Direct => "direct",
            SamplingMethod::Constructive => "constructive",
        }
    }
}

impl std::str::FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SamplingMethod::Direct),
            "constructive" => Ok(SamplingMethod::Constructive),
            other => Err(Error::domain(format!("unknown sampling method '{other}' (expected direct|constructive)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub spec: ProcessSpec,
    pub grid: TimeGrid,
    pub n_paths: usize,
    pub seed: u64,
    pub method: SamplingMethod,
}

impl SamplerConfig {
    pub fn new(spec: ProcessSpec, grid: TimeGrid, n_paths: usize, seed: u64, method: SamplingMethod) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::domain("n_paths must be at least 1"));
        }
        if grid.len() > MAX_GRID_POINTS {
            return Err(Error::domain(format!(
                "grid has {} points, above the sampling cap of {MAX_GRID_POINTS}; use a coarser grid or split the horizon",
                grid.len()
            )));
        }
        Ok(SamplerConfig { spec, grid, n_paths, seed, method })
    }
}

/// Factorization diagnostics recorded with an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationInfo {
    /// Largest jitter added to any factored covariance.
    pub jitter: f64,
    /// Smallest squared-pivot ratio over the factors.
    pub pivot_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEnsemble {
    pub config: SamplerConfig,
    /// `n_paths × grid.len()`, row-major, one row per path.
    pub values: Vec<f64>,
    pub info: GenerationInfo,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.config.n_paths
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.config.grid
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let m = self.config.grid.len();
        &self.values[p * m..(p + 1) * m]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.config.grid.len())
    }
}

pub fn sample(cfg: &SamplerConfig) -> Result<PathEnsemble> {
    match cfg.method {
        SamplingMethod::Direct => sample_direct(cfg),
        SamplingMethod::Constructive => sample_constructive(cfg),
    }
}

fn context(cfg: &SamplerConfig, err: Error) -> Error {
    let s = &cfg.spec;
    let pts = cfg.grid.points();
    let msg = format!(
        "sampling {} (a={}, b={}, H={}) on a {}-point grid [{}, {}]: {err}",
        s.kind.name(),
        s.coeffs.a,
        s.coeffs.b,
        s.hurst.value(),
        pts.len(),
        pts[0],
        pts[pts.len() - 1]
    );
    match err {
        Error::Numerical(_) => Error::Numerical(msg),
        Error::Domain(_) => Error::Domain(msg),
    }
}

// Grid points with t > 0; the only possible zero is the first point.
fn positive_points(grid: &TimeGrid) -> (bool, Vec<f64>) {
    let zero = grid.starts_at_zero();
    let pts = grid.points();
    (zero, if zero { pts[1..].to_vec() } else { pts.to_vec() })
}

fn factor_of(entries: &[f64], n: usize) -> Result<LowerFactor> {
    factorize_jittered(entries, n)
}

fn standard_normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

fn assemble(cfg: &SamplerConfig, info: GenerationInfo, gen: impl Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync) -> PathEnsemble {
    let zero = cfg.grid.starts_at_zero();
    let rows: Vec<Vec<f64>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(cfg.seed, p);
            let positive = gen(&mut rng);
            if zero {
                let mut row = Vec::with_capacity(positive.len() + 1);
                row.push(0.0);
                row.extend(positive);
                row
            } else {
                positive
            }
        })
        .collect();
    PathEnsemble { config: cfg.clone(), values: rows.concat(), info }
}

/// Samples `L z` with `L Lᵀ` the target covariance on the positive grid points.
pub fn sample_direct(cfg: &SamplerConfig) -> Result<PathEnsemble> {
    let (_, pos) = positive_points(&cfg.grid);
    let m = pos.len();
    let factor = if m == 0 {
        None
    } else {
        let grid = TimeGrid::new(pos).map_err(|e| context(cfg, e))?;
        let cov = cov_matrix(&cfg.spec, &grid);
        Some(factor_of(&cov.entries, m).map_err(|e| context(cfg, e))?)
    };
    let info = factor
        .as_ref()
        .map_or(GenerationInfo { jitter: 0.0, pivot_ratio: 1.0 }, |f| GenerationInfo { jitter: f.jitter, pivot_ratio: f.pivot_ratio });
    Ok(assemble(cfg, info, |rng| match &factor {
        None => Vec::new(),
        Some(f) => {
            let z = standard_normals(rng, m);
            let mut x = vec![0.0; m];
            f.mul_vec(&z, &mut x);
            x
        }
    }))
}

// One Gaussian component sampled through its own factor.
struct Component {
    weight: f64,
    factor: LowerFactor,
    // Mirrored components are sampled at (-t_m, …, -t_1, t_1, …, t_m) and folded.
    mirrored: bool,
}

impl Component {
    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        let n = self.factor.dim;
        let z = standard_normals(rng, n);
        let mut x = vec![0.0; n];
        self.factor.mul_vec(&z, &mut x);
        let m = out.len();
        if self.mirrored {
            for k in 0..m {
                // x[m-1-k] is at -t_k, x[m+k] at t_k
                out[k] += self.weight * (x[m + k] + x[m - 1 - k]) * std::f64::consts::FRAC_1_SQRT_2;
            }
        } else {
            for k in 0..m {
                out[k] += self.weight * x[k];
            }
        }
    }
}

fn mirrored_points(pos: &[f64]) -> Vec<f64> {
    pos.iter().rev().map(|t| -t).chain(pos.iter().copied()).collect()
}

fn fbm_matrix(points: &[f64], hurst: Hurst) -> Vec<f64> {
    let n = points.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = fbm_cov(points[i], points[j], hurst);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

fn component(weight: f64, hurst: Hurst, pos: &[f64], mirrored: bool) -> Result<Component> {
    let pts = if mirrored { mirrored_points(pos) } else { pos.to_vec() };
    let factor = factor_of(&fbm_matrix(&pts, hurst), pts.len())?;
    Ok(Component { weight, factor, mirrored })
}

// (weight, H, mirrored) per independent component: the Bm part first.
fn components_of(spec: &ProcessSpec) -> Vec<(f64, Hurst, bool)> {
    let (a, b, h) = (spec.coeffs.a, spec.coeffs.b, spec.hurst);
    let mirrored = matches!(spec.kind, ProcessKind::Bm | ProcessKind::Sfbm | ProcessKind::Smfbm);
    let all = match spec.kind {
        ProcessKind::Bm => vec![(1.0, Hurst::HALF)],
        ProcessKind::Fbm | ProcessKind::Sfbm => vec![(1.0, h)],
        ProcessKind::Mfbm | ProcessKind::Smfbm => vec![(a, Hurst::HALF), (b, h)],
    };
    all.into_iter().filter(|(w, _)| *w != 0.0).map(|(w, h)| (w, h, mirrored)).collect()
}

/// Samples by construction from independent (two-sided) fBm/Bm components.
pub fn sample_constructive(cfg: &SamplerConfig) -> Result<PathEnsemble> {
    let (_, pos) = positive_points(&cfg.grid);
    let m = pos.len();
    let comps = if m == 0 {
        Vec::new()
    } else {
        components_of(&cfg.spec)
            .into_iter()
            .map(|(w, h, mirrored)| component(w, h, &pos, mirrored))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| context(cfg, e))?
    };
    let info = comps.iter().fold(GenerationInfo { jitter: 0.0, pivot_ratio: 1.0 }, |acc, c| GenerationInfo {
        jitter: acc.jitter.max(c.factor.jitter),
        pivot_ratio: acc.pivot_ratio.min(c.factor.pivot_ratio),
    });
    Ok(assemble(cfg, info, |rng| {
        let mut out = vec![0.0; m];
        for c in &comps {
            c.draw(rng, &mut out);
        }
        out
    }))
}

/// Covariance implied by the constructive route, computed from the fBm
/// kernel alone: `Cov(ξ^H_s, ξ^H_t) = ½ Σ_{±,±} K_H(±s, ±t)`.
pub fn constructive_cov_matrix(spec: &ProcessSpec, grid: &TimeGrid) -> CovarianceMatrix {
    let comps = components_of(spec);
    let pts = grid.points();
    let n = pts.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let (s, t) = (pts[i], pts[j]);
            let v: f64 = comps
                .iter()
                .map(|&(w, h, mirrored)| {
                    let k = if mirrored {
                        0.5 * (fbm_cov(s, t, h) + fbm_cov(-s, t, h) + fbm_cov(s, -t, h) + fbm_cov(-s, -t, h))
                    } else {
                        fbm_cov(s, t, h)
                    };
                    w * w * k
                })
                .sum();
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    CovarianceMatrix { grid: grid.clone(), entries, jitter_applied: 0.0 }
}
