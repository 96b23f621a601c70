//! Covariance kernels for Bm, fBm, sfBm, mfBm and smfBm.
//!
//! Parameters are validated once, when a [`Hurst`], [`MixCoeffs`] or
//! [`ProcessSpec`] is built. The kernels themselves only check the sign of
//! their time arguments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powers::{mid_gap, pow0};

/// Hurst index, `0 < H < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Hurst(f64);

impl Hurst {
    pub const HALF: Hurst = Hurst(0.5);

    pub fn new(h: f64) -> Result<Self> {
        if h > 0.0 && h < 1.0 {
            Ok(Hurst(h))
        } else {
            Err(Error::domain(format!("Hurst index must lie in (0, 1), got {h}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The exponent `2H` used throughout the kernels.
    #[inline]
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }

    #[inline]
    pub fn is_half(self) -> bool {
        self.0 == 0.5
    }
}

impl<'de> Deserialize<'de> for Hurst {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let h = f64::deserialize(de)?;
        Hurst::new(h).map_err(serde::de::Error::custom)
    }
}

/// Weights `(a, b)` of the Brownian and the (sub-)fractional parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixCoeffs {
    pub a: f64,
    pub b: f64,
}

impl MixCoeffs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!("(a,b) must be finite, got ({a},{b})")));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::domain("(a,b) must not be (0,0)"));
        }
        Ok(MixCoeffs { a, b })
    }

    pub const BROWNIAN: MixCoeffs = MixCoeffs { a: 1.0, b: 0.0 };
    pub const FRACTIONAL: MixCoeffs = MixCoeffs { a: 0.0, b: 1.0 };

    #[inline]
    pub fn a2(self) -> f64 {
        self.a * self.a
    }

    #[inline]
    pub fn b2(self) -> f64 {
        self.b * self.b
    }
}

impl<'de> Deserialize<'de> for MixCoeffs {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: f64,
            b: f64,
        }
        let raw = Raw::deserialize(de)?;
        MixCoeffs::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Bm,
    Fbm,
    Sfbm,
    Mfbm,
    Smfbm,
}

impl ProcessKind {
    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Bm => "bm",
            ProcessKind::Fbm => "fbm",
            ProcessKind::Sfbm => "sfbm",
            ProcessKind::Mfbm => "mfbm",
            ProcessKind::Smfbm => "smfbm",
        }
    }
}

impl std::str::FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bm" => Ok(ProcessKind::Bm),
            "fbm" => Ok(ProcessKind::Fbm),
            "sfbm" => Ok(ProcessKind::Sfbm),
            "mfbm" => Ok(ProcessKind::Mfbm),
            "smfbm" => Ok(ProcessKind::Smfbm),
            other => Err(Error::domain(format!(
                "unknown process '{other}' (expected bm, fbm, sfbm, mfbm or smfbm)"
            ))),
        }
    }
}

/// Process family plus parameters; decides which kernel applies.
///
/// Bm is pinned to `(a,b) = (1,0)`, `H = 1/2`; fBm and sfBm to `(a,b) = (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub coeffs: MixCoeffs,
    pub hurst: Hurst,
}

#[derive(Deserialize)]
struct RawSpec {
    kind: ProcessKind,
    coeffs: Option<MixCoeffs>,
    hurst: Option<f64>,
}

impl TryFrom<RawSpec> for ProcessSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let (a, b) = raw.coeffs.map(|c| (c.a, c.b)).unwrap_or((1.0, 1.0));
        ProcessSpec::new(raw.kind, a, b, raw.hurst.unwrap_or(0.5))
    }
}

impl ProcessSpec {
    /// Builds a spec, ignoring whichever of `(a, b, H)` the family fixes.
    pub fn new(kind: ProcessKind, a: f64, b: f64, hurst: f64) -> Result<Self> {
        Ok(match kind {
            ProcessKind::Bm => Self::bm(),
            ProcessKind::Fbm => Self::fbm(Hurst::new(hurst)?),
            ProcessKind::Sfbm => Self::sfbm(Hurst::new(hurst)?),
            ProcessKind::Mfbm => Self::mfbm(MixCoeffs::new(a, b)?, Hurst::new(hurst)?),
            ProcessKind::Smfbm => Self::smfbm(MixCoeffs::new(a, b)?, Hurst::new(hurst)?),
        })
    }

    pub fn bm() -> Self {
        ProcessSpec { kind: ProcessKind::Bm, coeffs: MixCoeffs::BROWNIAN, hurst: Hurst::HALF }
    }

    pub fn fbm(hurst: Hurst) -> Self {
        ProcessSpec { kind: ProcessKind::Fbm, coeffs: MixCoeffs::FRACTIONAL, hurst }
    }

    pub fn sfbm(hurst: Hurst) -> Self {
        ProcessSpec { kind: ProcessKind::Sfbm, coeffs: MixCoeffs::FRACTIONAL, hurst }
    }

    pub fn mfbm(coeffs: MixCoeffs, hurst: Hurst) -> Self {
        ProcessSpec { kind: ProcessKind::Mfbm, coeffs, hurst }
    }

    pub fn smfbm(coeffs: MixCoeffs, hurst: Hurst) -> Self {
        ProcessSpec { kind: ProcessKind::Smfbm, coeffs, hurst }
    }

    /// Covariance `Cov(X_s, X_t)` for `s, t >= 0`.
    pub fn cov(&self, s: f64, t: f64) -> Result<f64> {
        check_nonneg(s, t)?;
        Ok(self.cov_unchecked(s, t))
    }

    /// Kernel without the sign check, for callers that validated their times.
    #[inline]
    pub(crate) fn cov_unchecked(&self, s: f64, t: f64) -> f64 {
        let h = self.hurst;
        match self.kind {
            ProcessKind::Bm => s.min(t),
            ProcessKind::Fbm => fbm_cov(s, t, h),
            ProcessKind::Sfbm => sfbm_cov_raw(s, t, h),
            ProcessKind::Mfbm => mfbm_cov_raw(s, t, self.coeffs, h),
            ProcessKind::Smfbm => smfbm_cov_raw(s, t, self.coeffs, h),
        }
    }

    pub fn var(&self, t: f64) -> Result<f64> {
        self.cov(t, t)
    }
}

#[inline]
fn check_nonneg(s: f64, t: f64) -> Result<()> {
    if s >= 0.0 && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("times must be nonnegative, got s={s}, t={t}")))
    }
}

/// fBm covariance `½(|t|^{2H} + |s|^{2H} - |t-s|^{2H})`, defined for all real `s, t`.
#[inline]
pub fn fbm_cov(s: f64, t: f64, hurst: Hurst) -> f64 {
    let p = hurst.twice();
    0.5 * (pow0(t.abs(), p) + pow0(s.abs(), p) - pow0((t - s).abs(), p))
}

/// sfBm covariance `s^{2H} + t^{2H} - ½((s+t)^{2H} + |t-s|^{2H})`.
pub fn sfbm_cov(s: f64, t: f64, hurst: Hurst) -> Result<f64> {
    check_nonneg(s, t)?;
    Ok(sfbm_cov_raw(s, t, hurst))
}

// Written as lo^p + [hi^p - ((hi+lo)^p + (hi-lo)^p)/2]; the bracket is the
// part that cancels when lo << hi and is evaluated by series there.
#[inline]
pub(crate) fn sfbm_cov_raw(s: f64, t: f64, hurst: Hurst) -> f64 {
    if hurst.is_half() {
        return s.min(t);
    }
    let p = hurst.twice();
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    pow0(lo, p) + mid_gap(hi, lo, p)
}

/// mfBm covariance `a² min(s,t) + (b²/2)(t^{2H} + s^{2H} - |t-s|^{2H})`.
pub fn mfbm_cov(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_nonneg(s, t)?;
    Ok(mfbm_cov_raw(s, t, coeffs, hurst))
}

#[inline]
pub(crate) fn mfbm_cov_raw(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    coeffs.a2() * s.min(t) + coeffs.b2() * fbm_cov(s, t, hurst)
}

/// smfBm covariance `a² min(s,t) + b² sfbm_cov(s,t)`.
pub fn smfbm_cov(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_nonneg(s, t)?;
    Ok(smfbm_cov_raw(s, t, coeffs, hurst))
}

#[inline]
pub(crate) fn smfbm_cov_raw(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    coeffs.a2() * s.min(t) + coeffs.b2() * sfbm_cov_raw(s, t, hurst)
}

/// smfBm variance `a² t + b² (2 - 2^{2H-1}) t^{2H}`.
pub fn smfbm_var(t: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_nonneg(t, t)?;
    let p = hurst.twice();
    Ok(coeffs.a2() * t + coeffs.b2() * (2.0 - 2f64.powf(p - 1.0)) * pow0(t, p))
}

/// Mixed self-similarity: `S_{ht}(a, b)` has the law of `S_t(a h^{1/2}, b h^H)`.
pub fn rescale_params(coeffs: MixCoeffs, hurst: Hurst, h: f64) -> Result<MixCoeffs> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("scale factor must be positive, got {h}")));
    }
    Ok(MixCoeffs { a: coeffs.a * h.sqrt(), b: coeffs.b * h.powf(hurst.value()) })
}

/// Strictly increasing, nonnegative time points.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("time grid must contain at least one point"));
        }
        if let Some(bad) = points.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::domain(format!("time grid points must be finite and >= 0, got {bad}")));
        }
        if let Some(w) = points.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::domain(format!(
                "time grid must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(TimeGrid { points })
    }

    /// `count` equal intervals on `[start, end]`, i.e. `count + 1` points.
    pub fn uniform(start: f64, end: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::domain("uniform grid needs at least one interval"));
        }
        if !(end > start) {
            return Err(Error::domain(format!("grid end {end} must exceed start {start}")));
        }
        let step = (end - start) / count as f64;
        let mut points: Vec<f64> = (0..=count).map(|i| start + i as f64 * step).collect();
        points[count] = end;
        TimeGrid::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn starts_at_zero(&self) -> bool {
        self.points[0] == 0.0
    }

    /// Grid with every point multiplied by `h > 0`.
    pub fn scaled(&self, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain(format!("scale factor must be positive, got {h}")));
        }
        TimeGrid::new(self.points.iter().map(|t| t * h).collect())
    }

    /// Equally spaced to within `1e-9` relative.
    pub fn is_uniform(&self) -> bool {
        if self.points.len() < 2 {
            return false;
        }
        let n = self.points.len() - 1;
        let step = (self.points[n] - self.points[0]) / n as f64;
        self.points.windows(2).all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step)
    }

    /// Index of the grid point equal to `t` (within `1e-9` relative to the grid span).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let span = self.points.last().copied().unwrap_or(0.0).max(1.0);
        let tol = 1e-9 * span;
        let idx = self.points.partition_point(|p| *p < t - tol);
        (idx < self.points.len() && (self.points[idx] - t).abs() <= tol).then_some(idx)
    }
}

/// Dense symmetric covariance matrix over a grid, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    pub grid: TimeGrid,
    pub entries: Vec<f64>,
    pub jitter_applied: f64,
}

impl CovarianceMatrix {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }
}

/// Assembles `kernel(t_i, t_j)` over the grid; upper triangle computed, then mirrored.
pub fn cov_matrix(spec: &ProcessSpec, grid: &TimeGrid) -> CovarianceMatrix {
    let pts = grid.points();
    let n = pts.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = spec.cov_unchecked(pts[i], pts[j]);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    CovarianceMatrix { grid: grid.clone(), entries, jitter_applied: 0.0 }
}
