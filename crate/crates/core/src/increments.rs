//! Second moments, bounds and correlations of smfBm/mfBm increments, plus
//! the mfBm-vs-smfBm comparison quantities on non-overlapping intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{Hurst, MixCoeffs};
use crate::powers::{mid_gap, pow0, second_diff, second_diff_drop};

/// Two increments of common lag `h`: `[s, s+h]` and `[t, t+h]`, with `0 <= s`, `0 < h <= t - s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementWindow {
    pub s: f64,
    pub t: f64,
    pub h: f64,
}

impl IncrementWindow {
    pub fn new(s: f64, t: f64, h: f64) -> Result<Self> {
        if !(s >= 0.0 && s <= t && h > 0.0 && h <= t - s) {
            return Err(Error::domain(format!(
                "increment window needs 0 <= s <= t and 0 < h <= t - s, got s={s}, t={t}, h={h}"
            )));
        }
        Ok(IncrementWindow { s, t, h })
    }
}

/// Intervals `[u, v]` and `[s, t]` with `0 <= u < v <= s < t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalPair {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    pub t: f64,
}

impl IntervalPair {
    pub fn new(u: f64, v: f64, s: f64, t: f64) -> Result<Self> {
        if !(u >= 0.0 && u < v && v <= s && s < t) {
            return Err(Error::domain(format!(
                "interval pair needs 0 <= u < v <= s < t, got u={u}, v={v}, s={s}, t={t}"
            )));
        }
        Ok(IntervalPair { u, v, s, t })
    }
}

fn check_ordered(s: f64, t: f64) -> Result<()> {
    if s >= 0.0 && s <= t {
        Ok(())
    } else {
        Err(Error::domain(format!("increment needs 0 <= s <= t, got s={s}, t={t}")))
    }
}

// sfBm part of E(S_t - S_s)^2 with b = 1:
// (t-s)^{2H} + (t+s)^{2H} - 2^{2H-1}(t^{2H} + s^{2H})
//   = (t-s)^{2H} + 2^{2H} [ m^{2H} - ((m+d)^{2H} + (m-d)^{2H})/2 ],  m = (t+s)/2, d = (t-s)/2
#[inline]
fn sfbm_incr_moment(s: f64, t: f64, p: f64) -> f64 {
    let m = 0.5 * (t + s);
    let d = 0.5 * (t - s);
    pow0(t - s, p) + 2f64.powf(p) * mid_gap(m, d, p)
}

/// `E(S_t - S_s)^2 = a²(t-s) + b²(-2^{2H-1}(t^{2H}+s^{2H}) + (t+s)^{2H} + (t-s)^{2H})`.
pub fn incr_second_moment(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_ordered(s, t)?;
    Ok(coeffs.a2() * (t - s) + coeffs.b2() * sfbm_incr_moment(s, t, hurst.twice()))
}

/// Lower and upper bounds sandwiching [`incr_second_moment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncrementBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `a²(t-s) + b² γ (t-s)^{2H} <= E(S_t - S_s)² <= a²(t-s) + b² ν (t-s)^{2H}`,
/// with `γ = 2 - 2^{2H-1}` for `H > 1/2` (else 1) and `ν = 2 - 2^{2H-1}` for `H < 1/2` (else 1).
pub fn incr_bounds(s: f64, t: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<IncrementBounds> {
    check_ordered(s, t)?;
    let h = hurst.value();
    let p = hurst.twice();
    let squeezed = 2.0 - 2f64.powf(p - 1.0);
    let gamma = if h > 0.5 { squeezed } else { 1.0 };
    let nu = if h >= 0.5 { 1.0 } else { squeezed };
    let base = coeffs.a2() * (t - s);
    let frac = coeffs.b2() * pow0(t - s, p);
    Ok(IncrementBounds { lower: base + gamma * frac, upper: base + nu * frac })
}

/// Cross term of the increment correlation:
/// `(t-s+h)^{2H} - 2(t-s)^{2H} + (t-s-h)^{2H} - (t+s)^{2H} + 2(t+s+h)^{2H} - (t+s+2h)^{2H}`.
///
/// `Cov(S_{t+h} - S_t, S_{s+h} - S_s) = (b²/2) · incr_gamma(s, t, h)`.
pub fn incr_gamma(s: f64, t: f64, h: f64, hurst: Hurst) -> Result<f64> {
    let w = IncrementWindow::new(s, t, h)?;
    Ok(gamma_raw(w, hurst.twice()))
}

#[inline]
fn gamma_raw(w: IncrementWindow, p: f64) -> f64 {
    // difference of two central second differences, at t-s and at t+s+h
    second_diff(w.t - w.s, w.h, p) - second_diff(w.t + w.s + w.h, w.h, p)
}

/// `α(s,h) = -2^{2H}((s+h)^{2H} + s^{2H}) + 2(2s+h)^{2H} + 2h^{2H}`,
/// i.e. twice the sfBm increment second moment over `[s, s+h]`.
pub fn incr_alpha(s: f64, h: f64, hurst: Hurst) -> Result<f64> {
    if !(s >= 0.0) || !(h > 0.0) {
        return Err(Error::domain(format!("alpha needs s >= 0 and h > 0, got s={s}, h={h}")));
    }
    Ok(2.0 * sfbm_incr_moment(s, s + h, hurst.twice()))
}

/// Correlation of two disjoint increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncrementCorrelation {
    pub rho: f64,
    /// Set when `b = 0`: the increments are those of a Bm, hence independent,
    /// and `rho` is 0 by definition rather than from the closed form.
    pub pure_brownian: bool,
}

/// `ρ(S_{t+h} - S_t, S_{s+h} - S_s) = γ / sqrt((2(a²/b²)h + α(s,h)) (2(a²/b²)h + α(t,h)))`.
pub fn incr_corr(w: IncrementWindow, coeffs: MixCoeffs, hurst: Hurst) -> IncrementCorrelation {
    if coeffs.b == 0.0 {
        return IncrementCorrelation { rho: 0.0, pure_brownian: true };
    }
    let p = hurst.twice();
    let gamma = gamma_raw(w, p);
    let ratio = 2.0 * coeffs.a2() / coeffs.b2() * w.h;
    let alpha_s = 2.0 * sfbm_incr_moment(w.s, w.s + w.h, p);
    let alpha_t = 2.0 * sfbm_incr_moment(w.t, w.t + w.h, p);
    let rho = gamma / ((ratio + alpha_s) * (ratio + alpha_t)).sqrt();
    IncrementCorrelation { rho: rho.clamp(-1.0, 1.0), pure_brownian: false }
}

/// mfBm covariance of increments on `[u,v]` and `[s,t]`:
/// `(b²/2)((t-u)^{2H} + (s-v)^{2H} - (t-v)^{2H} - (s-u)^{2H})`.
pub fn nonoverlap_cov_mfbm(p: IntervalPair, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    let e = hurst.twice();
    0.5 * coeffs.b2()
        * (pow0(p.t - p.u, e) + pow0(p.s - p.v, e) - pow0(p.t - p.v, e) - pow0(p.s - p.u, e))
}

/// smfBm covariance of increments on `[u,v]` and `[s,t]`.
pub fn nonoverlap_cov_smfbm(p: IntervalPair, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    let e = hurst.twice();
    let plus = pow0(p.t + p.u, e) + pow0(p.t - p.u, e) + pow0(p.s + p.v, e) + pow0(p.s - p.v, e);
    let minus = pow0(p.t + p.v, e) + pow0(p.t - p.v, e) + pow0(p.s + p.u, e) + pow0(p.s - p.u, e);
    0.5 * coeffs.b2() * (plus - minus)
}

/// smfBm minus mfBm increment covariance:
/// `(b²/2)((t+u)^{2H} - (t+v)^{2H} + (s+v)^{2H} - (s+u)^{2H})`.
pub fn cov_gap(p: IntervalPair, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    let e = hurst.twice();
    0.5 * coeffs.b2()
        * (pow0(p.t + p.u, e) - pow0(p.t + p.v, e) + pow0(p.s + p.v, e) - pow0(p.s + p.u, e))
}

/// Covariance of unit increments `[p, p+1]` and `[p+n, p+n+1]`:
/// `(b²/2)((n+1)^{2H} - 2n^{2H} + (n-1)^{2H} - (2p+n+2)^{2H} + 2(2p+n+1)^{2H} - (2p+n)^{2H})`.
///
/// Evaluated as a difference of second differences so that it keeps full
/// relative accuracy for large `n`, where it decays like `n^{2H-3}`.
pub fn lag_cov(p: u64, n: u64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("lag_cov needs n >= 1"));
    }
    let e = hurst.twice();
    let drop = second_diff_drop(n as f64, (2 * p + 1) as f64, e);
    Ok(0.5 * coeffs.b2() * drop)
}

/// Leading-order behaviour of [`lag_cov`]: `2(1-H)H(2H-1)(2p+1) b² n^{2H-3}`.
pub fn lag_cov_asymptote(p: u64, n: u64, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    let h = hurst.value();
    2.0 * (1.0 - h) * h * (2.0 * h - 1.0) * (2 * p + 1) as f64 * coeffs.b2() * (n as f64).powf(2.0 * h - 3.0)
}

/// Shape functions of the adjacent-increment correlation, in the scaled
/// offset `x = 2u/r`:
///
/// * `A(x) = 2(x+2)^{2H} + (2^{2H} - 2) - (x+3)^{2H} - (x+1)^{2H}`
/// * `B(x) = 2 - x^{2H} - (x+2)^{2H} + 2(x+1)^{2H}`
/// * `C(x) = 2 - (x+2)^{2H} - (x+4)^{2H} + 2(x+3)^{2H}`
///
/// With these, `C_{u,u+r,u+r,u+2r} = (b²/2) r^{2H} A(x)` and the two increment
/// variances are `(2a²r + b² r^{2H} B(x))/2` and `(2a²r + b² r^{2H} C(x))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjacentShape {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn adjacent_shape(x: f64, hurst: Hurst) -> Result<AdjacentShape> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("adjacent shape needs x >= 0, got {x}")));
    }
    let e = hurst.twice();
    Ok(AdjacentShape {
        a: 2.0 * pow0(x + 2.0, e) + (2f64.powf(e) - 2.0) - pow0(x + 3.0, e) - pow0(x + 1.0, e),
        b: 2.0 - pow0(x, e) - pow0(x + 2.0, e) + 2.0 * pow0(x + 1.0, e),
        c: 2.0 - pow0(x + 2.0, e) - pow0(x + 4.0, e) + 2.0 * pow0(x + 3.0, e),
    })
}

/// Correlations of the adjacent increments on `[u, u+r]` and `[u+r, u+2r]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjacentCorrelation {
    pub rho_smfbm: f64,
    pub rho_mfbm: f64,
}

pub fn adjacent_corr_pair(u: f64, r: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<AdjacentCorrelation> {
    if !(u >= 0.0) || !(r > 0.0) {
        return Err(Error::domain(format!("adjacent correlation needs u >= 0 and r > 0, got u={u}, r={r}")));
    }
    if coeffs.b == 0.0 {
        return Err(Error::domain("adjacent correlation needs b != 0"));
    }
    if hurst.is_half() {
        return Ok(AdjacentCorrelation { rho_smfbm: 0.0, rho_mfbm: 0.0 });
    }
    let e = hurst.twice();
    let rp = r.powf(e);
    let rho_mfbm = coeffs.b2() * (2f64.powf(e - 1.0) - 1.0) * rp / (coeffs.a2() * r + coeffs.b2() * rp);

    let pair = IntervalPair::new(u, u + r, u + r, u + 2.0 * r)?;
    let cov = nonoverlap_cov_smfbm(pair, coeffs, hurst);
    let v1 = incr_second_moment(u, u + r, coeffs, hurst)?;
    let v2 = incr_second_moment(u + r, u + 2.0 * r, coeffs, hurst)?;
    Ok(AdjacentCorrelation { rho_smfbm: cov / (v1 * v2).sqrt(), rho_mfbm })
}
