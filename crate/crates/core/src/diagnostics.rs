//! Semimartingale diagnostics for the smfBm.
//!
//! Everything here is deterministic and computed from the closed-form
//! covariances; divergence statements are observed through trends over a
//! ladder of partition sizes, never proven numerically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::increments::{incr_second_moment, nonoverlap_cov_smfbm, IntervalPair};
use crate::kernels::{Hurst, MixCoeffs, ProcessSpec};
use crate::linalg::{cholesky, largest_eigenvalue};
use crate::powers::{mid_gap, pow0};

/// Default cap on the partition size accepted by [`cond_l2_sum`].
pub const COND_L2_DEFAULT_CAP: usize = 1024;

/// Relative change between the last two probe estimates below which the
/// L² probe reports convergence.
pub const PROBE_CONVERGENCE_TOL: f64 = 0.01;

/// `Cov(S_s,S_u)·Var(S_t) - Cov(S_s,S_t)·Cov(S_t,S_u)` for `0 < s < t < u`.
///
/// A centered Gaussian Markov process with positive variances makes this vanish.
pub fn markov_defect(s: f64, t: f64, u: f64, spec: &ProcessSpec) -> Result<f64> {
    if !(0.0 < s && s < t && t < u) {
        return Err(Error::domain(format!("markov defect needs 0 < s < t < u, got s={s}, t={t}, u={u}")));
    }
    let k = |x, y| spec.cov_unchecked(x, y);
    Ok(k(s, u) * k(t, t) - k(s, t) * k(t, u))
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon > 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("horizon T must be positive, got {horizon}")))
    }
}

/// Expected quadratic variation over the uniform `n`-partition of `[0, T]`:
///
/// `A_n = a²T + b²T^{2H} n^{1-2H} + 2^{2H} b² (T/n)^{2H} Σ_{j=1}^n [((2j-1)/2)^{2H} - (j^{2H} + (j-1)^{2H})/2]`.
pub fn expected_qv(horizon: f64, n: u64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_horizon(horizon)?;
    if n == 0 {
        return Err(Error::domain("expected_qv needs n >= 1"));
    }
    if hurst.is_half() {
        return Ok((coeffs.a2() + coeffs.b2()) * horizon);
    }
    let p = hurst.twice();
    let nf = n as f64;
    // summed from the small tail terms upward
    let mut sum = 0.0;
    for j in (1..=n).rev() {
        let jf = j as f64;
        sum += mid_gap(jf - 0.5, 0.5, p);
    }
    let scale = coeffs.b2() * horizon.powf(p);
    Ok(coeffs.a2() * horizon + scale * nf.powf(1.0 - p) + 2f64.powf(p) * scale * nf.powf(-p) * sum)
}

/// Limit of `A_n` as `n → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QvLimitClass {
    /// `A_n → ∞` (`H < 1/2`, `b ≠ 0`).
    Diverges,
    /// `A_n = (a² + b²)T` for all `n` (`H = 1/2`, or `b = 0` where it is `a²T`).
    FiniteAb,
    /// `A_n → a²T` (`H > 1/2`).
    FiniteA,
}

pub fn qv_limit_class(coeffs: MixCoeffs, hurst: Hurst) -> QvLimitClass {
    if hurst.is_half() || coeffs.b == 0.0 {
        QvLimitClass::FiniteAb
    } else if hurst.value() < 0.5 {
        QvLimitClass::Diverges
    } else {
        QvLimitClass::FiniteA
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QvReport {
    pub horizon: f64,
    pub n_values: Vec<u64>,
    pub a_n: Vec<f64>,
    pub limit_class: QvLimitClass,
    /// `a²T` for `FiniteA`, `(a²+b²)T` for `FiniteAb`, absent when diverging.
    pub limit_value: Option<f64>,
}

pub fn qv_report(horizon: f64, n_values: &[u64], coeffs: MixCoeffs, hurst: Hurst) -> Result<QvReport> {
    let a_n = n_values
        .iter()
        .map(|&n| expected_qv(horizon, n, coeffs, hurst))
        .collect::<Result<Vec<_>>>()?;
    let limit_class = qv_limit_class(coeffs, hurst);
    let limit_value = match limit_class {
        QvLimitClass::Diverges => None,
        QvLimitClass::FiniteAb => Some((coeffs.a2() + coeffs.b2()) * horizon),
        QvLimitClass::FiniteA => Some(coeffs.a2() * horizon),
    };
    Ok(QvReport { horizon, n_values: n_values.to_vec(), a_n, limit_class, limit_value })
}

// u_j = 2^{2H}(2 j^{2H} + 1) - 2 - (2j+1)^{2H} - (2j-1)^{2H}
#[inline]
fn u_term(j: f64, p: f64) -> f64 {
    (2f64.powf(p) - 2.0) + 2.0 * mid_gap(2.0 * j, 1.0, p)
}

// -2^{2H-1}(j^{2H} + (j-1)^{2H}) + (2j-1)^{2H} + 1
#[inline]
fn v_bracket(j: f64, p: f64) -> f64 {
    1.0 + 2f64.powf(p) * mid_gap(j - 0.5, 0.5, p)
}

/// `u_j / v_j` with `v_j = sqrt(a²T + b²T^{2H}(-2^{2H-1}(j^{2H} + (j-1)^{2H}) + (2j-1)^{2H} + 1))`.
pub fn uv_ratio(j: u64, horizon: f64, coeffs: MixCoeffs, hurst: Hurst) -> Result<f64> {
    check_horizon(horizon)?;
    if j == 0 {
        return Err(Error::domain("uv_ratio needs j >= 1"));
    }
    let p = hurst.twice();
    let jf = j as f64;
    let v = (coeffs.a2() * horizon + coeffs.b2() * horizon.powf(p) * v_bracket(jf, p)).sqrt();
    Ok(u_term(jf, p) / v)
}

/// `lim u_j / v_j = (2^{2H} - 2) / sqrt(a²T + b²T^{2H})`.
pub fn uv_limit(horizon: f64, coeffs: MixCoeffs, hurst: Hurst) -> f64 {
    let p = hurst.twice();
    (2f64.powf(p) - 2.0) / (coeffs.a2() * horizon + coeffs.b2() * horizon.powf(p)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiMartSum {
    /// `I_n = Σ_{j=1}^{n-1} Cov(Δ_{j+1}, Δ_j) / sqrt(Var Δ_j)`.
    pub i_n: f64,
    /// `u_j / v_j` for `j = 1..n-1`.
    pub uv_terms: Vec<f64>,
}

/// One-step conditional-expectation sum over the uniform `n`-partition of `[0, T]`.
///
/// `sqrt(2/π)·I_n` bounds the quasi-martingale variation from below.
pub fn quasi_mart_sum(horizon: f64, n: u64, coeffs: MixCoeffs, hurst: Hurst) -> Result<QuasiMartSum> {
    check_horizon(horizon)?;
    if n < 2 {
        return Err(Error::domain("quasi_mart_sum needs n >= 2"));
    }
    if coeffs.b == 0.0 {
        return Err(Error::domain("quasi_mart_sum needs b != 0"));
    }
    let p = hurst.twice();
    let nf = n as f64;
    let step_p = (horizon / nf).powf(p);
    let cov_scale = 0.5 * coeffs.b2() * step_p;
    let bm_var = coeffs.a2() * horizon / nf;
    let v_scale = coeffs.b2() * horizon.powf(p);
    let mut i_n = 0.0;
    let mut uv_terms = Vec::with_capacity((n - 1) as usize);
    for j in 1..n {
        let jf = j as f64;
        let u = u_term(jf, p);
        let bracket = v_bracket(jf, p);
        let var = bm_var + coeffs.b2() * step_p * bracket;
        i_n += cov_scale * u / var.sqrt();
        uv_terms.push(u / (coeffs.a2() * horizon + v_scale * bracket).sqrt());
    }
    Ok(QuasiMartSum { i_n, uv_terms })
}

/// Covariance matrix of the `n` increments `Δ_j = S_{jT/n} - S_{(j-1)T/n}`, row-major.
pub fn increment_cov_matrix(horizon: f64, n: usize, coeffs: MixCoeffs, hurst: Hurst) -> Result<Vec<f64>> {
    check_horizon(horizon)?;
    let step = horizon / n as f64;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        let (lo, hi) = (i as f64 * step, (i + 1) as f64 * step);
        m[i * n + i] = incr_second_moment(lo, hi, coeffs, hurst)?;
        for k in i + 1..n {
            let pair = IntervalPair { u: lo, v: hi, s: k as f64 * step, t: (k + 1) as f64 * step };
            let c = nonoverlap_cov_smfbm(pair, coeffs, hurst);
            m[i * n + k] = c;
            m[k * n + i] = c;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondL2Sum {
    /// `Σ_j per_j`.
    pub total: f64,
    /// `‖E(Δ_{j+1} | Δ_j, …, Δ_1)‖_2 = sqrt(m_jᵀ A_j⁻¹ m_j)` for `j = 1..n-1`.
    pub per_j: Vec<f64>,
    /// Largest eigenvalue of the `(n-1)×(n-1)` increment covariance.
    pub lambda_max: f64,
    /// `a²T/n + (5/(2n)) b² T^{3/2}`.
    pub lambda_bound: f64,
    /// Whether `lambda_max <= lambda_bound`; only reported at `H = 3/4`,
    /// the only index for which the bound is derived.
    pub lambda_max_bound_ok: Option<bool>,
}

/// Conditional-L² sum over the uniform `n`-partition of `[0, T]`.
///
/// All leading blocks `A_j` are factored at once: the Cholesky factor `L` of
/// the full increment covariance carries `L_j⁻¹ m_j` in its row `j+1`, so
/// `m_jᵀ A_j⁻¹ m_j` is the squared norm of that row's off-diagonal part.
pub fn cond_l2_sum(horizon: f64, n: usize, coeffs: MixCoeffs, hurst: Hurst, cap: usize) -> Result<CondL2Sum> {
    check_horizon(horizon)?;
    if coeffs.b == 0.0 {
        return Err(Error::domain("cond_l2_sum needs b != 0"));
    }
    if n < 2 {
        return Err(Error::domain("cond_l2_sum needs n >= 2"));
    }
    if n > cap {
        return Err(Error::domain(format!("cond_l2_sum: n = {n} exceeds the configured cap {cap}")));
    }
    let a = increment_cov_matrix(horizon, n, coeffs, hurst)?;
    let l = cholesky(&a, n).map_err(|row| {
        Error::numerical(format!(
            "increment covariance A_j is numerically singular at j = {} (n = {n})",
            row + 1
        ))
    })?;
    let per_j: Vec<f64> = (1..n)
        .map(|j| l[j * n..j * n + j].iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let total = per_j.iter().sum();

    let m = n - 1;
    let leading: Vec<f64> = (0..m).flat_map(|i| a[i * n..i * n + m].iter().copied()).collect();
    let lambda_max = largest_eigenvalue(&leading, m);
    let nf = n as f64;
    let lambda_bound = coeffs.a2() * horizon / nf + 2.5 / nf * coeffs.b2() * horizon.powf(1.5);
    let lambda_max_bound_ok = (hurst.value() == 0.75).then_some(lambda_max <= lambda_bound);
    Ok(CondL2Sum { total, per_j, lambda_max, lambda_bound, lambda_max_bound_ok })
}

/// Per-`j` lower bounds on the conditional L² norms at `H = 3/4`:
/// `(sqrt(β)/n) sqrt(ln(2j-1) + 2 arccos((j-1)/j) - π)`, `j = 1..n-1`,
/// with `α = 2/(T(2a² + 5b²T^{1/2}))` and `β = α·9T³b⁴/64`.
pub fn cond_l2_lower_bound(horizon: f64, n: usize, coeffs: MixCoeffs) -> Result<Vec<f64>> {
    check_horizon(horizon)?;
    let alpha = 2.0 / (horizon * (2.0 * coeffs.a2() + 5.0 * coeffs.b2() * horizon.sqrt()));
    let beta = alpha * 9.0 * horizon.powi(3) * coeffs.b2() * coeffs.b2() / 64.0;
    let nf = n as f64;
    Ok((1..n)
        .map(|j| {
            let jf = j as f64;
            let inner = (2.0 * jf - 1.0).ln() + 2.0 * ((jf - 1.0) / jf).acos() - PI;
            beta.sqrt() / nf * inner.max(0.0).sqrt()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma29Gap {
    pub f1: f64,
    pub f2: f64,
    pub lower_bound: f64,
}

/// Terms of the squared cross-covariance at `H = 3/4`:
/// `f1 = (j-k+2)^{3/2} - 2(j-k+1)^{3/2} + (j-k)^{3/2}`,
/// `f2 = (j+k+1)^{3/2} - 2(j+k)^{3/2} + (j+k-1)^{3/2}`,
/// and the lower bound `(3/4)((j-k+1)^{-1/2} - (j+k-1)^{-1/2})` on `f1 - f2`.
pub fn lemma29_gap(j: u64, k: u64) -> Result<Lemma29Gap> {
    if !(1 <= k && k <= j) {
        return Err(Error::domain(format!("need 1 <= k <= j, got j={j}, k={k}")));
    }
    let (jf, kf) = (j as f64, k as f64);
    let p32 = |x: f64| pow0(x, 1.5);
    let f1 = p32(jf - kf + 2.0) - 2.0 * p32(jf - kf + 1.0) + p32(jf - kf);
    let f2 = p32(jf + kf + 1.0) - 2.0 * p32(jf + kf) + p32(jf + kf - 1.0);
    let lower_bound = 0.75 * ((jf - kf + 1.0).powf(-0.5) - (jf + kf - 1.0).powf(-0.5));
    Ok(Lemma29Gap { f1, f2, lower_bound })
}

/// `f(x) = -2^{2H-1}((x+s)^{2H} + s^{2H}) + (x+2s)^{2H} - (1 - 2^{2H-1}) x^{2H}`.
///
/// Vanishes at 0; negative decreasing for `H < 1/2`, positive increasing for `H > 1/2`.
pub fn lemma7_f(x: f64, s: f64, hurst: Hurst) -> Result<f64> {
    if !(x >= 0.0) || !(s > 0.0) {
        return Err(Error::domain(format!("lemma7_f needs x >= 0 and s > 0, got x={x}, s={s}")));
    }
    let p = hurst.twice();
    let c = 2f64.powf(p - 1.0);
    Ok(-c * (pow0(x + s, p) + pow0(s, p)) + pow0(x + 2.0 * s, p) - (1.0 - c) * pow0(x, p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Probe {
    pub estimates: Vec<f64>,
    /// Half-width `T·2^{-(k+3)}` of the excluded diagonal band at level `k`.
    pub band_half_widths: Vec<f64>,
    pub converged: bool,
}

// 8-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

// (y1^e - y0^e)/e, continuous through e = 0 where it is ln(y1/y0).
fn pow_diff_over(y0: f64, y1: f64, e: f64) -> f64 {
    let l = (y1 / y0).ln();
    if e == 0.0 {
        l
    } else {
        y0.powf(e) * (e * l).exp_m1() / e
    }
}

// ∫_x^{2T-x} (x^q - y^q)² dy with q = 2H - 2.
fn band_inner(x: f64, horizon: f64, q: f64) -> f64 {
    let (y0, y1) = (x, 2.0 * horizon - x);
    if y1 <= y0 {
        return 0.0;
    }
    let xq = x.powf(q);
    xq * xq * (y1 - y0) - 2.0 * xq * pow_diff_over(y0, y1, q + 1.0) + pow_diff_over(y0, y1, 2.0 * q + 1.0)
}

// ∫_lo^hi band_inner(x) dx, Gauss-Legendre in log x.
fn octave(lo: f64, hi: f64, horizon: f64, q: f64) -> f64 {
    let (ul, uh) = (lo.ln(), hi.ln());
    let half = 0.5 * (uh - ul);
    let mid = 0.5 * (uh + ul);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(z, w)| {
            let x = (mid + half * z).exp();
            w * x * band_inner(x, horizon, q)
        })
        .sum::<f64>()
        * half
}

/// L² probe of `∂²R/∂s∂t = (b²/a²) H(2H-1)(|t-s|^{2H-2} - (s+t)^{2H-2})` on `[0,T]²`.
///
/// Level `k` integrates the squared mixed partial over the square minus the
/// diagonal band `|t - s| < T·2^{-(k+3)}`. In the coordinates
/// `x = |t-s|`, `y = s+t` the integral is `∫_δ^T ∫_x^{2T-x} (...)² dy dx`;
/// the inner integral is exact and the outer one uses one 8-point
/// Gauss–Legendre panel per octave of `x` in `ln x`. Each level adds exactly
/// one octave, so the estimates are nondecreasing and reproducible.
pub fn l2_mixed_partial_probe(horizon: f64, coeffs: MixCoeffs, hurst: Hurst, levels: usize) -> Result<L2Probe> {
    check_horizon(horizon)?;
    if coeffs.a == 0.0 {
        return Err(Error::domain("l2 probe needs a != 0 (the covariance is scaled by b²/a²)"));
    }
    if levels < 3 {
        return Err(Error::domain(format!("l2 probe needs at least 3 levels, got {levels}")));
    }
    let band_half_widths: Vec<f64> = (0..levels).map(|k| horizon * 0.5f64.powi(k as i32 + 3)).collect();
    if hurst.is_half() {
        return Ok(L2Probe { estimates: vec![0.0; levels], band_half_widths, converged: true });
    }
    let h = hurst.value();
    let factor = (coeffs.b2() / coeffs.a2() * h * (2.0 * h - 1.0)).powi(2);
    let q = 2.0 * h - 2.0;
    let mut acc = (0..3)
        .map(|i| octave(horizon * 0.5f64.powi(i + 1), horizon * 0.5f64.powi(i), horizon, q))
        .sum::<f64>();
    let mut estimates = Vec::with_capacity(levels);
    estimates.push(factor * acc);
    for k in 1..levels {
        acc += octave(band_half_widths[k], band_half_widths[k - 1], horizon, q);
        estimates.push(factor * acc);
    }
    let (last, prev) = (estimates[levels - 1], estimates[levels - 2]);
    let converged = last.is_finite() && (last - prev).abs() < PROBE_CONVERGENCE_TOL * last.abs();
    Ok(L2Probe { estimates, band_half_widths, converged })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `b = 0`: a scaled Brownian motion.
    PureBm,
    /// `H = 1/2`: a Brownian motion with variance `(a² + b²)t`.
    BrownianHHalf,
    /// `H < 1/2`: infinite quadratic variation.
    RoughNotWeakSemimart,
    /// `1/2 < H <= 3/4`: not a quasi-martingale, hence not a weak semimartingale.
    IntermediateNotQuasimart,
    /// `H > 3/4`, `a ≠ 0`: a semimartingale equivalent in law to `a·B`.
    SmoothSemimart,
    /// `H > 3/4`, `a = 0`: a scaled sfBm, zero quadratic variation but not of
    /// bounded variation.
    SmoothPureSfbm,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::PureBm => "pure_bm",
            Regime::BrownianHHalf => "brownian_h_half",
            Regime::RoughNotWeakSemimart => "rough_not_weak_semimart",
            Regime::IntermediateNotQuasimart => "intermediate_not_quasimart",
            Regime::SmoothSemimart => "smooth_semimart",
            Regime::SmoothPureSfbm => "smooth_pure_sfbm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemimartVerdict {
    pub is_semimartingale: bool,
    pub regime: Regime,
    pub citations: Vec<String>,
}

/// Semimartingale classification: `S` is a semimartingale iff `b = 0`, `H = 1/2`
/// or `H > 3/4` (the last one with `a ≠ 0`).
pub fn semimart_verdict(coeffs: MixCoeffs, hurst: Hurst) -> SemimartVerdict {
    let h = hurst.value();
    let (is_semimartingale, regime, notes): (bool, Regime, &[&str]) = if coeffs.b == 0.0 {
        (true, Regime::PureBm, &["b = 0: S = a·B is a scaled Brownian motion"])
    } else if hurst.is_half() {
        (true, Regime::BrownianHHalf, &["H = 1/2: the sfBm part is a Brownian motion, so S is a Brownian motion with variance (a²+b²)t"])
    } else if h < 0.5 {
        (
            false,
            Regime::RoughNotWeakSemimart,
            &[
                "H < 1/2: expected quadratic variation A_n diverges",
                "infinite quadratic variation: not a weak semimartingale",
            ],
        )
    } else if h < 0.75 {
        (
            false,
            Regime::IntermediateNotQuasimart,
            &[
                "1/2 < H < 3/4: one-step conditional sum I_n grows like n^(3/2-2H): not a quasi-martingale",
                "not a quasi-martingale implies not a weak semimartingale",
            ],
        )
    } else if h == 0.75 {
        (
            false,
            Regime::IntermediateNotQuasimart,
            &[
                "H = 3/4: conditional L2 sum diverges (eigenvalue bound plus cross-covariance bound): not a quasi-martingale",
                "not a quasi-martingale implies not a weak semimartingale",
            ],
        )
    } else if coeffs.a != 0.0 {
        (
            true,
            Regime::SmoothSemimart,
            &["H > 3/4, a != 0: mixed partial of the sfBm covariance is square integrable; S is a semimartingale equivalent in law to a·B"],
        )
    } else {
        (
            false,
            Regime::SmoothPureSfbm,
            &["H > 3/4, a = 0: S = b·sfBm has zero quadratic variation without bounded variation, so it is not a semimartingale"],
        )
    };
    SemimartVerdict { is_semimartingale, regime, citations: notes.iter().map(|s| s.to_string()).collect() }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
