//! Power-function differences evaluated without catastrophic cancellation.
//!
//! Most closed forms in this crate are first or second differences of
//! `x ↦ x^p` with `p = 2H ∈ (0, 2)`. Evaluated literally they lose all
//! significant digits once the arguments are large compared to the step, so
//! the helpers below switch to binomial series in the small ratio.

/// `x^p` with the convention `0^p = 0`. Expects `x >= 0`.
#[inline]
pub(crate) fn pow0(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(p)
    }
}

const SERIES_MAX_TERMS: usize = 80;

/// `m^p - ((m + d)^p + (m - d)^p) / 2` for `0 <= d <= m`.
///
/// Exactly zero when `p == 1`.
pub(crate) fn mid_gap(m: f64, d: f64, p: f64) -> f64 {
    debug_assert!(d >= 0.0 && d <= m * (1.0 + 1e-15));
    if p == 1.0 || m == 0.0 || d == 0.0 {
        return 0.0;
    }
    let x = d / m;
    if x <= 0.5 {
        // ((1+x)^p + (1-x)^p)/2 - 1 = sum_{k>=1} C(p, 2k) x^{2k}
        let x2 = x * x;
        let mut coeff = 1.0;
        let mut xpow = 1.0;
        let mut sum = 0.0;
        for k in 1..=SERIES_MAX_TERMS {
            let kf = k as f64;
            coeff *= (p - 2.0 * kf + 2.0) * (p - 2.0 * kf + 1.0) / ((2.0 * kf - 1.0) * (2.0 * kf));
            xpow *= x2;
            let term = coeff * xpow;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        -m.powf(p) * sum
    } else {
        m.powf(p) - 0.5 * ((m + d).powf(p) + pow0(m - d, p))
    }
}

/// Central second difference `(x + h)^p - 2 x^p + (x - h)^p` for `0 <= h <= x`.
#[inline]
pub(crate) fn second_diff(x: f64, h: f64, p: f64) -> f64 {
    -2.0 * mid_gap(x, h, p)
}

/// `D(x) - D(x + q)` where `D(y) = (y + 1)^p - 2 y^p + (y - 1)^p`, for `x >= 1`, `q >= 0`.
///
/// For large `x` the two second differences agree to many digits; the
/// series `D(y) = 2 Σ C(p,2k) y^{p-2k}` lets the difference be taken term by
/// term with `expm1`/`ln_1p`.
pub(crate) fn second_diff_drop(x: f64, q: f64, p: f64) -> f64 {
    debug_assert!(x >= 1.0 && q >= 0.0);
    if p == 1.0 || q == 0.0 {
        return 0.0;
    }
    if x < 4.0 {
        return second_diff(x, 1.0, p) - second_diff(x + q, 1.0, p);
    }
    let inv2 = 1.0 / (x * x);
    let log_ratio = (q / x).ln_1p();
    let mut coeff = 1.0;
    let mut xpow = x.powf(p);
    let mut sum = 0.0;
    for k in 1..=SERIES_MAX_TERMS {
        let kf = k as f64;
        coeff *= (p - 2.0 * kf + 2.0) * (p - 2.0 * kf + 1.0) / ((2.0 * kf - 1.0) * (2.0 * kf));
        xpow *= inv2;
        let expo = p - 2.0 * kf;
        // x^e - (x+q)^e = -x^e * expm1(e * ln(1 + q/x))
        let term = -coeff * xpow * (expo * log_ratio).exp_m1();
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 * sum
}
