use proptest::prelude::*;
use smfbm::diagnostics::{
    cond_l2_lower_bound, cond_l2_sum, expected_qv, l2_mixed_partial_probe, lemma29_gap, lemma7_f, loglog_slope,
    markov_defect, quasi_mart_sum, qv_report, semimart_verdict, uv_limit, uv_ratio, QvLimitClass, Regime,
};
use smfbm::increments::incr_second_moment;
use smfbm::kernels::{Hurst, MixCoeffs, ProcessSpec};

fn hurst() -> impl Strategy<Value = Hurst> {
    (0.02f64..0.98).prop_map(|h| Hurst::new(h).unwrap())
}

fn coeffs() -> impl Strategy<Value = MixCoeffs> {
    (0.0f64..3.0, 0.05f64..3.0).prop_map(|(a, b)| MixCoeffs::new(a, b).unwrap())
}

fn c(a: f64, b: f64) -> MixCoeffs {
    MixCoeffs::new(a, b).unwrap()
}

fn h(x: f64) -> Hurst {
    Hurst::new(x).unwrap()
}

fn brute_qv(t: f64, n: u64, cc: MixCoeffs, hu: Hurst) -> f64 {
    let step = t / n as f64;
    (1..=n)
        .map(|j| incr_second_moment((j - 1) as f64 * step, j as f64 * step, cc, hu).unwrap())
        .sum()
}

proptest! {
    #[test]
    fn markov_defect_vanishes_at_half(s in 0.01f64..3.0, d1 in 0.01f64..3.0, d2 in 0.01f64..3.0, cc in coeffs()) {
        let spec = ProcessSpec::smfbm(cc, Hurst::HALF);
        let (t, u) = (s + d1, s + d1 + d2);
        let scale = (cc.a2() + cc.b2()).powi(2) * u * u;
        prop_assert!(markov_defect(s, t, u, &spec).unwrap().abs() <= 1e-13 * scale);
    }

    #[test]
    fn expected_qv_matches_increment_sum(t in 0.1f64..5.0, n in 1u64..300, cc in coeffs(), hu in hurst()) {
        let got = expected_qv(t, n, cc, hu).unwrap();
        let want = brute_qv(t, n, cc, hu);
        prop_assert!(got > 0.0);
        prop_assert!((got - want).abs() <= 1e-10 * want, "{} vs {}", got, want);
    }

    #[test]
    fn lemma7_sign_and_monotonicity(x in 0.0f64..10.0, dx in 0.01f64..5.0, s in 0.01f64..5.0, hu in hurst()) {
        let f0 = lemma7_f(x, s, hu).unwrap();
        let f1 = lemma7_f(x + dx, s, hu).unwrap();
        let v = hu.value();
        let tol = 1e-12 * (x + dx + 2.0 * s).powf(hu.twice());
        if v > 0.5 {
            prop_assert!(f0 >= -tol && f1 >= f0 - tol);
        } else if v < 0.5 {
            prop_assert!(f0 <= tol && f1 <= f0 + tol);
        }
    }

    #[test]
    fn verdict_classification(cc in coeffs(), hu in hurst()) {
        let v = semimart_verdict(cc, hu);
        let x = hu.value();
        let expected = cc.b == 0.0 || hu.is_half() || (x > 0.75 && cc.a != 0.0);
        prop_assert_eq!(v.is_semimartingale, expected);
        prop_assert!(!v.citations.is_empty());
    }
}

#[test]
fn expected_qv_ladder_matches_brute_force() {
    for hv in [0.2, 0.5, 0.75, 0.9] {
        for n in [1u64, 2, 7, 64, 4096] {
            let got = expected_qv(1.3, n, c(0.8, 1.4), h(hv)).unwrap();
            let want = brute_qv(1.3, n, c(0.8, 1.4), h(hv));
            assert!((got - want).abs() <= 1e-10 * want, "H={hv} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn qv_trends() {
    let ns: Vec<u64> = (1..=12).map(|k| 1u64 << k).collect();
    let rough = qv_report(1.0, &ns, c(1.0, 1.0), h(0.3)).unwrap();
    assert_eq!(rough.limit_class, QvLimitClass::Diverges);
    assert!(rough.a_n.windows(2).all(|w| w[1] > w[0]));
    let smooth = qv_report(1.0, &ns, c(1.0, 1.0), h(0.8)).unwrap();
    assert_eq!(smooth.limit_class, QvLimitClass::FiniteA);
    assert!(smooth.a_n.windows(2).all(|w| w[1] < w[0]));
    assert!(smooth.a_n.iter().all(|v| *v > 1.0));
}

#[test]
fn uv_ratio_tends_to_limit() {
    for hv in [0.55, 0.6, 0.7, 0.3] {
        let (t, cc) = (2.0, c(0.7, 1.3));
        let lim = uv_limit(t, cc, h(hv));
        let errs: Vec<f64> = [10u64, 100, 1000, 10_000]
            .iter()
            .map(|&j| (uv_ratio(j, t, cc, h(hv)).unwrap() / lim - 1.0).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "H={hv}: {errs:?}");
    }
}

#[test]
fn quasi_mart_sum_grows_for_intermediate_hurst() {
    let ns = [256u64, 512, 1024, 2048];
    let sums: Vec<f64> = ns.iter().map(|&n| quasi_mart_sum(1.0, n, c(1.0, 1.0), h(0.6)).unwrap().i_n).collect();
    assert!(sums.windows(2).all(|w| w[1] > w[0]));
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &sums);
    assert!(slope > 0.1, "slope {slope}");
}

#[test]
fn cond_l2_small_partitions() {
    let cc = c(1.0, 1.0);
    for n in [8usize, 32, 64] {
        let r = cond_l2_sum(1.0, n, cc, h(0.75), 1024).unwrap();
        let lb = cond_l2_lower_bound(1.0, n, cc).unwrap();
        assert!(r.per_j.iter().zip(&lb).all(|(x, l)| *x >= *l));
        assert_eq!(r.lambda_max_bound_ok, Some(true));
    }
    let r = cond_l2_sum(1.0, 32, cc, h(0.6), 1024).unwrap();
    assert!(r.lambda_max_bound_ok.is_none());
}

#[test]
fn lemma29_chain() {
    for j in 1..=64u64 {
        for k in 1..=j {
            let g = lemma29_gap(j, k).unwrap();
            assert!(g.f1 - g.f2 >= g.lower_bound - 1e-12, "j={j} k={k}");
            assert!(g.lower_bound >= 0.0);
        }
    }
}

#[test]
fn probe_regimes() {
    let cc = c(1.0, 1.0);
    assert!(l2_mixed_partial_probe(1.0, cc, h(0.8), 30).unwrap().converged);
    let p = l2_mixed_partial_probe(1.0, cc, h(0.7), 30).unwrap();
    assert!(!p.converged);
    assert!(p.estimates.windows(2).all(|w| w[1] > w[0]));
    let p = l2_mixed_partial_probe(2.0, cc, Hurst::HALF, 10).unwrap();
    assert!(p.estimates.iter().all(|v| *v == 0.0));
}

#[test]
fn regime_names_round_trip_through_json() {
    let v = semimart_verdict(c(1.0, 1.0), h(0.3));
    assert_eq!(v.regime, Regime::RoughNotWeakSemimart);
    let text = serde_json::to_string(&v).unwrap();
    assert!(text.contains(&format!("\"{}\"", v.regime.name())));
}
