//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p smfbm-cli --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use smfbm::diagnostics::{
    cond_l2_lower_bound, cond_l2_sum, expected_qv, l2_mixed_partial_probe, lemma29_gap, loglog_slope, markov_defect,
    quasi_mart_sum, uv_limit, uv_ratio,
};
use smfbm::estimators::{empirical_cov, empirical_incr_corr, realized_qv, EstimateWithError};
use smfbm::increments::{
    adjacent_corr_pair, incr_bounds, incr_corr, incr_second_moment, lag_cov, lag_cov_asymptote, IncrementWindow,
};
use smfbm::kernels::{cov_matrix, fbm_cov, rescale_params, sfbm_cov, smfbm_cov};
use smfbm::simulate::{sample, PathEnsemble, SamplerConfig, SamplingMethod};
use smfbm::{Hurst, MixCoeffs, ProcessSpec, TimeGrid};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    let scale = got.abs().max(want.abs());
    if scale == 0.0 {
        0.0
    } else {
        (got - want).abs() / scale
    }
}

fn h(x: f64) -> Hurst {
    Hurst::new(x).unwrap()
}

fn c(a: f64, b: f64) -> MixCoeffs {
    MixCoeffs::new(a, b).unwrap()
}

fn random_params(rng: &mut StdRng) -> (MixCoeffs, Hurst) {
    let a = rng.random_range(0.0..3.0);
    let b = rng.random_range(0.01..3.0);
    (c(a, b), h(rng.random_range(0.01..0.99)))
}

fn kernel_consistency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (cc, hu) = random_params(&mut rng);
        let (s, t) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
        let k = smfbm_cov(s, t, cc, hu).unwrap();
        let sf = sfbm_cov(s, t, hu).unwrap();
        // The folded fBm sum cancels when s and t differ in scale; its own
        // rounding, a few ulps of the largest power (s+t)^{2H}, is allowed on top of 1e-10.
        let terms = [fbm_cov(s, t, hu), fbm_cov(-s, t, hu), fbm_cov(s, -t, hu), fbm_cov(-s, -t, hu)];
        let folded = 0.5 * terms.iter().sum::<f64>();
        let floor = 8.0 * f64::EPSILON * (s + t).powf(hu.twice());
        let checks = [
            rel_err(k, cc.a2() * s.min(t) + cc.b2() * sf),
            rel_err(k, smfbm_cov(t, s, cc, hu).unwrap()),
            ((sf - folded).abs() - floor).max(0.0) / sf.abs().max(folded.abs()),
            rel_err(smfbm_cov(s, t, cc, Hurst::HALF).unwrap(), (cc.a2() + cc.b2()) * s.min(t)),
        ];
        worst = checks.iter().fold(worst, |m, e| m.max(*e));
        ensure(checks.iter().all(|e| *e <= 1e-10), || format!("s={s} t={t} {cc:?} {hu:?}: {checks:?}"))?;
    }
    Ok(format!("10^4 draws, worst relative error {worst:.1e}"))
}

fn self_similarity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let (cc, hu) = random_params(&mut rng);
        let mut pts: Vec<f64> = (0..32).map(|_| rng.random_range(0.0..5.0)).collect();
        pts.sort_by(f64::total_cmp);
        let grid = TimeGrid::new(pts).unwrap();
        for k in [0.25, 4.0] {
            let lhs = cov_matrix(&ProcessSpec::smfbm(cc, hu), &grid.scaled(k).unwrap());
            let rhs = cov_matrix(&ProcessSpec::smfbm(rescale_params(cc, hu, k).unwrap(), hu), &grid);
            for (x, y) in lhs.entries.iter().zip(&rhs.entries) {
                worst = worst.max(rel_err(*x, *y));
            }
        }
    }
    ensure(worst <= 1e-10, || format!("worst relative error {worst:e}"))?;
    Ok(format!("25 random 32-point grids x h in {{0.25, 4}}, worst {worst:.1e}"))
}

fn sandwich() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (cc, hu) = random_params(&mut rng);
        let s = rng.random_range(0.0..10.0);
        let t = s + rng.random_range(1e-6..10.0);
        let m = incr_second_moment(s, t, cc, hu).unwrap();
        let b = incr_bounds(s, t, cc, hu).unwrap();
        let slack = 1e-12 * m;
        ensure(b.lower <= m + slack && m <= b.upper + slack, || format!("s={s} t={t} {cc:?} {hu:?}: {b:?} vs {m}"))?;
        let m = incr_second_moment(s, t, cc, Hurst::HALF).unwrap();
        let b = incr_bounds(s, t, cc, Hurst::HALF).unwrap();
        ensure(b.lower == m && b.upper == m, || format!("H=1/2 s={s} t={t}: {b:?} vs {m}"))?;
    }
    Ok("10^4 draws, bounds hold; exact equality at H = 1/2".into())
}

fn correlation_trichotomy() -> Outcome {
    let mut count = 0;
    for i in 0..10 {
        let hv = 0.05 + 0.1 * i as f64;
        for (s, t, len) in (0..100).map(|k| {
            // dyadic values keep t - s >= len exact
            let s = (k % 5) as f64 * 0.75;
            let len = 0.125 + (k / 5 % 4) as f64 * 0.5;
            (s, s + len + (k / 20) as f64, len)
        }) {
            let w = IncrementWindow::new(s, t, len).unwrap();
            let rho = incr_corr(w, c(1.0, 1.0), h(hv)).rho;
            ensure(rho.signum() == (hv - 0.5).signum() && rho != 0.0, || format!("H={hv} {w:?}: rho={rho}"))?;
            count += 1;
            let along: Vec<f64> =
                [0.0, 0.5, 1.0, 2.0, 4.0].iter().map(|a| incr_corr(w, c(*a, 1.0), h(hv)).rho.abs()).collect();
            ensure(along.windows(2).all(|p| p[1] <= p[0]), || format!("H={hv} {w:?}: {along:?}"))?;
        }
    }
    Ok(format!("{count} sweep points, sign and monotonicity in a hold"))
}

fn adjacent_inequality() -> Outcome {
    let mut count = 0;
    for u in [0.0, 0.5, 1.0, 5.0] {
        for r in [0.1, 1.0, 10.0] {
            for a in [0.0, 1.0, 2.0] {
                for b in [0.5, 1.0] {
                    for k in 1..=9 {
                        if k == 5 {
                            continue;
                        }
                        let hv = k as f64 / 10.0;
                        let p = adjacent_corr_pair(u, r, c(a, b), h(hv)).unwrap();
                        ensure(p.rho_smfbm.abs() <= p.rho_mfbm.abs(), || {
                            format!("u={u} r={r} a={a} b={b} H={hv}: {p:?}")
                        })?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} grid points"))
}

fn lag_asymptote() -> Outcome {
    let mut ratios = Vec::new();
    for hv in [0.3, 0.7] {
        for p in 0..3u64 {
            let n = 100_000;
            let ratio = lag_cov(p, n, c(1.0, 1.0), h(hv)).unwrap() / lag_cov_asymptote(p, n, c(1.0, 1.0), h(hv));
            ensure((0.98..=1.02).contains(&ratio), || format!("H={hv} p={p}: ratio {ratio}"))?;
            ratios.push(ratio);
        }
    }
    let worst = ratios.iter().fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
    Ok(format!("n = 10^5, max |ratio - 1| = {worst:.1e}"))
}

fn quadratic_variation() -> Outcome {
    for (cc, hv, t) in [(c(1.0, 1.0), 0.3, 1.0), (c(0.5, 2.0), 0.8, 2.5), (c(2.0, 0.7), 0.6, 0.3)] {
        for n in [1u64, 2, 7, 64, 4096] {
            let step = t / n as f64;
            let brute: f64 = (1..=n)
                .map(|j| incr_second_moment((j - 1) as f64 * step, j as f64 * step, cc, h(hv)).unwrap())
                .sum();
            let got = expected_qv(t, n, cc, h(hv)).unwrap();
            ensure(rel_err(got, brute) <= 1e-10, || format!("H={hv} n={n}: {got} vs {brute}"))?;
        }
    }
    let ladder: Vec<u64> = (1..=16).map(|k| 1u64 << k).collect();
    for n in &ladder {
        let got = expected_qv(1.7, *n, c(1.2, 0.9), Hurst::HALF).unwrap();
        ensure(got == (1.44 + 0.81) * 1.7, || format!("H=1/2 n={n}: {got}"))?;
    }
    let rough = expected_qv(1.0, 1 << 16, c(1.0, 1.0), h(0.3)).unwrap();
    ensure(rough > 10.0, || format!("H=0.3: A_(2^16) = {rough}"))?;
    let xs: Vec<f64> = ladder[3..].iter().map(|n| *n as f64).collect();
    let excess: Vec<f64> = ladder[3..].iter().map(|n| expected_qv(1.0, *n, c(1.0, 1.0), h(0.8)).unwrap() - 1.0).collect();
    ensure(excess.iter().all(|e| *e > 0.0) && excess.windows(2).all(|w| w[1] < w[0]), || format!("{excess:?}"))?;
    let slope = loglog_slope(&xs, &excess);
    ensure((slope - (1.0 - 1.6)).abs() <= 0.1, || format!("H=0.8 rate exponent {slope}"))?;
    Ok(format!("brute-force match; A_(2^16) = {rough:.2} at H=0.3; rate exponent {slope:.3} at H=0.8 (want -0.6)"))
}

fn quasi_martingale() -> Outcome {
    let (cc, t) = (c(1.0, 1.0), 1.0);
    let mut notes = Vec::new();
    for hv in [0.55, 0.6, 0.7] {
        let lim = uv_limit(t, cc, h(hv));
        let r = uv_ratio(10_000, t, cc, h(hv)).unwrap();
        ensure(rel_err(r, lim) <= 0.01, || format!("H={hv}: u/v = {r}, limit {lim}"))?;
        let ns: Vec<u64> = (10..=16).map(|k| 1u64 << k).collect();
        let sums: Vec<f64> = ns.iter().map(|n| quasi_mart_sum(t, *n, cc, h(hv)).unwrap().i_n).collect();
        let xs: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
        let slope = loglog_slope(&xs, &sums);
        let want = 1.5 - 2.0 * hv;
        ensure((slope - want).abs() <= 0.05, || format!("H={hv}: slope {slope}, want {want}"))?;
        notes.push(format!("H={hv}: {slope:.3} (want {want:.2})"));
    }
    Ok(format!("I_n slopes {}", notes.join(", ")))
}

fn conditional_l2() -> Outcome {
    let (cc, t, n) = (c(1.0, 1.0), 1.0, 512);
    let r = cond_l2_sum(t, n, cc, h(0.75), 1024).map_err(|e| e.to_string())?;
    let lb = cond_l2_lower_bound(t, n, cc).unwrap();
    let (mut acc, mut acc_lb) = (0.0, 0.0);
    for (j, (x, l)) in r.per_j.iter().zip(&lb).enumerate() {
        acc += x;
        acc_lb += l;
        ensure(x >= l && acc >= acc_lb, || format!("j={}: term {x} vs {l}, partial {acc} vs {acc_lb}", j + 1))?;
    }
    ensure(r.lambda_max_bound_ok == Some(true), || format!("lambda_max {} > {}", r.lambda_max, r.lambda_bound))?;
    for j in 1..=64u64 {
        for k in 1..=j {
            let g = lemma29_gap(j, k).unwrap();
            ensure(g.f1 - g.f2 >= g.lower_bound && g.lower_bound >= 0.0, || format!("j={j} k={k}: {g:?}"))?;
        }
    }
    Ok(format!(
        "n=512: sum {:.4} >= bound {:.4}; lambda_max {:.5} <= {:.5}; cross-covariance chain holds for j <= 64",
        r.total, acc_lb, r.lambda_max, r.lambda_bound
    ))
}

fn l2_probe() -> Outcome {
    let cc = c(1.0, 1.0);
    for hv in [0.8, 0.9] {
        let p = l2_mixed_partial_probe(1.0, cc, h(hv), 30).unwrap();
        ensure(p.converged, || format!("H={hv} did not converge: {:?}", &p.estimates[25..]))?;
    }
    for hv in [0.6, 0.7] {
        let p = l2_mixed_partial_probe(1.0, cc, h(hv), 30).unwrap();
        let e = &p.estimates;
        ensure(!p.converged && e.windows(2).all(|w| w[1] > w[0]), || format!("H={hv}: {e:?}"))?;
        // non-saturating: successive increments shrink no faster than geometrically
        let d: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        ensure(d.windows(2).all(|w| w[1] >= 0.5 * w[0]), || format!("H={hv}: increments {d:?}"))?;
    }
    let p = l2_mixed_partial_probe(1.0, cc, Hurst::HALF, 30).unwrap();
    ensure(p.estimates.iter().all(|v| *v == 0.0), || "H=1/2 estimates not all zero".into())?;
    Ok("converged at H in {0.8, 0.9}; growing at {0.6, 0.7}; zero at 1/2".into())
}

fn ensemble(spec: ProcessSpec, grid: &TimeGrid, seed: u64, method: SamplingMethod) -> PathEnsemble {
    sample(&SamplerConfig::new(spec, grid.clone(), 20_000, seed, method).unwrap()).unwrap()
}

fn within(est: EstimateWithError, want: f64, what: impl FnOnce() -> String) -> Result<(), String> {
    ensure(est.within(want, 5.0), || format!("{}: {} vs {want} (se {})", what(), est.value, est.std_error))
}

fn monte_carlo() -> Outcome {
    let grid = TimeGrid::uniform(0.0, 3.0, 15).unwrap();
    let m = grid.len();
    let windows = [(0.0, 2.0, 1.0), (0.0, 1.0, 1.0), (1.0, 2.0, 1.0)];
    let mut cells = 0;
    for (k, (a, b, hv)) in [(1.0, 1.0, 0.3), (1.0, 1.0, 0.5), (1.0, 1.0, 0.7), (0.0, 1.0, 0.75)].into_iter().enumerate() {
        let (cc, hu) = (c(a, b), h(hv));
        let spec = ProcessSpec::smfbm(cc, hu);
        let target = cov_matrix(&spec, &grid);
        let direct = ensemble(spec, &grid, 100 + k as u64, SamplingMethod::Direct);
        let built = ensemble(spec, &grid, 200 + k as u64, SamplingMethod::Constructive);
        let tag = format!("(a,b,H)=({a},{b},{hv})");
        for i in 0..m {
            for j in i..m {
                let d = empirical_cov(&direct, i, j).unwrap();
                within(d, target.get(i, j), || format!("{tag} direct cov ({i},{j})"))?;
                let e = empirical_cov(&built, i, j).unwrap();
                within(d.minus(&e), 0.0, || format!("{tag} direct vs constructive ({i},{j})"))?;
                cells += 1;
            }
        }
        for (s, t, len) in windows {
            let w = IncrementWindow::new(s, t, len).unwrap();
            let est = empirical_incr_corr(&direct, w).unwrap();
            within(est, incr_corr(w, cc, hu).rho, || format!("{tag} increment correlation {w:?}"))?;
        }
        let qv = realized_qv(&direct).unwrap();
        within(qv, expected_qv(3.0, 15, cc, hu).unwrap(), || format!("{tag} realized QV"))?;
    }
    Ok(format!("4 configurations x 20000 paths, {cells} covariance cells per sampler"))
}

fn markov() -> Outcome {
    let mut rng = StdRng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (cc, _) = random_params(&mut rng);
        let mut x = [rng.random_range(0.01..5.0), rng.random_range(0.01..5.0), rng.random_range(0.01..5.0)];
        x.sort_by(f64::total_cmp);
        if x[0] == x[1] || x[1] == x[2] {
            continue;
        }
        let d = markov_defect(x[0], x[1], x[2], &ProcessSpec::smfbm(cc, Hurst::HALF)).unwrap();
        worst = worst.max(d.abs());
    }
    ensure(worst <= 1e-12, || format!("H=1/2 worst defect {worst:e}"))?;
    let mut vals = Vec::new();
    for hv in [0.3, 0.7] {
        let d = markov_defect(1.0, 2.0, 3.0, &ProcessSpec::smfbm(c(1.0, 1.0), h(hv))).unwrap();
        ensure(d.abs() > 1e-6, || format!("H={hv}: defect {d}"))?;
        vals.push(format!("{d:.4}"));
    }
    Ok(format!("H=1/2 worst {worst:.1e}; defects at H=0.3, 0.7: {}", vals.join(", ")))
}

fn smfbm(dir: &Path, threads: usize, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_smfbm"))
        .current_dir(dir)
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn same_bytes(a: &Path, b: &Path) -> Result<(), String> {
    let (x, y) = (std::fs::read(a).map_err(|e| e.to_string())?, std::fs::read(b).map_err(|e| e.to_string())?);
    ensure(x == y, || format!("{} and {} differ", a.display(), b.display()))
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let runs: [(&str, &[&str]); 5] = [
        ("paths.csv", &["simulate", "--hurst", "0.7", "--grid", "0:2:32", "--paths", "3000", "--seed", "9", "--out", "paths.csv"]),
        ("built.csv", &["simulate", "--hurst", "0.3", "--grid", "0:2:32", "--paths", "3000", "--method", "constructive", "--out", "built.csv"]),
        ("cov.csv", &["cov", "--hurst", "0.7", "--grid", "0:1:16", "--out", "cov.csv"]),
        ("qv.series.csv", &["diag", "qv", "--hurst", "0.8", "--out", "qv.json"]),
        ("pair.csv", &["compare", "pair", "--sweep", "hurst=0.1:0.9:9", "--out", "pair.csv"]),
    ];
    for (csv, args) in runs {
        smfbm(dir, 1, args)?;
        let stem = Path::new(csv).file_stem().unwrap().to_string_lossy().into_owned();
        let stem = stem.trim_end_matches(".series");
        let manifest = format!("{stem}.manifest.json");
        for threads in [2, 8] {
            let out_dir = format!("replay{threads}");
            smfbm(dir, threads, &["replay", &manifest, "--out-dir", &out_dir])?;
            same_bytes(&dir.join(csv), &dir.join(&out_dir).join(csv))?;
        }
    }
    Ok("5 manifests replayed under 2 and 8 threads, byte-identical CSV".into())
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "kernel consistency", 1, kernel_consistency),
        (2, "self-similarity", 1, self_similarity),
        (3, "second-moment sandwich", 1, sandwich),
        (4, "correlation trichotomy and monotonicity", 1, correlation_trichotomy),
        (5, "adjacent correlation inequality", 5, adjacent_inequality),
        (6, "lag covariance asymptote", 5, lag_asymptote),
        (7, "expected quadratic variation", 10, quadratic_variation),
        (8, "quasi-martingale sums", 30, quasi_martingale),
        (9, "conditional L2 sums and bounds", 60, conditional_l2),
        (10, "mixed-partial L2 probe", 30, l2_probe),
        (11, "Monte Carlo closure", 180, monte_carlo),
        (12, "Markov defect", 1, markov),
        (13, "CLI determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{detail}; took {:.2} s, budget {budget} s", elapsed.as_secs_f64()))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({:.2} s): {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
