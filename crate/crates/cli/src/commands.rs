use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use smfbm::diagnostics::{
    cond_l2_lower_bound, cond_l2_sum, l2_mixed_partial_probe, loglog_slope, markov_defect, quasi_mart_sum, qv_report,
    semimart_verdict, uv_limit,
};
use smfbm::increments::{
    cov_gap, incr_second_moment, lag_cov, lag_cov_asymptote, nonoverlap_cov_mfbm, nonoverlap_cov_smfbm, IntervalPair,
};
use smfbm::kernels::cov_matrix;
use smfbm::report::DiagnosticsReport;
use smfbm::simulate::{sample, SamplerConfig, SamplingMethod};
use smfbm::{Hurst, MixCoeffs, ProcessSpec, TimeGrid};

use crate::args::*;
use crate::error::CliError;
use crate::output::{fmt_f64, sibling, write_csv, write_json, RunManifest};

/// Flags win over the config file; the config file wins over defaults.
fn merge<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = config else { return Ok(flags) };
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut base: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("--config {}: invalid JSON: {e}", path.display())))?;
    let Some(obj) = base.as_object_mut() else {
        return Err(CliError::usage(format!("--config {}: expected a JSON object", path.display())));
    };
    if let Value::Object(over) = serde_json::to_value(&flags).expect("serializable") {
        for (k, v) in over {
            if !v.is_null() {
                obj.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))
}

fn mix_of(m: &MixArgs) -> Result<(MixCoeffs, Hurst), CliError> {
    let coeffs = MixCoeffs::new(m.a.unwrap_or(1.0), m.b.unwrap_or(1.0)).map_err(|e| CliError::flag("--a/--b", e))?;
    let hurst = Hurst::new(m.hurst.unwrap_or(0.5)).map_err(|e| CliError::flag("--hurst", e))?;
    Ok((coeffs, hurst))
}

fn spec_of(s: &SpecArgs) -> Result<ProcessSpec, CliError> {
    let (coeffs, hurst) = mix_of(&s.mix)?;
    let kind = s.process.unwrap_or(smfbm::ProcessKind::Smfbm);
    // parameters fixed by the family are ignored, so only validate the ones used
    ProcessSpec::new(kind, coeffs.a, coeffs.b, hurst.value()).map_err(|e| CliError::flag("--process", e))
}

fn parse_f64(flag: &str, text: &str) -> Result<f64, CliError> {
    text.trim().parse().map_err(|_| CliError::usage(format!("{flag}: '{text}' is not a number")))
}

fn grid_of(g: &GridArgs) -> Result<TimeGrid, CliError> {
    if let Some(path) = &g.grid_file {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let pts = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| parse_f64("--grid-file", s))
            .collect::<Result<Vec<_>, _>>()?;
        return TimeGrid::new(pts).map_err(|e| CliError::flag("--grid-file", e));
    }
    let spec = g.grid.as_deref().unwrap_or("0:1:16");
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!("--grid: expected start:end:count, got '{spec}'")));
    }
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--grid: count '{}' is not a nonnegative integer", parts[2])))?;
    TimeGrid::uniform(parse_f64("--grid", parts[0])?, parse_f64("--grid", parts[1])?, count)
        .map_err(|e| CliError::flag("--grid", e))
}

/// `lo:hi` doubles from `lo` while `<= hi`; otherwise a comma-separated list.
fn parse_ladder(flag: &str, text: &str) -> Result<Vec<u64>, CliError> {
    let int = |s: &str| -> Result<u64, CliError> {
        s.trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{flag}: '{s}' is not a positive integer")))
    };
    let ladder = if let Some((lo, hi)) = text.split_once(':') {
        let (lo, hi) = (int(lo)?, int(hi)?);
        if lo == 0 || hi < lo {
            return Err(CliError::usage(format!("{flag}: need 1 <= lo <= hi, got '{text}'")));
        }
        std::iter::successors(Some(lo), |n| n.checked_mul(2)).take_while(|n| *n <= hi).collect()
    } else {
        text.split(',').map(int).collect::<Result<Vec<_>, _>>()?
    };
    if ladder.is_empty() || ladder.contains(&0) {
        return Err(CliError::usage(format!("{flag}: ladder must be nonempty and positive, got '{text}'")));
    }
    Ok(ladder)
}

/// `name=lo:hi:count`, `count` equally spaced values including both ends.
fn parse_sweep(text: &str) -> Result<(String, Vec<f64>), CliError> {
    let bad = || CliError::usage(format!("--sweep: expected name=lo:hi:count, got '{text}'"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let (lo, hi) = (parse_f64("--sweep", parts[0])?, parse_f64("--sweep", parts[1])?);
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    let values = (0..count)
        .map(|i| if count == 1 { lo } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
        // drop the last-bit noise of the linear spacing (0.30000000000000004 -> 0.3)
        .map(|x: f64| format!("{x:.12e}").parse().expect("formatted float"))
        .collect();
    Ok((name.trim().to_string(), values))
}

fn required_out(out: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    out.clone().ok_or_else(|| CliError::usage("--out is required"))
}

pub fn cov(args: CovArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.spec.fill_defaults();
    args.grid.fill_defaults();
    let out = required_out(&args.out)?;
    let spec = spec_of(&args.spec)?;
    let grid = grid_of(&args.grid)?;
    let m = cov_matrix(&spec, &grid);
    let n = m.dim();
    let header: Vec<String> = (0..n).map(|i| format!("t_{i}")).collect();
    let rows: Vec<Vec<String>> = (0..n).map(|i| m.row(i).iter().map(|x| fmt_f64(*x)).collect()).collect();
    write_csv(&out, &header, &rows)?;
    RunManifest::new("cov", &args, None, vec![out.clone()]).write_beside(&out)?;
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.spec.fill_defaults();
    args.grid.fill_defaults();
    args.paths.get_or_insert(1000);
    args.seed.get_or_insert(0);
    args.method.get_or_insert(SamplingMethod::Direct);
    let out = required_out(&args.out)?;
    let spec = spec_of(&args.spec)?;
    let grid = grid_of(&args.grid)?;
    let (n_paths, seed, method) = (args.paths.unwrap(), args.seed.unwrap(), args.method.unwrap());
    if n_paths == 0 {
        return Err(CliError::usage("--paths: must be at least 1"));
    }
    let cfg = SamplerConfig::new(spec, grid, n_paths, seed, method).map_err(|e| CliError::flag("--grid", e))?;
    let ens = sample(&cfg)?;

    let m = cfg.grid.len();
    let header: Vec<String> =
        std::iter::once("path_id".to_string()).chain((0..m).map(|i| format!("t_{i}"))).collect();
    let rows: Vec<Vec<String>> = ens
        .paths()
        .enumerate()
        .map(|(p, path)| std::iter::once(p.to_string()).chain(path.iter().map(|x| fmt_f64(*x))).collect())
        .collect();
    write_csv(&out, &header, &rows)?;
    let meta_path = sibling(&out, "meta.json");
    let meta = json!({
        "spec": cfg.spec,
        "seed": seed,
        "method": method,
        "jitter": ens.info.jitter,
        "pivot_ratio": ens.info.pivot_ratio,
        "grid": cfg.grid,
    });
    write_json(&meta_path, &meta)?;
    RunManifest::new("simulate", &args, Some(seed), vec![out.clone(), meta_path]).write_beside(&out)?;
    Ok(())
}

fn emit_report(
    command: &str,
    params: &impl Serialize,
    report: &DiagnosticsReport,
    out: Option<&Path>,
    series: Option<(&str, Vec<(u64, f64)>)>,
) -> Result<(), CliError> {
    let Some(out) = out else {
        println!("{}", report.to_json_pretty());
        return Ok(());
    };
    write_json(out, report)?;
    let mut outputs = vec![out.to_path_buf()];
    if let Some((column, pairs)) = series {
        let path = sibling(out, "series.csv");
        let rows: Vec<Vec<String>> = pairs.iter().map(|(n, v)| vec![n.to_string(), fmt_f64(*v)]).collect();
        write_csv(&path, &["n".to_string(), column.to_string()], &rows)?;
        outputs.push(path);
    }
    RunManifest::new(command, params, None, outputs).write_beside(out)?;
    Ok(())
}

fn horizon(t: Option<f64>) -> Result<f64, CliError> {
    match t {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(CliError::usage(format!("--t: horizon must be positive, got {t}"))),
        None => Ok(1.0),
    }
}

pub fn diag(cmd: DiagCommand) -> Result<(), CliError> {
    match cmd {
        DiagCommand::Markov(args) => diag_markov(args),
        DiagCommand::Qv(args) => diag_qv(args),
        DiagCommand::Quasimart(args) => diag_quasimart(args),
        DiagCommand::Condl2(args) => diag_condl2(args),
        DiagCommand::L2probe(args) => diag_l2probe(args),
        DiagCommand::Verdict(args) => diag_verdict(args),
    }
}

fn diag_markov(args: MarkovArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.spec.fill_defaults();
    let (s, t, u) = (*args.s.get_or_insert(1.0), *args.t.get_or_insert(2.0), *args.u.get_or_insert(3.0));
    let spec = spec_of(&args.spec)?;
    let defect = markov_defect(s, t, u, &spec).map_err(|e| CliError::flag("--s/--t/--u", e))?;
    let report = DiagnosticsReport::new(spec, "markov", json!({"s": s, "t": t, "u": u}), json!({"defect": defect}));
    emit_report("diag markov", &args, &report, args.out.as_deref(), None)
}

fn diag_qv(args: LadderArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    args.t.get_or_insert(1.0);
    args.n_ladder.get_or_insert_with(|| "2:65536".to_string());
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let t = horizon(args.t)?;
    let ladder = parse_ladder("--n-ladder", args.n_ladder.as_deref().unwrap())?;
    let r = qv_report(t, &ladder, coeffs, hurst)?;
    let spec = ProcessSpec::smfbm(coeffs, hurst);
    let mut report = DiagnosticsReport::new(
        spec,
        "qv",
        json!({"t": t, "n_ladder": ladder}),
        json!({"n_values": r.n_values, "a_n": r.a_n, "limit_class": r.limit_class, "limit_value": r.limit_value}),
    );
    if ladder.len() >= 2 && coeffs.b != 0.0 && !hurst.is_half() {
        let xs: Vec<f64> = ladder.iter().map(|n| *n as f64).collect();
        let expected = Some(1.0 - hurst.twice());
        report = match r.limit_value {
            None => report.with_trend("a_n", loglog_slope(&xs, &r.a_n), expected),
            Some(lim) => {
                let excess: Vec<f64> = r.a_n.iter().map(|v| v - lim).collect();
                report.with_trend("a_n - limit", loglog_slope(&xs, &excess), expected)
            }
        };
    }
    let report = report.with_verdict(semimart_verdict(coeffs, hurst));
    let series = ladder.iter().copied().zip(r.a_n.iter().copied()).collect();
    emit_report("diag qv", &args, &report, args.out.as_deref(), Some(("a_n", series)))
}

fn diag_quasimart(args: LadderArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    args.t.get_or_insert(1.0);
    args.n_ladder.get_or_insert_with(|| "1024:65536".to_string());
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let t = horizon(args.t)?;
    let ladder = parse_ladder("--n-ladder", args.n_ladder.as_deref().unwrap())?;
    let mut i_n = Vec::with_capacity(ladder.len());
    let mut last_uv = None;
    for &n in &ladder {
        let q = quasi_mart_sum(t, n, coeffs, hurst).map_err(|e| CliError::flag("--n-ladder/--b", e))?;
        i_n.push(q.i_n);
        last_uv = q.uv_terms.last().copied();
    }
    let spec = ProcessSpec::smfbm(coeffs, hurst);
    let mut report = DiagnosticsReport::new(
        spec,
        "quasimart",
        json!({"t": t, "n_ladder": ladder}),
        json!({"n_values": ladder, "i_n": i_n, "uv_last": last_uv, "uv_limit": uv_limit(t, coeffs, hurst)}),
    );
    let h = hurst.value();
    if ladder.len() >= 2 && i_n.iter().all(|v| *v != 0.0) {
        let xs: Vec<f64> = ladder.iter().map(|n| *n as f64).collect();
        let expected = (h > 0.5 && h < 0.75).then_some(1.5 - 2.0 * h);
        report = report.with_trend("i_n", loglog_slope(&xs, &i_n), expected);
    }
    let report = report.with_verdict(semimart_verdict(coeffs, hurst));
    let series = ladder.iter().copied().zip(i_n.iter().copied()).collect();
    emit_report("diag quasimart", &args, &report, args.out.as_deref(), Some(("i_n", series)))
}

fn diag_condl2(args: CondL2Args) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    args.t.get_or_insert(1.0);
    args.n.get_or_insert(512);
    args.cap.get_or_insert(smfbm::diagnostics::COND_L2_DEFAULT_CAP);
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let t = horizon(args.t)?;
    let (n, cap) = (args.n.unwrap(), args.cap.unwrap());
    let r = cond_l2_sum(t, n, coeffs, hurst, cap).map_err(|e| CliError::flag("--n", e))?;
    let mut outputs = json!({
        "total": r.total,
        "per_j": r.per_j,
        "lambda_max": r.lambda_max,
        "lambda_bound": r.lambda_bound,
        "lambda_max_bound_ok": r.lambda_max_bound_ok,
    });
    if hurst.value() == 0.75 {
        let lb = cond_l2_lower_bound(t, n, coeffs)?;
        let holds = r.per_j.iter().zip(&lb).all(|(x, l)| x >= l);
        outputs["lower_bound_per_j"] = json!(lb);
        outputs["lower_bound_total"] = json!(lb.iter().sum::<f64>());
        outputs["lower_bound_holds"] = json!(holds);
    }
    let report = DiagnosticsReport::new(ProcessSpec::smfbm(coeffs, hurst), "condl2", json!({"t": t, "n": n}), outputs)
        .with_verdict(semimart_verdict(coeffs, hurst));
    emit_report("diag condl2", &args, &report, args.out.as_deref(), None)
}

fn diag_l2probe(args: ProbeArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    args.t.get_or_insert(1.0);
    args.levels.get_or_insert(30);
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let t = horizon(args.t)?;
    let levels = args.levels.unwrap();
    let p = l2_mixed_partial_probe(t, coeffs, hurst, levels).map_err(|e| CliError::flag("--a/--levels", e))?;
    let report = DiagnosticsReport::new(
        ProcessSpec::smfbm(coeffs, hurst),
        "l2probe",
        json!({"t": t, "levels": levels}),
        json!({"estimates": p.estimates, "band_half_widths": p.band_half_widths, "converged": p.converged}),
    )
    .with_verdict(semimart_verdict(coeffs, hurst));
    emit_report("diag l2probe", &args, &report, args.out.as_deref(), None)
}

fn diag_verdict(args: VerdictArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let report = DiagnosticsReport::new(ProcessSpec::smfbm(coeffs, hurst), "verdict", json!({}), json!({}))
        .with_verdict(semimart_verdict(coeffs, hurst));
    emit_report("diag verdict", &args, &report, args.out.as_deref(), None)
}

pub fn compare(cmd: CompareCommand) -> Result<(), CliError> {
    match cmd {
        CompareCommand::Pair(args) => compare_pair(args),
        CompareCommand::Lag(args) => compare_lag(args),
    }
}

fn pair_row(u: f64, v: f64, s: f64, t: f64, mix: &MixArgs) -> Result<Vec<String>, CliError> {
    let (coeffs, hurst) = mix_of(mix)?;
    let pair = IntervalPair::new(u, v, s, t).map_err(|e| CliError::flag("--u/--v/--s/--t", e))?;
    let r = nonoverlap_cov_mfbm(pair, coeffs, hurst);
    let c = nonoverlap_cov_smfbm(pair, coeffs, hurst);
    let d = cov_gap(pair, coeffs, hurst);
    let p = hurst.twice();
    let mfbm_var = |x: f64, y: f64| coeffs.a2() * (y - x) + coeffs.b2() * (y - x).powf(p);
    let rho_mfbm = r / (mfbm_var(u, v) * mfbm_var(s, t)).sqrt();
    let rho_smfbm = c / (incr_second_moment(u, v, coeffs, hurst)? * incr_second_moment(s, t, coeffs, hurst)?).sqrt();
    Ok([u, v, s, t, coeffs.a, coeffs.b, hurst.value(), r, c, d, rho_mfbm, rho_smfbm]
        .iter()
        .map(|x| fmt_f64(*x))
        .collect())
}

fn compare_pair(args: PairArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    let (u, v) = (*args.u.get_or_insert(0.0), *args.v.get_or_insert(1.0));
    let (s, t) = (*args.s.get_or_insert(1.0), *args.t.get_or_insert(2.0));
    let out = required_out(&args.out)?;
    let rows = match args.sweep.as_deref() {
        None => vec![pair_row(u, v, s, t, &args.mix)?],
        Some(text) => {
            let (name, values) = parse_sweep(text)?;
            values
                .into_iter()
                .map(|x| {
                    let mut mix = args.mix.clone();
                    match name.as_str() {
                        "hurst" => mix.hurst = Some(x),
                        "a" => mix.a = Some(x),
                        "b" => mix.b = Some(x),
                        "u" => return pair_row(x, v + x - u, s + x - u, t + x - u, &mix),
                        other => {
                            return Err(CliError::usage(format!(
                                "--sweep: unknown parameter '{other}' (expected hurst, a, b or u)"
                            )))
                        }
                    }
                    pair_row(u, v, s, t, &mix)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let header: Vec<String> = ["u", "v", "s", "t", "a", "b", "hurst", "R", "C", "D", "rho_mfbm", "rho_smfbm"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    write_csv(&out, &header, &rows)?;
    RunManifest::new("compare pair", &args, None, vec![out.clone()]).write_beside(&out)?;
    Ok(())
}

fn compare_lag(args: LagArgs) -> Result<(), CliError> {
    let config = args.config.clone();
    let mut args = merge(args, config.as_deref())?;
    args.mix.fill_defaults();
    let p = *args.p.get_or_insert(0);
    args.n_ladder.get_or_insert_with(|| "1:65536".to_string());
    let out = required_out(&args.out)?;
    let (coeffs, hurst) = mix_of(&args.mix)?;
    let ladder = parse_ladder("--n-ladder", args.n_ladder.as_deref().unwrap())?;
    let rows = ladder
        .iter()
        .map(|&n| {
            let c = lag_cov(p, n, coeffs, hurst)?;
            let asym = lag_cov_asymptote(p, n, coeffs, hurst);
            Ok(vec![n.to_string(), fmt_f64(c), fmt_f64(asym), fmt_f64(c / asym)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let header: Vec<String> = ["n", "C", "asymptote", "ratio"].iter().map(|s| s.to_string()).collect();
    write_csv(&out, &header, &rows)?;
    RunManifest::new("compare lag", &args, None, vec![out.clone()]).write_beside(&out)?;
    Ok(())
}

fn params<T: DeserializeOwned>(m: &RunManifest) -> Result<T, CliError> {
    serde_json::from_value(m.params.clone())
        .map_err(|e| CliError::usage(format!("manifest params do not fit '{}': {e}", m.command)))
}

fn relocate(out: &mut Option<PathBuf>, dir: Option<&Path>) {
    if let (Some(dir), Some(path)) = (dir, out.as_ref()) {
        *out = Some(dir.join(path.file_name().unwrap_or_default()));
    }
}

pub fn replay(args: ReplayArgs) -> Result<(), CliError> {
    let m = RunManifest::read(&args.manifest)?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let dir = args.out_dir.as_deref();
    macro_rules! rerun {
        ($ty:ty, $run:expr) => {{
            let mut a: $ty = params(&m)?;
            relocate(&mut a.out, dir);
            $run(a)
        }};
    }
    match m.command.as_str() {
        "cov" => rerun!(CovArgs, cov),
        "simulate" => rerun!(SimulateArgs, simulate),
        "diag markov" => rerun!(MarkovArgs, diag_markov),
        "diag qv" => rerun!(LadderArgs, diag_qv),
        "diag quasimart" => rerun!(LadderArgs, diag_quasimart),
        "diag condl2" => rerun!(CondL2Args, diag_condl2),
        "diag l2probe" => rerun!(ProbeArgs, diag_l2probe),
        "diag verdict" => rerun!(VerdictArgs, diag_verdict),
        "compare pair" => rerun!(PairArgs, compare_pair),
        "compare lag" => rerun!(LagArgs, compare_lag),
        other => Err(CliError::usage(format!("manifest names unknown command '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        assert_eq!(parse_ladder("x", "2:16").unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_ladder("x", "3:20").unwrap(), vec![3, 6, 12]);
        assert_eq!(parse_ladder("x", "5,7,100").unwrap(), vec![5, 7, 100]);
        assert!(parse_ladder("x", "0:4").is_err());
        assert!(parse_ladder("x", "8:4").is_err());
        assert!(parse_ladder("x", "a,b").is_err());
    }

    #[test]
    fn sweeps() {
        let (name, v) = parse_sweep("hurst=0.1:0.9:9").unwrap();
        assert_eq!(name, "hurst");
        assert_eq!(v.len(), 9);
        assert_eq!((v[0], v[8]), (0.1, 0.9));
        assert!((v[4] - 0.5).abs() < 1e-15);
        assert!(parse_sweep("hurst=0.1:0.9").is_err());
        assert!(parse_sweep("0.1:0.9:3").is_err());
    }

    #[test]
    fn grids() {
        let g = grid_of(&GridArgs { grid: Some("0:1:16".into()), grid_file: None }).unwrap();
        assert_eq!(g.len(), 17);
        assert!(grid_of(&GridArgs { grid: Some("0:1".into()), grid_file: None }).is_err());
        assert!(grid_of(&GridArgs { grid: Some("1:0:4".into()), grid_file: None }).is_err());
    }
}
