//! Command-line surface. Every parameter is optional at parse time so a JSON
//! config file can fill it in; defaults are applied after the merge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use smfbm::simulate::SamplingMethod;
use smfbm::ProcessKind;

#[derive(Debug, Parser)]
#[command(name = "smfbm", version, about = "Sub-mixed fractional Brownian motion: covariances, exact sampling, diagnostics")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "SMFBM_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Covariance matrix of a process on a grid, as CSV.
    Cov(CovArgs),
    /// Sample paths, as CSV plus a JSON metadata sidecar.
    Simulate(SimulateArgs),
    /// Semimartingale diagnostics, as JSON reports.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// mfBm vs smfBm increment comparisons over parameter sweeps, as CSV.
    #[command(subcommand)]
    Compare(CompareCommand),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct MixArgs {
    /// Brownian coefficient a.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Fractional coefficient b.
    #[arg(long = "b", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Hurst index in (0, 1).
    #[arg(long)]
    pub hurst: Option<f64>,
}

impl MixArgs {
    pub fn fill_defaults(&mut self) {
        self.a.get_or_insert(1.0);
        self.b.get_or_insert(1.0);
        self.hurst.get_or_insert(0.5);
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SpecArgs {
    /// bm | fbm | sfbm | mfbm | smfbm
    #[arg(long)]
    pub process: Option<ProcessKind>,
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
}

impl SpecArgs {
    pub fn fill_defaults(&mut self) {
        self.process.get_or_insert(ProcessKind::Smfbm);
        self.mix.fill_defaults();
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GridArgs {
    /// Uniform grid `start:end:count` (count intervals, count+1 points).
    #[arg(long, conflicts_with = "grid_file")]
    pub grid: Option<String>,
    /// File with explicit grid points, separated by whitespace or commas.
    #[arg(long)]
    pub grid_file: Option<PathBuf>,
}

impl GridArgs {
    pub fn fill_defaults(&mut self) {
        if self.grid_file.is_none() {
            self.grid.get_or_insert_with(|| "0:1:16".to_string());
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CovArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Output CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Number of paths (at least 1).
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// direct | constructive
    #[arg(long)]
    pub method: Option<SamplingMethod>,
    /// Output CSV; the metadata sidecar goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Markov defect at 0 < s < t < u.
    Markov(MarkovArgs),
    /// Expected quadratic variation over a ladder of partitions.
    Qv(LadderArgs),
    /// One-step conditional sums I_n over a ladder of partitions.
    Quasimart(LadderArgs),
    /// Conditional-L2 sum and eigenvalue bound on one partition.
    Condl2(CondL2Args),
    /// Square-integrability probe of the mixed covariance partial.
    L2probe(ProbeArgs),
    /// Semimartingale classification.
    Verdict(VerdictArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct MarkovArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    /// Output JSON report; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct LadderArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    /// Horizon T.
    #[arg(long)]
    pub t: Option<f64>,
    /// Partition sizes: `lo:hi` doubles from lo up to hi, or a comma list.
    #[arg(long)]
    pub n_ladder: Option<String>,
    /// Output JSON report; the (n, value) CSV goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CondL2Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    #[arg(long)]
    pub t: Option<f64>,
    /// Partition size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest partition size accepted.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ProbeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of band refinements.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct VerdictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CompareCommand {
    /// Increments on [u,v] and [s,t] under mfBm and smfBm: R, C, D and both correlations.
    Pair(PairArgs),
    /// Lag covariances C(p, n) of unit increments against their asymptote.
    Lag(LagArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct PairArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// `name=lo:hi:count` with name one of hurst, a, b, u.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct LagArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mix: MixArgs,
    /// Offset p of the first unit increment.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n_ladder: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Write the outputs here instead of their recorded locations.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
