use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "impactlab",
    version,
    about = "Market impact kernels, execution trajectories and cost experiments"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Directory for CSV, SVG and manifest output [default: impactlab-output;
    /// for `rerun`, the manifest's directory].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Flat TOML file of option defaults (`key = value`, keys are long flag names).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate a kernel and its integrals.
    Kernel(KernelCmd),
    /// Check the Laplace inverters on known transform pairs.
    Invlap(InvlapCmd),
    /// Optimal liquidation trajectory.
    Trajectory(TrajectoryCmd),
    /// Temporary impact of a rate profile.
    Impact(ImpactCmd),
    /// Execution cost of a profile, a list of trades, or a constant rate.
    Cost(CostCmd),
    /// Trading profile that holds a target price path.
    RateForPrice(RateForPriceCmd),
    /// Cycle work of random round trips.
    ArbitrageCheck(ArbitrageCmd),
    /// Isochronic, isochoric or isotachic cost sweep.
    Sweep(SweepCmd),
    /// Regime-law constant across sweep families.
    LawCheck(LawCheckCmd),
    /// Binary-tree shortfall of market and limit orders.
    BinaryTree(BinaryTreeCmd),
    /// Re-run the experiment recorded in a manifest.
    #[serde(skip)]
    Rerun(RerunCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Kernel(_) => "kernel",
            Self::Invlap(_) => "invlap",
            Self::Trajectory(_) => "trajectory",
            Self::Impact(_) => "impact",
            Self::Cost(_) => "cost",
            Self::RateForPrice(_) => "rate-for-price",
            Self::ArbitrageCheck(_) => "arbitrage-check",
            Self::Sweep(_) => "sweep",
            Self::LawCheck(_) => "law-check",
            Self::BinaryTree(_) => "binary-tree",
            Self::Rerun(_) => "rerun",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Delta,
    Exponential,
    Diffusion,
    Power,
}

/// Kernel parameters; only those of the chosen family are used.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "diffusion")]
    pub family: Family,
    /// Delta/exponential amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Exponential decay rate (1/day).
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Diffusion inner capacity; K(0) = 1/c.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Diffusion coefficient.
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Diffusion outer boundary; unbounded when omitted.
    #[arg(long)]
    pub x2: Option<f64>,
    /// Power kernel permanent level.
    #[arg(long, default_value_t = 0.0)]
    pub c0: f64,
    /// Power kernel amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Power kernel time offset.
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Power kernel decay exponent.
    #[arg(long, default_value_t = 0.5)]
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct KernelCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    /// Times: list `0,0.5,1` or range `1e-3:1e3:x10`.
    #[arg(long, default_value = "0,0.5,1")]
    pub t: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Talbot,
    Stehfest,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct InvlapCmd {
    #[arg(long, value_enum, default_value = "talbot")]
    pub method: MethodArg,
    /// Inversion order; the method's default when omitted.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value = "1e-3:1e3:x10")]
    pub t: String,
    /// Largest accepted relative error.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryKernel {
    /// Almgren–Chriss (delta kernel).
    Delta,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TrajectoryCmd {
    #[arg(long, value_enum, default_value = "delta")]
    pub kernel: TrajectoryKernel,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub xt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Urgency k (1/day).
    #[arg(long, conflicts_with = "lambda")]
    pub urgency: Option<f64>,
    /// Risk aversion λ; sets the urgency.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Exponential kernel decay rate.
    #[arg(long, default_value_t = 10.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ImpactCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    /// Profile CSV (`t_start,t_end,rate`, block trades as `t,volume,impulse`).
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value = "0:10:+0.1")]
    pub t: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CostCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    /// Continuous cost of a profile CSV.
    #[arg(long, group = "source")]
    pub profile: Option<PathBuf>,
    /// Discrete cost of child orders from a `t,volume` CSV.
    #[arg(long, group = "source")]
    pub trades: Option<PathBuf>,
    /// Constant trading rate (with --horizon).
    #[arg(long, group = "source", requires = "horizon")]
    pub rate: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Constant,
    Power,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RateForPriceCmd {
    #[arg(long, value_enum, default_value = "constant")]
    pub target: TargetArg,
    /// Price step of the constant target.
    #[arg(long, default_value_t = 1.0)]
    pub delta_s: f64,
    /// Amplitude A of the power target A·t^α.
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub x2: Option<f64>,
    /// First grid point after 0.
    #[arg(long, default_value_t = 1e-4)]
    pub t_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 40)]
    pub per_decade: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ArbitrageCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// RNG seed; IMPACTLAB_SEED overrides it.
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub intervals: usize,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Accepted negative work, relative to (gross volume)²·K(0).
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    Isochronic,
    Isochoric,
    Isotachic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Discrete,
    Continuous,
    Both,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value = "isochronic")]
    pub regime: RegimeArg,
    /// Held quantity: T (isochronic, default 0.5), Q (isochoric, default
    /// 12e-4) or q (isotachic, default 1e-3).
    #[arg(long)]
    pub fixed: Option<f64>,
    /// Trade counts (isochronic, default 1:1024:x2) or horizons (default
    /// 8:1.220703125e-4:x0.5 isochoric, 1:64:x2 isotachic).
    #[arg(long)]
    pub steps: Option<String>,
    /// Child order size (fraction of ADV).
    #[arg(long, default_value_t = 1e-4)]
    pub child: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    /// Flag rows trading faster than this rate.
    #[arg(long)]
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LawCheckCmd {
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1e4)]
    pub kappa: f64,
    #[arg(long)]
    pub x2: Option<f64>,
    /// Daily volatility.
    #[arg(long, default_value_t = 0.02)]
    pub sigma: f64,
    /// Horizon of the isochronic family.
    #[arg(long, default_value_t = 2.0)]
    pub horizon: f64,
    /// Rates of the isochronic family.
    #[arg(long, default_value = "1e-3,4e-3,1.6e-2")]
    pub rates: String,
    /// Volume of the isochoric family.
    #[arg(long, default_value_t = 1e-2)]
    pub volume: f64,
    /// Rate of the isotachic family.
    #[arg(long, default_value_t = 2e-3)]
    pub rate: f64,
    /// Horizons of the isochoric and isotachic families.
    #[arg(long, default_value = "1,4,16")]
    pub horizons: String,
    /// Smallest κT/c² counted as asymptotic.
    #[arg(long, default_value_t = 1e3)]
    pub threshold: f64,
    /// Largest accepted max/min ratio of C.
    #[arg(long, default_value_t = 1.05)]
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    Market,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BinaryTreeCmd {
    #[arg(long, value_enum, default_value = "market")]
    pub policy: PolicyArg,
    /// Probability of an up-tick.
    #[arg(long, default_value_t = 0.5)]
    pub p_up: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RerunCmd {
    /// manifest.json written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
}
