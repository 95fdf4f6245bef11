//! Isochronic, isochoric and isotachic cost sweeps, log-log slope fits, the
//! three-regime law and the binary-tree shortfall model.

use rayon::prelude::*;

use crate::error::{ImpactError, Result};
use crate::impact::constant_rate_cost;
use crate::kernels::KernelSpec;
use crate::scalar::{from_usize, lit, Real};

/// Quantity held fixed by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Fixed horizon `T`; steps are trade counts.
    Isochronic,
    /// Fixed volume `Q`; steps are horizons.
    Isochoric,
    /// Fixed rate `q`; steps are horizons.
    Isotachic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::Isochronic => "isochronic",
            Self::Isochoric => "isochoric",
            Self::Isotachic => "isotachic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Discrete,
    Continuous,
    Both,
}

impl Mode {
    fn discrete(self) -> bool {
        matches!(self, Self::Discrete | Self::Both)
    }

    fn continuous(self) -> bool {
        matches!(self, Self::Continuous | Self::Both)
    }
}

/// Largest number of child orders a discrete row may use.
pub const MAX_CHILD_ORDERS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig<T> {
    pub regime: Regime,
    pub kernel: KernelSpec<T>,
    /// `T`, `Q` or `q` depending on the regime.
    pub fixed: T,
    pub steps: Vec<T>,
    /// Volume of one child order (fraction of ADV).
    pub child_size: T,
    pub mode: Mode,
    /// Rows trading faster than this are flagged.
    pub participation_cap: Option<T>,
}

impl<T: Real> SweepConfig<T> {
    pub fn new(regime: Regime, kernel: KernelSpec<T>, fixed: T, steps: Vec<T>) -> Self {
        Self {
            regime,
            kernel,
            fixed,
            steps,
            child_size: lit(1e-4),
            mode: Mode::Both,
            participation_cap: None,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_child_size(mut self, child_size: T) -> Self {
        self.child_size = child_size;
        self
    }

    pub fn with_participation_cap(mut self, cap: T) -> Self {
        self.participation_cap = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(ImpactError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("fixed quantity", self.fixed)?;
        positive("child size", self.child_size)?;
        if let Some(cap) = self.participation_cap {
            positive("participation cap", cap)?;
        }
        if self.steps.is_empty() {
            return Err(ImpactError::InvalidParameter(
                "sweep needs at least one step".into(),
            ));
        }
        for &s in &self.steps {
            positive("step", s)?;
        }
        let up = self.steps.windows(2).all(|w| w[1] > w[0]);
        let down = self.steps.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(ImpactError::InvalidParameter(
                "steps must be strictly monotone".into(),
            ));
        }
        if self.regime == Regime::Isochronic && self.steps.iter().any(|s| s.fract() != T::zero()) {
            return Err(ImpactError::InvalidParameter(
                "isochronic steps are whole trade counts".into(),
            ));
        }
        if self.mode.discrete() && self.kernel.is_delta() {
            return Err(ImpactError::Precondition(
                "delta kernel has no discrete cost; use continuous mode".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub rate: T,
    pub volume: T,
    pub horizon: T,
    /// Child orders of the discrete branch.
    pub trades: usize,
    pub cost_discrete: Option<T>,
    pub cost_continuous: Option<T>,
    /// Rate above the participation cap.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub config: SweepConfig<T>,
    pub rows: Vec<SweepRow<T>>,
}

/// Cost per share of `n` equal child orders at the midpoints of a uniform
/// partition of `[0, horizon]`. Uses the Toeplitz structure of the double
/// sum, so only `n` kernel values are needed.
pub fn uniform_discrete_cost<T: Real>(
    kernel: &KernelSpec<T>,
    n: usize,
    child: T,
    horizon: T,
) -> Result<T> {
    kernel.validate()?;
    if kernel.is_delta() {
        return Err(ImpactError::Precondition(
            "delta kernel has no finite K(0); use constant_rate_cost".into(),
        ));
    }
    if n == 0 || n > MAX_CHILD_ORDERS {
        return Err(ImpactError::InvalidParameter(format!(
            "child order count must be in 1..={MAX_CHILD_ORDERS}, got {n}"
        )));
    }
    let nt = from_usize::<T>(n);
    let spacing = horizon / nt;
    let mut sum = nt * kernel.eval_unchecked(T::zero());
    for m in 1..n {
        let lag = from_usize::<T>(m) * spacing;
        sum += lit::<T>(2.0) * from_usize::<T>(n - m) * kernel.eval_unchecked(lag);
    }
    // (1/2Q)·v²·Σ with Q = n·v
    Ok(child * sum / (nt + nt))
}

fn child_count<T: Real>(volume: T, child: T) -> Result<usize> {
    let n = (volume / child).round();
    let n = n
        .to_usize()
        .filter(|&n| (1..=MAX_CHILD_ORDERS).contains(&n))
        .ok_or_else(|| {
            ImpactError::InvalidParameter(format!(
                "volume {volume} needs {n} child orders of {child}; allowed 1..={MAX_CHILD_ORDERS}"
            ))
        })?;
    Ok(n)
}

fn sweep_row<T: Real>(cfg: &SweepConfig<T>, step: T) -> Result<SweepRow<T>> {
    let (horizon, volume) = match cfg.regime {
        Regime::Isochronic => (cfg.fixed, step * cfg.child_size),
        Regime::Isochoric => (step, cfg.fixed),
        Regime::Isotachic => (step, cfg.fixed * step),
    };
    let rate = volume / horizon;
    let trades = match cfg.regime {
        Regime::Isochronic => step.to_usize().unwrap_or(0),
        _ if cfg.mode.discrete() => child_count(volume, cfg.child_size)?,
        _ => 0,
    };
    let cost_discrete = if cfg.mode.discrete() {
        Some(uniform_discrete_cost(
            &cfg.kernel,
            trades,
            cfg.child_size,
            horizon,
        )?)
    } else {
        None
    };
    let cost_continuous = if cfg.mode.continuous() {
        Some(constant_rate_cost(rate, horizon, &cfg.kernel)?)
    } else {
        None
    };
    Ok(SweepRow {
        rate,
        volume,
        horizon,
        trades,
        cost_discrete,
        cost_continuous,
        flagged: cfg.participation_cap.is_some_and(|cap| rate > cap),
    })
}

fn run<T: Real>(cfg: &SweepConfig<T>, expected: Regime) -> Result<SweepResult<T>> {
    if cfg.regime != expected {
        return Err(ImpactError::InvalidParameter(format!(
            "{} sweep given a {} configuration",
            expected.name(),
            cfg.regime.name()
        )));
    }
    cfg.validate()?;
    let rows = cfg
        .steps
        .par_iter()
        .map(|&s| sweep_row(cfg, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        config: cfg.clone(),
        rows,
    })
}

/// Fixed horizon, `N` child orders per step.
pub fn isochronic_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<SweepResult<T>> {
    run(cfg, Regime::Isochronic)
}

/// Fixed volume spread over each horizon.
pub fn isochoric_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<SweepResult<T>> {
    run(cfg, Regime::Isochoric)
}

/// Fixed rate over each horizon.
pub fn isotachic_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<SweepResult<T>> {
    run(cfg, Regime::Isotachic)
}

/// Dispatches on `cfg.regime`.
pub fn sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<SweepResult<T>> {
    run(cfg, cfg.regime)
}

/// `1, 2, 4, …` up to `max` (inclusive when a power of two).
pub fn doubling_steps<T: Real>(max: usize) -> Vec<T> {
    std::iter::successors(Some(1usize), |n| n.checked_mul(2))
        .take_while(|&n| n <= max)
        .map(from_usize)
        .collect()
}

/// `start, start/2, …`, `halvings + 1` values.
pub fn halving_steps<T: Real>(start: T, halvings: usize) -> Vec<T> {
    let half: T = lit(0.5);
    std::iter::successors(Some(start), |&t| Some(t * half))
        .take(halvings + 1)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepColumn {
    Rate,
    Volume,
    Horizon,
    Trades,
    CostDiscrete,
    CostContinuous,
}

impl SweepColumn {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rate => "rate",
            Self::Volume => "volume",
            Self::Horizon => "horizon",
            Self::Trades => "trades",
            Self::CostDiscrete => "cost_discrete",
            Self::CostContinuous => "cost_continuous",
        }
    }

    pub fn value<T: Real>(self, row: &SweepRow<T>) -> Option<T> {
        match self {
            Self::Rate => Some(row.rate),
            Self::Volume => Some(row.volume),
            Self::Horizon => Some(row.horizon),
            Self::Trades => Some(from_usize(row.trades)),
            Self::CostDiscrete => row.cost_discrete,
            Self::CostContinuous => row.cost_continuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Largest absolute residual in `ln y`.
    pub max_residual: T,
    pub points: usize,
}

/// Least-squares slope of `ln y` against `ln x` over the rows whose `x` lies
/// in `range` (inclusive).
pub fn fit_log_log_slope<T: Real>(
    rows: &[SweepRow<T>],
    x: SweepColumn,
    y: SweepColumn,
    range: Option<(T, T)>,
) -> Result<SlopeFit<T>> {
    let mut pts = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let (Some(xv), Some(yv)) = (x.value(row), y.value(row)) else {
            return Err(ImpactError::InvalidParameter(format!(
                "row {i} has no {} or {} value",
                x.name(),
                y.name()
            )));
        };
        if range.is_some_and(|(lo, hi)| xv < lo || xv > hi) {
            continue;
        }
        if !(xv > T::zero() && yv > T::zero()) {
            return Err(ImpactError::Domain(format!(
                "row {i}: log-log fit needs positive values ({} = {xv}, {} = {yv})",
                x.name(),
                y.name()
            )));
        }
        pts.push((xv.ln(), yv.ln()));
    }
    fit_line(&pts)
}

/// Least-squares line through `(x, y)` pairs.
pub fn fit_line<T: Real>(pts: &[(T, T)]) -> Result<SlopeFit<T>> {
    if pts.len() < 3 {
        return Err(ImpactError::InvalidParameter(format!(
            "slope fit needs at least 3 points, got {}",
            pts.len()
        )));
    }
    let n = from_usize::<T>(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == T::zero() {
        return Err(ImpactError::InvalidParameter(
            "slope fit needs distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(T::zero(), T::max);
    Ok(SlopeFit {
        slope,
        intercept,
        max_residual,
        points: pts.len(),
    })
}

/// Smallest dimensionless horizon `κT/c²` treated as asymptotic.
pub const ASYMPTOTIC_THRESHOLD: f64 = 1e3;

/// One execution `(q, T)` entering the regime law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawConfig<T> {
    pub label: &'static str,
    pub rate: T,
    pub horizon: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawRow<T> {
    pub label: &'static str,
    pub rate: T,
    pub horizon: T,
    pub dimensionless_horizon: T,
    pub cost: T,
    /// `ΔW/(σ√T·q)`.
    pub constant: T,
    /// Outside the asymptotic regime; excluded from the ratio.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawCheck<T> {
    pub rows: Vec<LawRow<T>>,
    /// max/min of the constant over unflagged rows.
    pub ratio: T,
}

/// Evaluates `C = ΔW/(σ√T·q)` for each configuration under a diffusion
/// kernel. In the asymptotic regime `ΔW ∝ q√T`, so `C` is the same whether
/// `T`, `Q` or `q` is held fixed.
pub fn regime_law_check<T: Real>(
    kernel: &KernelSpec<T>,
    sigma: T,
    configs: &[LawConfig<T>],
    threshold: T,
) -> Result<LawCheck<T>> {
    kernel.validate()?;
    if !matches!(kernel, KernelSpec::Diffusion { .. }) {
        return Err(ImpactError::Unsupported(format!(
            "regime law is stated for the diffusion kernel, not {}",
            kernel.family()
        )));
    }
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(ImpactError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let rows = configs
        .par_iter()
        .map(|cfg| {
            let cost = constant_rate_cost(cfg.rate, cfg.horizon, kernel)?;
            let th = kernel
                .dimensionless_time(cfg.horizon)
                .unwrap_or(cfg.horizon);
            Ok(LawRow {
                label: cfg.label,
                rate: cfg.rate,
                horizon: cfg.horizon,
                dimensionless_horizon: th,
                cost,
                constant: cost / (sigma * cfg.horizon.sqrt() * cfg.rate),
                flagged: th < threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<T> = rows
        .iter()
        .filter(|r| !r.flagged)
        .map(|r| r.constant)
        .collect();
    if kept.is_empty() {
        return Err(ImpactError::Precondition(
            "no configuration lies in the asymptotic regime".into(),
        ));
    }
    let max = kept.iter().copied().fold(T::neg_infinity(), T::max);
    let min = kept.iter().copied().fold(T::infinity(), T::min);
    Ok(LawCheck {
        rows,
        ratio: max / min,
    })
}

/// Market scales used to express costs in price units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams<T> {
    /// Daily volatility.
    pub sigma: T,
    pub s0: T,
    /// Average daily volume.
    pub adv: T,
    /// Impact coefficient of the linear `f(q) = η̃q`.
    pub eta_tilde: T,
}

impl<T: Real> Default for MarketParams<T> {
    fn default() -> Self {
        Self {
            sigma: T::one(),
            s0: T::one(),
            adv: T::one(),
            eta_tilde: T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreePolicy {
    /// Cross the spread immediately.
    Market,
    /// Rest at the touch, chase the price after each up-tick.
    Limit,
}

/// Expected shortfall in ticks of buying one lot on a binary price tree.
///
/// A market order pays half the spread. A limit order gains half a tick
/// with probability `1 − p_up`; otherwise the price moves up a tick and the
/// order is repriced, giving `ΔW = (1 − p₊)·½ + p₊·(ΔW − 1)`.
pub fn binary_tree_shortfall<T: Real>(policy: TreePolicy, p_up: T) -> Result<T> {
    let half: T = lit(0.5);
    if p_up == T::one() && policy == TreePolicy::Limit {
        return Err(ImpactError::DivergentRecursion(
            p_up.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if !(p_up > T::zero() && p_up < T::one()) {
        return Err(ImpactError::InvalidParameter(format!(
            "up-move probability must lie in (0, 1), got {p_up}"
        )));
    }
    Ok(match policy {
        TreePolicy::Market => -half,
        TreePolicy::Limit => ((T::one() - p_up) * half - p_up) / (T::one() - p_up),
    })
}
