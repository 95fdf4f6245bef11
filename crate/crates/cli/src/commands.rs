use std::path::Path;

use impactlab_core::impact::{
    arbitrage_sweep, constant_rate_cost, continuous_cost, discrete_cost, geometric_grid,
    impact_path, rate_for_price_target, PriceTarget,
};
use impactlab_core::regimes::{
    binary_tree_shortfall, fit_log_log_slope, regime_law_check, sweep, LawConfig, Mode, Regime,
    SweepColumn, SweepConfig, TreePolicy,
};
use impactlab_core::{
    InversionConfig, InversionMethod, Inverter, KernelSpecF64, OuterBoundary, TrajectoryProblemF64,
};
use num_complex::Complex64;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::plot::{Plot, Series};
use crate::steps::parse_steps;
use crate::table::{num, opt, profile_table, read_profile, read_trades, Table};

/// Everything a command produces; written out by the caller.
#[derive(Debug, Default)]
pub struct Output {
    /// `(file name, table)`; the first one also goes to stdout.
    pub tables: Vec<(String, Table)>,
    pub plot: Option<Plot>,
    /// Human-readable notes for stderr.
    pub notes: Vec<String>,
    /// Set when a check the command performs failed.
    pub failure: Option<String>,
}

impl Output {
    fn single(name: &str, table: Table) -> Self {
        Self {
            tables: vec![(name.to_string(), table)],
            ..Self::default()
        }
    }
}

fn outer(x2: Option<f64>) -> OuterBoundary<f64> {
    x2.map_or(OuterBoundary::Unbounded, OuterBoundary::Finite)
}

impl KernelArgs {
    pub fn build(&self) -> CliResult<KernelSpecF64> {
        Ok(match self.family {
            Family::Delta => KernelSpecF64::delta(self.eta)?,
            Family::Exponential => KernelSpecF64::exponential(self.eta, self.beta)?,
            Family::Diffusion => KernelSpecF64::diffusion(self.c, self.kappa, outer(self.x2))?,
            Family::Power => KernelSpecF64::power(self.c0, self.c1, self.t0, self.exponent)?,
        })
    }
}

pub fn execute(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Kernel(c) => kernel(c),
        Command::Invlap(c) => invlap(c),
        Command::Trajectory(c) => trajectory(c),
        Command::Impact(c) => impact(c),
        Command::Cost(c) => cost(c),
        Command::RateForPrice(c) => rate_for_price(c),
        Command::ArbitrageCheck(c) => arbitrage(c),
        Command::Sweep(c) => sweep_cmd(c),
        Command::LawCheck(c) => law_check(c),
        Command::BinaryTree(c) => binary_tree(c),
        Command::Rerun(_) => unreachable!("rerun is resolved before dispatch"),
    }
}

fn kernel(c: &KernelCmd) -> CliResult<Output> {
    let k = c.kernel.build()?;
    let times = parse_steps(&c.t)?;
    let pointwise = !k.is_delta();
    let mut t = if pointwise {
        Table::new(&["t", "kernel", "step_response", "double_integral"])
    } else {
        Table::new(&["t", "step_response", "double_integral"])
    };
    let mut series = Vec::new();
    for &ti in &times {
        let mut row = vec![num(ti)];
        if pointwise {
            let v = k.eval(ti)?;
            series.push((ti, v));
            row.push(num(v));
        }
        row.push(num(k.step_response(ti)?));
        row.push(num(k.double_integral(ti)?));
        t.push(row);
    }
    let mut out = Output::single("kernel.csv", t);
    if pointwise {
        out.plot = Some(Plot {
            title: format!("{} kernel", k.family()),
            x_label: "t (days)".into(),
            y_label: "K(t)".into(),
            log_x: false,
            log_y: false,
            series: vec![Series {
                name: "K".into(),
                points: series,
            }],
        });
    }
    Ok(out)
}

type Pair = (&'static str, fn(Complex64) -> Complex64, fn(f64) -> f64);

const PAIR_RATE: f64 = 1e-3;

/// Transform pairs with closed-form inverses.
pub fn transform_pairs() -> [Pair; 5] {
    use std::f64::consts::PI;
    [
        ("1/s^2", |s| (s * s).inv(), |t| t),
        (
            "1/(s+a)",
            |s| (s + PAIR_RATE).inv(),
            |t| (-PAIR_RATE * t).exp(),
        ),
        (
            "1/(s+a)^2",
            |s| ((s + PAIR_RATE) * (s + PAIR_RATE)).inv(),
            |t| t * (-PAIR_RATE * t).exp(),
        ),
        ("1/sqrt(s)", |s| s.sqrt().inv(), |t| 1.0 / (PI * t).sqrt()),
        (
            "s^-3/2",
            |s| (s * s.sqrt()).inv(),
            |t| 2.0 * (t / PI).sqrt(),
        ),
    ]
}

fn invlap(c: &InvlapCmd) -> CliResult<Output> {
    let mut cfg = match c.method {
        MethodArg::Talbot => InversionConfig::talbot(),
        MethodArg::Stehfest => InversionConfig::gaver_stehfest(),
    };
    if let Some(order) = c.order {
        cfg.order = order;
    }
    let primary = Inverter::new(cfg)?;
    let other = match cfg.method {
        InversionMethod::Talbot => Inverter::gaver_stehfest(),
        InversionMethod::GaverStehfest => Inverter::talbot(),
    };
    let times = parse_steps(&c.t)?;
    let mut t = Table::new(&["pair", "t", "exact", "inverted", "rel_error", "cross_check"]);
    let mut worst = 0.0f64;
    for (name, f, exact) in transform_pairs() {
        for &ti in &times {
            let want = exact(ti);
            let got = primary.invert(f, ti)?;
            let cross = other.invert(f, ti)?;
            let err = (got - want).abs() / want.abs();
            worst = worst.max(err);
            t.push(vec![
                name.into(),
                num(ti),
                num(want),
                num(got),
                num(err),
                num((got - cross).abs() / want.abs()),
            ]);
        }
    }
    let mut out = Output::single("invlap.csv", t);
    out.notes.push(format!("largest relative error {worst:e}"));
    if worst > c.tolerance {
        out.failure = Some(format!(
            "inversion error {worst:e} exceeds tolerance {:e}",
            c.tolerance
        ));
    }
    Ok(out)
}

fn trajectory(c: &TrajectoryCmd) -> CliResult<Output> {
    let problem = match (c.kernel, c.lambda) {
        (TrajectoryKernel::Delta, Some(l)) => {
            TrajectoryProblemF64::from_risk_aversion(c.x0, c.xt, c.horizon, l)?
        }
        (TrajectoryKernel::Exponential, Some(l)) => {
            TrajectoryProblemF64::exponential_from_risk_aversion(c.x0, c.xt, c.horizon, l, c.beta)?
        }
        (kind, None) => {
            let p = TrajectoryProblemF64::new(c.x0, c.xt, c.horizon, c.urgency.unwrap_or(1.0))?;
            if kind == TrajectoryKernel::Exponential {
                p.with_beta(c.beta)?
            } else {
                p
            }
        }
    };
    let traj = match c.kernel {
        TrajectoryKernel::Delta => problem.ac_trajectory(c.points)?,
        TrajectoryKernel::Exponential => problem.exp_kernel_trajectory(c.points)?,
    };
    let mut t = Table::new(&["t", "position"]);
    for (ti, x) in traj.times.iter().zip(&traj.positions) {
        t.push(vec![num(*ti), num(*x)]);
    }
    let mut jumps = Table::new(&["jump_initial", "jump_terminal", "urgency"]);
    jumps.push(vec![
        num(traj.jump_initial),
        num(traj.jump_terminal),
        num(problem.urgency),
    ]);
    let points = traj
        .times
        .iter()
        .copied()
        .zip(traj.positions.iter().copied())
        .collect();
    Ok(Output {
        tables: vec![("trajectory.csv".into(), t), ("jumps.csv".into(), jumps)],
        plot: Some(Plot {
            title: "optimal trajectory".into(),
            x_label: "t (days)".into(),
            y_label: "position x(t)".into(),
            log_x: false,
            log_y: false,
            series: vec![Series {
                name: "x".into(),
                points,
            }],
        }),
        ..Output::default()
    })
}

fn impact(c: &ImpactCmd) -> CliResult<Output> {
    let k = c.kernel.build()?;
    let p = read_profile(&c.profile)?;
    let times = parse_steps(&c.t)?;
    let path = impact_path(&p, &k, &times)?;
    let mut t = Table::new(&["t", "impact"]);
    for (ti, h) in path.times.iter().zip(&path.values) {
        t.push(vec![num(*ti), num(*h)]);
    }
    let points = path
        .times
        .iter()
        .copied()
        .zip(path.values.iter().copied())
        .collect();
    let mut out = Output::single("impact.csv", t);
    out.plot = Some(Plot {
        title: format!("temporary impact, {} kernel", k.family()),
        x_label: "t (days)".into(),
        y_label: "h(t)".into(),
        log_x: false,
        log_y: false,
        series: vec![Series {
            name: "h".into(),
            points,
        }],
    });
    Ok(out)
}

fn cost(c: &CostCmd) -> CliResult<Output> {
    let k = c.kernel.build()?;
    let (kind, value) = match (&c.profile, &c.trades, c.rate) {
        (Some(p), None, None) => ("continuous", continuous_cost(&read_profile(p)?, &k)?),
        (None, Some(t), None) => ("discrete", discrete_cost(&read_trades(t)?, &k)?),
        (None, None, Some(q)) => {
            let horizon = c
                .horizon
                .ok_or_else(|| CliError::Usage("--rate needs --horizon".into()))?;
            ("constant_rate", constant_rate_cost(q, horizon, &k)?)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --profile, --trades or --rate".into(),
            ))
        }
    };
    let mut t = Table::new(&["kind", "cost"]);
    t.push(vec![kind.into(), num(value)]);
    Ok(Output::single("cost.csv", t))
}

fn rate_for_price(c: &RateForPriceCmd) -> CliResult<Output> {
    let k = KernelSpecF64::diffusion(c.c, c.kappa, outer(c.x2))?;
    let target = match c.target {
        TargetArg::Constant => PriceTarget::Constant { delta_s: c.delta_s },
        TargetArg::Power => PriceTarget::Power {
            amplitude: c.amplitude,
            alpha: c.alpha,
        },
    };
    let grid = geometric_grid(c.t_min, c.t_max, c.per_decade)?;
    let p = rate_for_price_target(target, &k, &grid)?;
    Ok(Output::single("profile.csv", profile_table(&p)))
}

/// `IMPACTLAB_SEED`, when set, replaces the seed given on the command line.
pub fn seed_override() -> CliResult<Option<u64>> {
    match std::env::var("IMPACTLAB_SEED") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            CliError::Usage(format!(
                "IMPACTLAB_SEED must be an unsigned integer, got '{s}'"
            ))
        }),
        Err(_) => Ok(None),
    }
}

fn arbitrage(c: &ArbitrageCmd) -> CliResult<Output> {
    let k = c.kernel.build()?;
    let samples = arbitrage_sweep(&k, c.count, c.seed, c.intervals, c.horizon)?;
    let mut t = Table::new(&["index", "work", "scale", "pass"]);
    let mut failures = 0;
    let mut min_ratio = f64::INFINITY;
    for s in &samples {
        let pass = s.passes(c.tolerance);
        failures += usize::from(!pass);
        if s.scale > 0.0 {
            min_ratio = min_ratio.min(s.work / s.scale);
        }
        t.push(vec![
            s.index.to_string(),
            num(s.work),
            num(s.scale),
            pass.to_string(),
        ]);
    }
    let mut out = Output::single("arbitrage.csv", t);
    out.notes.push(format!(
        "seed {}: {} profiles, {failures} below tolerance, smallest work/scale {min_ratio:e}",
        c.seed, c.count
    ));
    if failures > 0 {
        out.failure = Some(format!("{failures} round trips produced negative work"));
    }
    Ok(out)
}

impl SweepCmd {
    pub fn config(&self) -> CliResult<SweepConfig<f64>> {
        let regime = match self.regime {
            RegimeArg::Isochronic => Regime::Isochronic,
            RegimeArg::Isochoric => Regime::Isochoric,
            RegimeArg::Isotachic => Regime::Isotachic,
        };
        let (fixed, steps) = match regime {
            Regime::Isochronic => (0.5, "1:1024:x2"),
            Regime::Isochoric => (12e-4, "8:1.220703125e-4:x0.5"),
            Regime::Isotachic => (1e-3, "1:64:x2"),
        };
        let steps = parse_steps(self.steps.as_deref().unwrap_or(steps))?;
        let mode = match self.mode {
            ModeArg::Discrete => Mode::Discrete,
            ModeArg::Continuous => Mode::Continuous,
            ModeArg::Both => Mode::Both,
        };
        let mut cfg = SweepConfig::new(
            regime,
            self.kernel.build()?,
            self.fixed.unwrap_or(fixed),
            steps,
        )
        .with_child_size(self.child)
        .with_mode(mode);
        if let Some(cap) = self.cap {
            cfg = cfg.with_participation_cap(cap);
        }
        Ok(cfg)
    }
}

fn sweep_cmd(c: &SweepCmd) -> CliResult<Output> {
    let cfg = c.config()?;
    let result = sweep(&cfg)?;
    let mut t = Table::new(&[
        "rate",
        "volume",
        "horizon",
        "trades",
        "cost_discrete",
        "cost_continuous",
        "flagged",
    ]);
    let mut discrete = Vec::new();
    let mut continuous = Vec::new();
    for r in &result.rows {
        t.push(vec![
            num(r.rate),
            num(r.volume),
            num(r.horizon),
            r.trades.to_string(),
            opt(r.cost_discrete),
            opt(r.cost_continuous),
            r.flagged.to_string(),
        ]);
        if let Some(d) = r.cost_discrete {
            discrete.push((r.rate, d));
        }
        if let Some(v) = r.cost_continuous {
            continuous.push((r.rate, v));
        }
    }
    let mut out = Output::single("sweep.csv", t);
    let x = if cfg.regime == Regime::Isotachic {
        SweepColumn::Horizon
    } else {
        SweepColumn::Rate
    };
    for col in [SweepColumn::CostDiscrete, SweepColumn::CostContinuous] {
        if let Ok(fit) = fit_log_log_slope(&result.rows, x, col, None) {
            out.notes.push(format!(
                "log-log slope of {} vs {}: {:.4}",
                col.name(),
                x.name(),
                fit.slope
            ));
        }
    }
    let mut series = Vec::new();
    if !discrete.is_empty() {
        series.push(Series {
            name: "discrete".into(),
            points: discrete,
        });
    }
    if !continuous.is_empty() {
        series.push(Series {
            name: "continuous".into(),
            points: continuous,
        });
    }
    out.plot = Some(Plot {
        title: format!("{} sweep", cfg.regime.name()),
        x_label: "trading rate q (ADV/day)".into(),
        y_label: "cost per share".into(),
        log_x: true,
        log_y: true,
        series,
    });
    Ok(out)
}

impl LawCheckCmd {
    pub fn configs(&self) -> CliResult<Vec<LawConfig<f64>>> {
        let mut v = Vec::new();
        for q in parse_steps(&self.rates)? {
            v.push(LawConfig {
                label: "isochronic",
                rate: q,
                horizon: self.horizon,
            });
        }
        let horizons = parse_steps(&self.horizons)?;
        for &t in &horizons {
            v.push(LawConfig {
                label: "isochoric",
                rate: self.volume / t,
                horizon: t,
            });
        }
        for &t in &horizons {
            v.push(LawConfig {
                label: "isotachic",
                rate: self.rate,
                horizon: t,
            });
        }
        Ok(v)
    }
}

fn law_check(c: &LawCheckCmd) -> CliResult<Output> {
    let k = KernelSpecF64::diffusion(c.c, c.kappa, outer(c.x2))?;
    let check = regime_law_check(&k, c.sigma, &c.configs()?, c.threshold)?;
    let mut t = Table::new(&[
        "family",
        "rate",
        "horizon",
        "dimensionless_horizon",
        "cost",
        "constant",
        "flagged",
    ]);
    for r in &check.rows {
        t.push(vec![
            r.label.into(),
            num(r.rate),
            num(r.horizon),
            num(r.dimensionless_horizon),
            num(r.cost),
            num(r.constant),
            r.flagged.to_string(),
        ]);
    }
    let mut out = Output::single("law.csv", t);
    out.notes.push(format!(
        "max/min of C over asymptotic rows: {:.6}",
        check.ratio
    ));
    if check.ratio > c.max_ratio {
        out.failure = Some(format!(
            "C varies by a factor {} > {}",
            check.ratio, c.max_ratio
        ));
    }
    Ok(out)
}

fn binary_tree(c: &BinaryTreeCmd) -> CliResult<Output> {
    let (policy, name) = match c.policy {
        PolicyArg::Market => (TreePolicy::Market, "market"),
        PolicyArg::Limit => (TreePolicy::Limit, "limit"),
    };
    let v = binary_tree_shortfall(policy, c.p_up)?;
    let mut t = Table::new(&["policy", "p_up", "shortfall"]);
    t.push(vec![name.into(), num(c.p_up), num(v)]);
    Ok(Output::single("binary_tree.csv", t))
}

/// Absolute form of an input path, so a manifest stays valid from any
/// working directory.
pub fn absolute(path: &Path) -> CliResult<std::path::PathBuf> {
    std::fs::canonicalize(path).map_err(|e| CliError::io(path, e))
}
