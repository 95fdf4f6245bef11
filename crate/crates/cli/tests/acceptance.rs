//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is printed even when everything passes.

use std::path::Path;
use std::process::Command;

use impactlab::commands::transform_pairs;
use impactlab_core::impact::{
    arbitrage_sweep, geometric_grid, impact_path, rate_for_price_target, required_rate,
    PriceTarget, RANDOM_INTERVALS,
};
use impactlab_core::regimes::{
    binary_tree_shortfall, doubling_steps, fit_log_log_slope, halving_steps, isochoric_sweep,
    isochronic_sweep, isotachic_sweep, regime_law_check, LawConfig, Mode, Regime, SweepColumn,
    SweepConfig, TreePolicy, ASYMPTOTIC_THRESHOLD,
};
use impactlab_core::{
    erfcx, euler_residual, Inverter, KernelSpecF64, OuterBoundary, TrajectoryProblemF64,
};
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// erfcx reference values, mpmath at 40 digits
const ERFCX_REFERENCE: [(f64, f64); 5] = [
    (0.0, 1.0),
    (0.5, 0.615_690_344_192_925_9),
    (1.0, 0.427_583_576_155_807),
    (3.0, 0.179_001_151_181_389_96),
    (30.0, 0.018_795_888_861_416_75),
];

fn laplace_inversion_accuracy() -> Outcome {
    let oracle = ERFCX_REFERENCE
        .iter()
        .map(|&(x, v)| (erfcx(x).unwrap() - v).abs())
        .fold(0.0, f64::max);
    let talbot = Inverter::<f64>::talbot();
    let mut worst = 0.0f64;
    for (c, kappa) in [(1.0, 1.0), (2.0, 0.5)] {
        let transform = move |s: Complex64| (s * c + (s * kappa).sqrt()).inv();
        for th in log_points(1e-3, 1e3, 50) {
            let want = erfcx(th.sqrt()).unwrap() / c;
            let got = talbot
                .invert(transform, th * c * c / kappa)
                .map_err(|e| e.to_string())?;
            worst = worst.max(rel(got, want));
        }
    }
    check(
        worst <= 1e-6 && oracle <= 1e-12,
        format!(
            "max rel error {worst:.2e} (≤ 1e-6), erfcx oracle abs error {oracle:.1e} (≤ 1e-12)"
        ),
    )
}

fn transform_pair_suite() -> Outcome {
    let talbot = Inverter::<f64>::talbot();
    let stehfest = Inverter::<f64>::gaver_stehfest();
    let (mut err, mut cross) = (0.0f64, 0.0f64);
    for (_, f, exact) in transform_pairs() {
        for t in log_points(1e-3, 1e3, 25) {
            let want = exact(t);
            let a = talbot.invert(f, t).map_err(|e| e.to_string())?;
            let b = stehfest.invert(f, t).map_err(|e| e.to_string())?;
            err = err.max(rel(a, want));
            cross = cross.max(rel(a, b));
        }
    }
    check(
        err <= 1e-6 && cross <= 1e-4,
        format!(
            "5 pairs: max rel error {err:.2e} (≤ 1e-6), Talbot vs Stehfest {cross:.2e} (≤ 1e-4)"
        ),
    )
}

fn trajectory_limit_chain() -> Outcome {
    let mut sup = 0.0f64;
    for (x0, xt, horizon, k) in [
        (1.0, 0.0, 1.0, 2.0),
        (3.0, 0.5, 2.0, 0.1),
        (-1.0, 1.0, 0.5, 8.0),
    ] {
        let kt: f64 = k * horizon;
        let beta = 1e6 * kt.max(1.0) / horizon;
        let p = TrajectoryProblemF64::new(x0, xt, horizon, k)
            .and_then(|p| p.with_beta(beta))
            .map_err(|e| e.to_string())?;
        let d = p
            .exp_kernel_trajectory(501)
            .unwrap()
            .sup_distance(&p.ac_trajectory(501).unwrap());
        sup = sup.max(d / (x0 - xt).abs());
    }
    let mut jump = 0.0f64;
    for (beta, horizon) in [(1.0, 1.0), (4.0, 3.0), (0.2, 10.0)] {
        let p = TrajectoryProblemF64::exponential_from_risk_aversion(
            2.0,
            0.5,
            horizon,
            1e-10 * beta * beta,
            beta,
        )
        .map_err(|e| e.to_string())?;
        let want = 1.5 / (beta * horizon + 2.0);
        let traj = p.exp_kernel_trajectory(11).unwrap();
        jump = jump
            .max(rel(traj.jump_initial, want))
            .max(rel(traj.jump_terminal, want));
    }
    check(
        sup <= 1e-3 && jump <= 1e-4,
        format!(
            "sup|x_exp − x_AC|/|X0−XT| = {sup:.2e} (≤ 1e-3), jump rel error {jump:.2e} (≤ 1e-4)"
        ),
    )
}

fn euler_residual_convergence() -> Outcome {
    let (eta, lambda) = (0.3f64, 2.0);
    let kernel = KernelSpecF64::delta(eta).unwrap();
    let p = TrajectoryProblemF64::new(1.0, 0.0, 1.0, (lambda / eta).sqrt()).unwrap();
    let coarse = euler_residual(&p.ac_trajectory(128).unwrap(), &kernel, lambda)
        .map_err(|e| e.to_string())?;
    let fine = euler_residual(&p.ac_trajectory(256).unwrap(), &kernel, lambda)
        .map_err(|e| e.to_string())?;
    let ratio = coarse / fine;
    check(
        ratio >= 3.0,
        format!("residual {coarse:.2e} → {fine:.2e}, ratio {ratio:.2} (≥ 3)"),
    )
}

fn no_dynamic_arbitrage() -> Outcome {
    let kernels = [
        KernelSpecF64::diffusion_unbounded(1.0, 1.0).unwrap(),
        KernelSpecF64::exponential(1.0, 3.0).unwrap(),
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    for k in &kernels {
        let samples = arbitrage_sweep(k, 1000, 20_240_601, RANDOM_INTERVALS, 1.0)
            .map_err(|e| e.to_string())?;
        let fails = samples.iter().filter(|s| !s.passes(1e-9)).count();
        let min = samples
            .iter()
            .map(|s| s.work / s.scale)
            .fold(f64::INFINITY, f64::min);
        ok &= fails == 0;
        detail.push(format!(
            "{}: {fails}/1000 below −1e-9·scale, min work/scale {min:.2e}",
            k.family()
        ));
    }
    check(ok, detail.join("; "))
}

fn regime_slopes() -> Outcome {
    // κ/c² = 1e4 puts every horizon of the sweeps at t̃ ≫ 1
    let k = KernelSpecF64::diffusion_unbounded(1.0, 1e4).unwrap();
    let chron = SweepConfig::new(Regime::Isochronic, k, 0.5, doubling_steps(1024))
        .with_mode(Mode::Continuous);
    let rows = isochronic_sweep(&chron).map_err(|e| e.to_string())?.rows;
    let s1 = fit_log_log_slope(&rows, SweepColumn::Rate, SweepColumn::CostContinuous, None)
        .unwrap()
        .slope;

    let chor = SweepConfig::new(Regime::Isochoric, k, 12e-4, halving_steps(8.0, 16))
        .with_mode(Mode::Continuous);
    let rows: Vec<_> = isochoric_sweep(&chor)
        .map_err(|e| e.to_string())?
        .rows
        .into_iter()
        .filter(|r| k.dimensionless_time(r.horizon).unwrap() >= ASYMPTOTIC_THRESHOLD)
        .collect();
    let s2 = fit_log_log_slope(&rows, SweepColumn::Rate, SweepColumn::CostContinuous, None)
        .unwrap()
        .slope;

    let tach = SweepConfig::new(
        Regime::Isotachic,
        k,
        1e-3,
        vec![16.0, 24.0, 32.0, 48.0, 64.0],
    )
    .with_mode(Mode::Continuous);
    let rows = isotachic_sweep(&tach).map_err(|e| e.to_string())?.rows;
    let scaled: Vec<f64> = rows
        .iter()
        .map(|r| r.cost_continuous.unwrap() / r.horizon.sqrt())
        .collect();
    let spread = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        / scaled.iter().copied().fold(f64::INFINITY, f64::min)
        - 1.0;
    check(
        (s1 - 1.0).abs() <= 0.02 && (s2 - 0.5).abs() <= 0.05 && spread <= 0.02,
        format!("isochronic {s1:.4} (1±0.02), isochoric {s2:.4} (0.5±0.05), isotachic cost/√T spread {:.3}% (≤ 2%) [κ/c² = 1e4]", spread * 100.0),
    )
}

fn discrete_to_continuous() -> Outcome {
    let k = KernelSpecF64::diffusion_unbounded(1.0, 1.0).unwrap();
    let cfg = SweepConfig::new(Regime::Isochronic, k, 0.5, doubling_steps(1024));
    let rows = isochronic_sweep(&cfg).map_err(|e| e.to_string())?.rows;
    let d: Vec<f64> = rows.iter().map(|r| r.cost_discrete.unwrap()).collect();
    let last = rows.last().unwrap();
    let gap = rel(last.cost_discrete.unwrap(), last.cost_continuous.unwrap());
    let floor = 0.5 * 1e-4 * k.eval(0.0).unwrap();
    let monotone = d.windows(2).all(|w| w[1] >= w[0]);
    let bounded = d.iter().all(|&c| c >= floor * (1.0 - 1e-12));
    let ratio = d[4] / d[0];
    check(
        gap <= 0.02 && monotone && bounded,
        format!("N=1024 gap {:.4}% (≤ 2%), monotone {monotone}, ≥ ½·child·K(0) {bounded}; N=16/N=1 ratio {ratio:.3} (calibration dependent, reported only)", gap * 100.0),
    )
}

fn rate_for_price_round_trip() -> Outcome {
    let k = KernelSpecF64::diffusion_unbounded(1.0, 1.0).unwrap();
    let grid = geometric_grid(1e-4, 150.0, 40).map_err(|e| e.to_string())?;
    let p = rate_for_price_target(PriceTarget::Constant { delta_s: 1.0 }, &k, &grid)
        .map_err(|e| e.to_string())?;
    let h = impact_path(&p, &k, &log_points(1.0, 100.0, 61)).map_err(|e| e.to_string())?;
    let dev = h.values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);

    let kappa = 2.0f64;
    let k0 = KernelSpecF64::Diffusion {
        c: 0.0,
        kappa,
        x2: OuterBoundary::Unbounded,
    };
    let target = PriceTarget::Power {
        amplitude: 1.0,
        alpha: 0.5,
    };
    let analytic = kappa.sqrt() * std::f64::consts::PI.sqrt() / 2.0;
    let mut power = 0.0f64;
    for t in [0.01, 1.0, 100.0] {
        power = power.max(rel(
            required_rate(target, &k0, t).map_err(|e| e.to_string())?,
            analytic,
        ));
    }
    let prof =
        rate_for_price_target(target, &k0, &[0.0, 0.5, 2.0, 9.0]).map_err(|e| e.to_string())?;
    for q in prof.rates() {
        power = power.max(rel(*q, analytic));
    }
    check(
        dev <= 1e-2 && power <= 1e-12,
        format!("constant target: max |h−1| {dev:.2e} on t̃∈[1,100] (≤ 1e-2); α=½ rate rel error {power:.1e}"),
    )
}

fn binary_tree() -> Outcome {
    let m = binary_tree_shortfall(TreePolicy::Market, 0.5).map_err(|e| e.to_string())?;
    let l = binary_tree_shortfall(TreePolicy::Limit, 0.5).map_err(|e| e.to_string())?;
    let q = binary_tree_shortfall(TreePolicy::Limit, 0.25_f64).map_err(|e| e.to_string())?;
    check(
        m == -0.5 && l == -0.5 && (q - 1.0 / 6.0).abs() <= 1e-15,
        format!("market(0.5) = {m}, limit(0.5) = {l}, limit(0.25) = {q}"),
    )
}

fn regime_law_constant() -> Outcome {
    let k = KernelSpecF64::diffusion_unbounded(1.0, 1e4).unwrap();
    let mut configs = Vec::new();
    for q in [1e-3, 4e-3, 1.6e-2] {
        configs.push(LawConfig {
            label: "isochronic",
            rate: q,
            horizon: 2.0,
        });
    }
    for t in [1.0, 4.0, 16.0] {
        configs.push(LawConfig {
            label: "isochoric",
            rate: 1e-2 / t,
            horizon: t,
        });
        configs.push(LawConfig {
            label: "isotachic",
            rate: 2e-3,
            horizon: t,
        });
    }
    let ratio = regime_law_check(&k, 0.02, &configs, ASYMPTOTIC_THRESHOLD)
        .map_err(|e| e.to_string())?
        .ratio;

    let base = [LawConfig {
        label: "base",
        rate: 1e-3,
        horizon: 1e6,
    }];
    let c: Vec<f64> = [0.25, 1.0, 4.0]
        .iter()
        .map(|&kappa| {
            let k = KernelSpecF64::diffusion_unbounded(1.0, kappa).unwrap();
            regime_law_check(&k, 0.02, &base, ASYMPTOTIC_THRESHOLD)
                .unwrap()
                .rows[0]
                .constant
                * kappa.sqrt()
        })
        .collect();
    let scaling = c.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        / c.iter().copied().fold(f64::INFINITY, f64::min)
        - 1.0;
    check(
        ratio <= 1.05 && scaling <= 0.05,
        format!("C max/min {ratio:.4} (≤ 1.05) across families [κ/c² = 1e4]; C·√κ spread {:.3}% over κ ∈ {{0.25,1,4}}", scaling * 100.0),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_impactlab"))
        .current_dir(dir)
        .env_remove("IMPACTLAB_SEED")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let runs: [&[&str]; 8] = [
        &["kernel", "--family", "power", "--t", "0:5:+0.5"],
        &[
            "trajectory",
            "--kernel",
            "exponential",
            "--urgency",
            "1.5",
            "--xt",
            "0.2",
        ],
        &[
            "rate-for-price",
            "--target",
            "power",
            "--alpha",
            "0.3",
            "--x2",
            "4",
        ],
        &[
            "arbitrage-check",
            "--count",
            "200",
            "--family",
            "exponential",
        ],
        &["sweep", "--regime", "isochronic", "--plot"],
        &["sweep", "--regime", "isochoric", "--kappa", "1e4"],
        &["law-check"],
        &["binary-tree", "--policy", "limit", "--p-up", "0.25"],
    ];
    let mut files = 0;
    for (i, args) in runs.iter().enumerate() {
        let first = format!("run{i}");
        let second = format!("rerun{i}");
        let mut a = args.to_vec();
        a.extend(["--out", &first]);
        run_cli(d, &a)?;
        let manifest = format!("{first}/manifest.json");
        run_cli(d, &["rerun", "--manifest", &manifest, "--out", &second])?;
        for entry in std::fs::read_dir(d.join(&first)).map_err(|e| e.to_string())? {
            let name = entry.map_err(|e| e.to_string())?.file_name();
            if !name.to_string_lossy().ends_with(".csv") {
                continue;
            }
            let x = std::fs::read(d.join(&first).join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(d.join(&second).join(&name)).map_err(|e| e.to_string())?;
            if x != y {
                return Err(format!(
                    "{args:?}: {} differs after rerun",
                    name.to_string_lossy()
                ));
            }
            files += 1;
        }
    }
    check(
        true,
        format!(
            "{} manifests re-run, {files} CSV files byte-identical",
            runs.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Laplace inversion accuracy", laplace_inversion_accuracy),
        ("Transform-pair suite", transform_pair_suite),
        ("Trajectory limit chain", trajectory_limit_chain),
        ("Euler residual convergence", euler_residual_convergence),
        ("No-dynamic-arbitrage", no_dynamic_arbitrage),
        ("Regime slopes", regime_slopes),
        ("Discrete-to-continuous convergence", discrete_to_continuous),
        ("Rate-for-price round trip", rate_for_price_round_trip),
        ("Binary tree", binary_tree),
        ("Regime-law constant", regime_law_constant),
        ("Determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2}. {name}: {d} ({secs:.2}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {d} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
