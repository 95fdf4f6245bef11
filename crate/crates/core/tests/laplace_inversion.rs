use impactlab_core::{erfcx, InversionConfig, Inverter, KernelSpec};
use num_complex::Complex64;

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

type Pair = (&'static str, fn(Complex64) -> Complex64, fn(f64) -> f64);

const A: f64 = 1e-3;

fn pairs() -> Vec<Pair> {
    vec![
        ("1/s^2", |s| (s * s).inv(), |t| t),
        ("1/(s+a)", |s| (s + A).inv(), |t| (-A * t).exp()),
        (
            "1/(s+a)^2",
            |s| ((s + A) * (s + A)).inv(),
            |t| t * (-A * t).exp(),
        ),
        (
            "1/sqrt(s)",
            |s| s.sqrt().inv(),
            |t| 1.0 / (std::f64::consts::PI * t).sqrt(),
        ),
        (
            "s^-3/2",
            |s| (s * s.sqrt()).inv(),
            |t| 2.0 * (t / std::f64::consts::PI).sqrt(),
        ),
    ]
}

#[test]
fn known_pairs_invert_with_both_methods() {
    let talbot = Inverter::<f64>::talbot();
    let stehfest = Inverter::<f64>::gaver_stehfest();
    for (name, f, exact) in pairs() {
        for t in log_points(1e-3, 1e3, 25) {
            let want = exact(t);
            let a = talbot.invert(f, t).unwrap();
            let b = stehfest.invert(f, t).unwrap();
            assert!(
                (a - want).abs() <= 1e-6 * want.abs(),
                "{name} talbot t={t}: {a} vs {want}"
            );
            assert!(
                (a - b).abs() <= 1e-4 * want.abs(),
                "{name} cross-check t={t}: {a} vs {b}"
            );
            assert_eq!(Inverter::invert_verified(f, t).unwrap(), a);
        }
    }
}

#[test]
fn diffusion_kernel_from_transform() {
    for (c, kappa) in [(1.0, 1.0), (2.0, 0.5)] {
        let talbot = Inverter::talbot();
        // the contour leaves Re s > 0, so invert the explicit formula
        let transform = move |s: Complex64| (s * c + (s * kappa).sqrt()).inv();
        for th in log_points(1e-3, 1e3, 50) {
            let t = th * c * c / kappa;
            let want = erfcx(th.sqrt()).unwrap() / c;
            let got = talbot.invert(transform, t).unwrap();
            assert!(
                (got - want).abs() <= 1e-6 * want,
                "c={c} κ={kappa} t̃={th}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn inversion_is_linear() {
    let inv = Inverter::<f64>::talbot();
    let f = |s: Complex64| (s + 0.5).inv();
    let g = |s: Complex64| s.sqrt().inv();
    for t in [0.01, 0.7, 30.0] {
        let combo = inv.invert(|s| f(s) * 2.5 - g(s) * 0.75, t).unwrap();
        let parts = 2.5 * inv.invert(f, t).unwrap() - 0.75 * inv.invert(g, t).unwrap();
        assert!((combo - parts).abs() <= 1e-10 * parts.abs().max(1.0));
    }
}

#[test]
fn kernel_transform_agrees_with_formula_in_right_half_plane() {
    let k = KernelSpec::diffusion_unbounded(2.0, 0.5).unwrap();
    for s in [
        Complex64::new(0.3, 0.0),
        Complex64::new(1.0, 5.0),
        Complex64::new(40.0, -2.0),
    ] {
        let want = (s * 2.0 + (s * 0.5).sqrt()).inv();
        assert!((k.laplace(s).unwrap() - want).norm() < 1e-15 * want.norm());
    }
    assert!(k.laplace(Complex64::new(-1.0, 1.0)).is_err());
}

#[test]
fn lower_talbot_order_is_still_usable() {
    let cfg = InversionConfig {
        order: 16,
        ..InversionConfig::talbot()
    };
    let inv = Inverter::new(cfg).unwrap();
    let got = inv.invert(|s| (s + A).inv(), 3.0).unwrap();
    assert!((got - (-3.0 * A).exp()).abs() < 1e-6);
}
