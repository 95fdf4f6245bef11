use impactlab_core::{erfcx, Inverter, KernelSpec, OuterBoundary};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

// mpmath (50 digits): quad of erfcx(sqrt(κτ/c²))/c, c = 1.3, κ = 0.7
const DIFFUSION_INTEGRALS: [(f64, f64, f64); 5] = [
    (
        0.01,
        0.007_335_228_676_592_047,
        0.000_037_023_275_279_494,
    ),
    (
        0.5,
        0.284_088_312_198_174_4,
        0.075_183_743_170_094_6,
    ),
    (
        2.0,
        0.892_256_009_798_008_6,
        0.982_953_767_702_638,
    ),
    (
        10.0,
        2.875_150_578_149_515_5,
        16.802_488_878_874_527,
    ),
    (
        200.0,
        17.330_383_326_649_066,
        2_213.490_469_507_499,
    ),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Composite Simpson on `[a, b]` after the substitution `τ = a + (b−a)u²`,
/// which removes the `√τ` behaviour of diffusion kernels at the origin.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let g = |u: f64| f(a + (b - a) * u * u) * 2.0 * u * (b - a);
    let h = 1.0 / n as f64;
    let mut s = g(0.0) + g(1.0);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn diffusion_integrals_match_reference_values() {
    let k = KernelSpec::diffusion_unbounded(1.3, 0.7).unwrap();
    for (t, k1, k2) in DIFFUSION_INTEGRALS {
        assert!(rel(k.step_response(t).unwrap(), k1) < 1e-9, "K₋₁({t})");
        assert!(rel(k.double_integral(t).unwrap(), k2) < 1e-9, "K₋₂({t})");
    }
}

#[test]
fn diffusion_integrals_match_closed_forms() {
    let (c, kappa) = (0.8, 2.5);
    let k = KernelSpec::diffusion_unbounded(c, kappa).unwrap();
    for i in 0..40 {
        let th = 1e-3 * 10f64.powf(i as f64 / 6.5);
        let t = th * c * c / kappa;
        let base = erfcx(th.sqrt()).unwrap() - 1.0 + 2.0 * (th / PI).sqrt();
        let k1 = c / kappa * base;
        let k2 = c.powi(3) / (kappa * kappa) * (base - th + 4.0 / 3.0 * th.powf(1.5) / PI.sqrt());
        assert!(rel(k.step_response(t).unwrap(), k1) < 1e-8, "K₋₁ at t̃={th}");
        assert!(
            rel(k.double_integral(t).unwrap(), k2) < 1e-7,
            "K₋₂ at t̃={th}"
        );
    }
}

#[test]
fn step_response_matches_quadrature() {
    let kernels = [
        KernelSpec::exponential(0.7, 3.0).unwrap(),
        KernelSpec::diffusion(1.0, 1.0, OuterBoundary::Finite(0.8)).unwrap(),
        KernelSpec::power(0.05, 1.2, 0.3, 0.6).unwrap(),
        KernelSpec::power(0.0, 1.0, 1.0, 1.0).unwrap(),
    ];
    for k in &kernels {
        for t in [0.05, 0.9, 4.0, 25.0] {
            let k1 = simpson(|s| k.eval(s).unwrap(), 0.0, t, 400);
            assert!(
                rel(k.step_response(t).unwrap(), k1) < 1e-7,
                "{} K₋₁({t})",
                k.family()
            );
            let k2 = simpson(|s| k.step_response(s).unwrap(), 0.0, t, 200);
            assert!(
                rel(k.double_integral(t).unwrap(), k2) < 1e-7,
                "{} K₋₂({t})",
                k.family()
            );
        }
    }
}

#[test]
fn transform_and_time_domain_agree() {
    // Gaver–Stehfest samples s on the positive real axis only
    let inv = Inverter::gaver_stehfest();
    let kernels = [
        KernelSpec::exponential(1.0, 2.0).unwrap(),
        KernelSpec::diffusion(1.0, 2.0, OuterBoundary::Finite(1.5)).unwrap(),
        KernelSpec::power(0.0, 1.0, 0.5, 0.7).unwrap(),
    ];
    for k in &kernels {
        for t in [0.2, 1.0, 5.0] {
            let got = inv.invert(|s: Complex64| k.laplace(s).unwrap(), t).unwrap();
            let want = k.eval(t).unwrap();
            // error is relative to the kernel's scale, not to a decayed tail value
            let scale = k.eval(0.0).unwrap();
            assert!(
                (got - want).abs() < 1e-4 * scale,
                "{} at t={t}: {got} vs {want}",
                k.family()
            );
        }
    }
}

#[test]
fn finite_reservoir_settles_to_permanent_level() {
    let k = KernelSpec::diffusion(1.0, 1.0, OuterBoundary::Finite(3.0)).unwrap();
    assert!(rel(k.permanent_value(), 0.25) < 1e-15);
    assert!(rel(k.eval(400.0).unwrap(), 0.25) < 1e-6);
    let wide = KernelSpec::diffusion(1.0, 1.0, OuterBoundary::Finite(60.0)).unwrap();
    let open = KernelSpec::diffusion_unbounded(1.0, 1.0).unwrap();
    for t in [0.1, 1.0, 10.0] {
        assert!(rel(wide.eval(t).unwrap(), open.eval(t).unwrap()) < 1e-9);
    }
}

#[test]
fn diffusion_kernel_is_completely_monotone_on_a_grid() {
    let k = KernelSpec::diffusion_unbounded(1.0, 1.0).unwrap();
    let ts: Vec<f64> = (0..200).map(|i| 0.05 * i as f64).collect();
    let v: Vec<f64> = ts.iter().map(|&t| k.eval(t).unwrap()).collect();
    for w in v.windows(3) {
        assert!(w[1] < w[0]);
        assert!(w[0] - 2.0 * w[1] + w[2] > 0.0);
    }
}

proptest! {
    #[test]
    fn integrals_are_monotone(t in 1e-3f64..50.0, dt in 1e-3f64..5.0, c in 0.2f64..3.0, kappa in 0.1f64..4.0) {
        let k = KernelSpec::diffusion_unbounded(c, kappa).unwrap();
        let (a, b) = (k.step_response(t).unwrap(), k.step_response(t + dt).unwrap());
        prop_assert!(b > a && a > 0.0);
        // K₋₂ grows at least as fast as K₋₁(t)·dt
        let (x, y) = (k.double_integral(t).unwrap(), k.double_integral(t + dt).unwrap());
        prop_assert!(y - x >= a * dt * (1.0 - 1e-9));
    }

    #[test]
    fn power_kernel_step_response_is_increasing(t in 1e-3f64..1e3, alpha in 0.1f64..2.5) {
        let k = KernelSpec::power(0.0, 1.0, 0.5, alpha).unwrap();
        prop_assert!(k.step_response(1.01 * t).unwrap() > k.step_response(t).unwrap());
    }
}
