//! Gauss–Legendre rules.

use crate::scalar::{lit, Real};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub(crate) fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut rule = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0_f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((lit(x), lit(w)));
    }
    rule
}

/// Integrates `f` over `[a, b]` split into `panels` equal pieces.
pub(crate) fn integrate<T, R, F>(rule: &[(T, T)], a: T, b: T, panels: usize, mut f: F) -> R
where
    T: Real,
    R: std::ops::Add<Output = R> + std::ops::Mul<T, Output = R> + num_traits::Zero,
    F: FnMut(T) -> R,
{
    let panels = panels.max(1);
    let width = (b - a) / crate::scalar::from_usize::<T>(panels);
    let half = width * lit(0.5);
    let mut total = R::zero();
    for p in 0..panels {
        let mid = a + width * crate::scalar::from_usize::<T>(p) + half;
        for &(x, w) in rule {
            total = total + f(mid + half * x) * (w * half);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        let rule = gauss_legendre::<f64>(16);
        let s: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let v: f64 = integrate(&rule, 0.0, 2.0, 1, |x| x.powi(7));
        assert!((v - 32.0).abs() < 1e-12);
        let e: f64 = integrate(&rule, 0.0, 1.0, 3, |x| x.exp());
        assert!((e - (1f64.exp() - 1.0)).abs() < 1e-14);
    }
}
