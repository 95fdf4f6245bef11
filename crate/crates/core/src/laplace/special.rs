//! Scaled complementary error function and the Euler gamma function.

use crate::error::{ImpactError, Result};
use crate::scalar::{from_usize, lit, Real};

/// Below this argument `erfcx` is evaluated from the power series of
/// `e^{x²}·erf(x)`; above it from the Laplace continued fraction. At the
/// switch both converge to full double precision (series within ~100
/// terms, fraction within ~90).
const SERIES_LIMIT: f64 = 1.5;

/// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Scaled complementary error function `e^{x²}·erfc(x)` for `x ≥ 0`.
pub fn erfcx<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x < T::zero() {
        return Err(ImpactError::Domain(format!(
            "erfcx requires x >= 0, got {x}"
        )));
    }
    Ok(erfcx_nonneg(x))
}

pub(crate) fn erfcx_nonneg<T: Real>(x: T) -> T {
    if x.is_infinite() {
        return T::zero();
    }
    if x < lit(SERIES_LIMIT) {
        erfcx_series(x)
    } else {
        erfcx_continued_fraction(x)
    }
}

/// `e^{x²} - (2/√π)·Σ 2ⁿx^{2n+1}/(2n+1)!!`; every series term is positive.
fn erfcx_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = T::zero();
    let mut n = 0usize;
    loop {
        sum += term;
        n += 1;
        term *= (x2 + x2) / from_usize::<T>(2 * n + 1);
        if term <= T::epsilon() * sum || n > 500 {
            break;
        }
    }
    x2.exp() - T::FRAC_2_SQRT_PI() * sum
}

/// `1/√π · 1/(x + ½/(x + 1/(x + (3/2)/(x + …))))` by the modified Lentz method.
fn erfcx_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value();
    let half = lit::<T>(0.5);
    let mut f = x;
    let mut c = f;
    let mut d = T::zero();
    for n in 1..2000usize {
        let a = from_usize::<T>(n) * half;
        d = x + a * d;
        if d == T::zero() {
            d = tiny;
        }
        d = d.recip();
        c = x + a / c;
        if c == T::zero() {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (T::PI().sqrt() * f).recip()
}

/// Euler gamma function for `x > 0`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(gamma_pos(x))
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(ln_gamma_pos(x))
}

fn check_positive<T: Real>(x: T) -> Result<()> {
    if x.is_nan() || x <= T::zero() {
        return Err(ImpactError::Domain(format!(
            "gamma requires x > 0, got {x}"
        )));
    }
    Ok(())
}

fn lanczos_sum<T: Real>(z: T) -> T {
    let mut a = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += lit::<T>(c) / (z + from_usize::<T>(i));
    }
    a
}

pub(crate) fn gamma_pos<T: Real>(x: T) -> T {
    if x < lit(0.5) {
        return gamma_pos(x + T::one()) / x;
    }
    // Small integers are returned exactly.
    if x <= lit(20.0) && x.fract() == T::zero() {
        let n = x.to_usize().unwrap_or(1);
        return (1..n).fold(T::one(), |acc, k| acc * from_usize::<T>(k));
    }
    let z = x - T::one();
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let sqrt_2pi = (T::PI() + T::PI()).sqrt();
    sqrt_2pi * ((z + lit(0.5)) * t.ln() - t).exp() * lanczos_sum(z)
}

pub(crate) fn ln_gamma_pos<T: Real>(x: T) -> T {
    if x < lit(0.5) {
        return ln_gamma_pos(x + T::one()) - x.ln();
    }
    let z = x - T::one();
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let ln_sqrt_2pi = lit::<T>(0.918_938_533_204_672_7);
    ln_sqrt_2pi + (z + lit(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn erfcx_at_zero_is_one() {
        assert_eq!(erfcx(0.0_f64).unwrap(), 1.0);
    }

    #[test]
    fn erfcx_rejects_negative_argument() {
        assert!(matches!(erfcx(-0.1_f64), Err(ImpactError::Domain(_))));
        assert!(erfcx(f64::NAN).is_err());
    }

    #[test]
    fn erfcx_large_argument_follows_asymptote() {
        let x = 100.0_f64;
        let asym = 1.0 / (x * std::f64::consts::PI.sqrt());
        assert_relative_eq!(erfcx(x).unwrap(), asym, max_relative = 1e-4);
        assert_eq!(erfcx(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn erfcx_is_continuous_across_branch_switch() {
        let below = erfcx_series(SERIES_LIMIT);
        let above = erfcx_continued_fraction(SERIES_LIMIT);
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn erfcx_single_precision() {
        let v: f32 = erfcx(1.0_f32).unwrap();
        assert!((v - 0.427_583_6).abs() < 1e-6);
    }

    #[test]
    fn gamma_identities() {
        assert_eq!(gamma(1.0_f64).unwrap(), 1.0);
        assert_eq!(gamma(5.0_f64).unwrap(), 24.0);
        assert_relative_eq!(
            gamma(0.5_f64).unwrap(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-13
        );
        // Γ(x+1) = xΓ(x)
        for &x in &[0.3, 1.7, 4.2, 11.5] {
            let lhs = gamma(x + 1.0_f64).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma(0.0_f64).is_err());
        assert!(gamma(-1.5_f64).is_err());
        assert!(ln_gamma(0.0_f64).is_err());
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.2_f64, 0.5, 1.5, 3.25, 9.0, 30.5] {
            assert_relative_eq!(
                ln_gamma(x).unwrap(),
                gamma(x).unwrap().ln(),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }
}
