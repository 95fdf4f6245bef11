//! Numerical inverse Laplace transform and supporting special functions.
//!
//! Two inverters are provided. The fixed-contour Talbot method is the default
//! and converges geometrically for the smooth, completely monotone transforms
//! produced by the impact kernels. Gaver–Stehfest uses only real samples of the
//! transform and serves as an independent cross-check
//! ([`Inverter::invert_verified`]).

mod quadrature;
mod special;

pub(crate) use quadrature::{gauss_legendre, integrate};
pub use special::{erfcx, gamma, ln_gamma};
pub(crate) use special::{erfcx_nonneg, ln_gamma_pos};

use num_complex::Complex;

use crate::error::{ImpactError, Result};
use crate::scalar::{from_usize, lit, Real};

/// Relative disagreement above which a verified inversion is rejected.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-4;

/// Default number of Talbot contour nodes.
pub const TALBOT_ORDER: usize = 32;

/// Default Gaver–Stehfest order; higher orders lose to cancellation in `f64`.
pub const STEHFEST_ORDER: usize = 16;

const STEHFEST_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    Talbot,
    GaverStehfest,
}

/// Inverter selection and tuning.
///
/// `scale` is the contour parameter for Talbot (the contour passes through
/// `s = scale·order/t`) and is ignored by Gaver–Stehfest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig<T> {
    pub method: InversionMethod,
    pub order: usize,
    pub scale: T,
}

impl<T: Real> InversionConfig<T> {
    /// Talbot with [`TALBOT_ORDER`] nodes in double precision. Single
    /// precision uses 12 nodes, since the contour amplifies rounding by
    /// roughly `e^{0.4·order}`.
    pub fn talbot() -> Self {
        let order = if T::epsilon() < lit(1e-10) {
            TALBOT_ORDER
        } else {
            12
        };
        Self {
            method: InversionMethod::Talbot,
            order,
            scale: lit(0.4),
        }
    }

    pub fn gaver_stehfest() -> Self {
        Self {
            method: InversionMethod::GaverStehfest,
            order: STEHFEST_ORDER,
            scale: T::LN_2(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 6 {
            return Err(ImpactError::InvalidParameter(format!(
                "inversion order must be >= 6, got {}",
                self.order
            )));
        }
        match self.method {
            InversionMethod::GaverStehfest => {
                if !self.order.is_multiple_of(2) || self.order > STEHFEST_MAX_ORDER {
                    return Err(ImpactError::InvalidParameter(format!(
                        "gaver-stehfest order must be even and <= {STEHFEST_MAX_ORDER}, got {}",
                        self.order
                    )));
                }
            }
            InversionMethod::Talbot => {
                if self.scale.is_nan() || self.scale <= T::zero() {
                    return Err(ImpactError::InvalidParameter(
                        "talbot scale must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl<T: Real> Default for InversionConfig<T> {
    fn default() -> Self {
        Self::talbot()
    }
}

/// Precomputed quadrature for one inversion method.
#[derive(Debug, Clone)]
pub struct Inverter<T> {
    config: InversionConfig<T>,
    nodes: Nodes<T>,
}

#[derive(Debug, Clone)]
enum Nodes<T> {
    /// Per contour node θ_k: (θ·cot θ, θ, 1 + iσ(θ)).
    Talbot(Vec<(T, T, Complex<T>)>),
    /// Stehfest weights V_k, k = 1..N.
    Stehfest(Vec<T>),
}

impl<T: Real> Inverter<T> {
    pub fn new(config: InversionConfig<T>) -> Result<Self> {
        config.validate()?;
        let nodes = match config.method {
            InversionMethod::Talbot => Nodes::Talbot(talbot_nodes(config.order)),
            InversionMethod::GaverStehfest => Nodes::Stehfest(stehfest_weights(config.order)),
        };
        Ok(Self { config, nodes })
    }

    /// Default 32-node Talbot inverter.
    pub fn talbot() -> Self {
        Self::new(InversionConfig::talbot()).expect("default talbot config is valid")
    }

    pub fn gaver_stehfest() -> Self {
        Self::new(InversionConfig::gaver_stehfest()).expect("default stehfest config is valid")
    }

    pub fn config(&self) -> &InversionConfig<T> {
        &self.config
    }

    /// Returns `f(t)` for the transform `transform(s) = ∫ e^{-st} f(t) dt`.
    pub fn invert<F>(&self, transform: F, t: T) -> Result<T>
    where
        F: Fn(Complex<T>) -> Complex<T>,
    {
        if t.is_nan() || t <= T::zero() || t.is_infinite() {
            return Err(ImpactError::Domain(format!(
                "inversion time must be positive and finite, got {t}"
            )));
        }
        Ok(self.invert_unchecked(&transform, t))
    }

    pub(crate) fn invert_unchecked<F>(&self, transform: &F, t: T) -> T
    where
        F: Fn(Complex<T>) -> Complex<T>,
    {
        match &self.nodes {
            Nodes::Talbot(nodes) => {
                let m = from_usize::<T>(self.config.order);
                let r = self.config.scale * m / t;
                let mut acc =
                    lit::<T>(0.5) * transform(Complex::new(r, T::zero())).re * (r * t).exp();
                for &(theta_cot, theta, weight) in nodes {
                    let s = Complex::new(r * theta_cot, r * theta);
                    acc += ((s * t).exp() * transform(s) * weight).re;
                }
                acc * r / m
            }
            Nodes::Stehfest(weights) => {
                let a = T::LN_2() / t;
                let mut acc = T::zero();
                for (k, &v) in weights.iter().enumerate() {
                    let s = a * from_usize::<T>(k + 1);
                    acc += v * transform(Complex::new(s, T::zero())).re;
                }
                acc * a
            }
        }
    }

    /// Inverts with both Talbot and Gaver–Stehfest and returns the Talbot
    /// value, or [`ImpactError::InversionUnreliable`] when they disagree by
    /// more than [`CROSS_CHECK_TOLERANCE`] relative.
    pub fn invert_verified<F>(transform: F, t: T) -> Result<T>
    where
        F: Fn(Complex<T>) -> Complex<T>,
    {
        let talbot = Self::talbot().invert(&transform, t)?;
        let stehfest = Self::gaver_stehfest().invert(&transform, t)?;
        let scale = talbot.abs().max(stehfest.abs());
        if (talbot - stehfest).abs() > lit::<T>(CROSS_CHECK_TOLERANCE) * scale {
            return Err(ImpactError::InversionUnreliable {
                t: t.to_f64().unwrap_or(f64::NAN),
                talbot: talbot.to_f64().unwrap_or(f64::NAN),
                stehfest: stehfest.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(talbot)
    }
}

/// Inverts `transform` at `t` with the given configuration.
pub fn invert_laplace<T, F>(transform: F, t: T, config: &InversionConfig<T>) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    Inverter::new(*config)?.invert(transform, t)
}

fn talbot_nodes<T: Real>(order: usize) -> Vec<(T, T, Complex<T>)> {
    (1..order)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / order as f64;
            let cot = theta.cos() / theta.sin();
            let sigma = theta + (theta * cot - 1.0) * cot;
            (
                lit(theta * cot),
                lit(theta),
                Complex::new(T::one(), lit(sigma)),
            )
        })
        .collect()
}

fn stehfest_weights<T: Real>(order: usize) -> Vec<T> {
    let half = order / 2;
    let fact = |n: usize| (1..=n).fold(1.0_f64, |acc, k| acc * k as f64);
    (1..=order)
        .map(|k| {
            let lo = k.div_ceil(2);
            let hi = k.min(half);
            let sum: f64 = (lo..=hi)
                .map(|j| {
                    (j as f64).powi(half as i32) * fact(2 * j)
                        / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k))
                })
                .sum();
            let sign = if (k + half).is_multiple_of(2) { 1.0 } else { -1.0 };
            lit(sign * sum)
        })
        .collect()
}

/// `tanh(z)` without overflow for large `|Re z|`.
pub(crate) fn tanh_stable<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    if z.re >= T::zero() {
        let e = (-(z + z)).exp();
        (one - e) / (one + e)
    } else {
        let e = (z + z).exp();
        (e - one) / (e + one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn unit_step_and_ramp() {
        let inv = Inverter::<f64>::talbot();
        assert_relative_eq!(
            inv.invert(|s| s.inv(), 5.0).unwrap(),
            1.0,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            inv.invert(|s| (s * s).inv(), 3.0).unwrap(),
            3.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn shifted_pole() {
        let inv = Inverter::<f64>::talbot();
        let v = inv.invert(|s| (s + c(2.0)).inv(), 1.0).unwrap();
        assert_relative_eq!(v, (-2.0_f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn rejects_nonpositive_time() {
        let inv = Inverter::<f64>::talbot();
        assert!(matches!(
            inv.invert(|s| s.inv(), 0.0),
            Err(ImpactError::Domain(_))
        ));
        assert!(inv.invert(|s| s.inv(), -1.0).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = InversionConfig::<f64>::gaver_stehfest();
        cfg.order = 15;
        assert!(cfg.validate().is_err());
        cfg.order = 22;
        assert!(cfg.validate().is_err());
        cfg.order = 4;
        assert!(cfg.validate().is_err());
        let mut t = InversionConfig::<f64>::talbot();
        t.scale = 0.0;
        assert!(t.validate().is_err());
    }

    #[test]
    fn stehfest_weights_sum_to_zero() {
        // Σ V_k = 0 makes the inversion of F = 0 exact and is a known identity.
        let w = stehfest_weights::<f64>(16);
        let s: f64 = w.iter().sum();
        let scale: f64 = w.iter().map(|v| v.abs()).sum();
        assert!(s.abs() < 1e-12 * scale);
    }

    #[test]
    fn verified_inversion_reports_disagreement() {
        // sin(t) oscillates; Gaver–Stehfest cannot follow it at t = 20.
        let err = Inverter::<f64>::invert_verified(|s| (s * s + c(1.0)).inv(), 20.0).unwrap_err();
        assert!(matches!(err, ImpactError::InversionUnreliable { .. }));
    }

    #[test]
    fn stable_tanh_saturates() {
        let z = Complex::new(800.0_f64, 3.0);
        let t = tanh_stable(z);
        assert!((t - c(1.0)).norm() < 1e-15);
        let t = tanh_stable(Complex::new(-800.0_f64, 3.0));
        assert!((t + c(1.0)).norm() < 1e-15);
        let z = Complex::new(0.3_f64, 0.2);
        assert!((tanh_stable(z) - z.tanh()).norm() < 1e-15);
    }

    #[test]
    fn talbot_in_single_precision() {
        let inv = Inverter::<f32>::talbot();
        let v = inv
            .invert(|s| (s + Complex::new(1.0_f32, 0.0)).inv(), 1.0)
            .unwrap();
        assert!((v - (-1.0_f32).exp()).abs() < 1e-4);
    }
}
