//! Impact kernels: how the price perturbation of a unit trade relaxes in time.
//!
//! Four families are supported. All quantities are dimensionless: time in
//! days, volume in fractions of ADV. [`KernelSpec::eval`] gives `K(t)`,
//! [`KernelSpec::step_response`] the once-integrated kernel `K₋₁(t)` (impact of
//! a unit constant rate), and [`KernelSpec::double_integral`] the
//! twice-integrated kernel `K₋₂(t)` that prices constant-rate execution.

use num_complex::Complex;

use crate::error::{ImpactError, Result};
use crate::laplace::{erfcx_nonneg, gauss_legendre, integrate, tanh_stable, Inverter};
use crate::scalar::{from_usize, lit, Real};

/// Outer boundary of the diffusion domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterBoundary<T> {
    /// Semi-infinite medium; the impact fully relaxes, `K(∞) = 0`.
    Unbounded,
    /// Impenetrable wall at this distance; leaves `K(∞) = 1/(c + x2)`.
    Finite(T),
}

/// A kernel family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    /// Instantaneous recovery, `K = η·δ(t)`.
    Delta { eta: T },
    /// `K(t) = η·β·e^{-βt}`, normalized so that `∫K = η`.
    Exponential { eta: T, beta: T },
    /// Green's function of the storage/diffusion system: storage `c`,
    /// diffusivity `kappa`, outer boundary `x2`.
    Diffusion {
        c: T,
        kappa: T,
        x2: OuterBoundary<T>,
    },
    /// `K(t) = c0 + c1/(t0 + t)^alpha`.
    Power { c0: T, c1: T, t0: T, alpha: T },
}

/// Short-time, long-time and permanent behaviour of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAsymptotics<T> {
    pub initial: T,
    pub tail: TailLaw<T>,
    pub permanent: T,
}

/// Leading decay law of `K(t) - K(∞)` at large `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailLaw<T> {
    /// `K(t) ≈ coefficient/√t`.
    InverseSqrt { coefficient: T },
    /// `K(t) - K(∞) ≈ coefficient·t^{-exponent}`.
    Power { coefficient: T, exponent: T },
}

impl<T: Real> TailLaw<T> {
    pub fn describe(&self) -> String {
        match self {
            TailLaw::InverseSqrt { coefficient } => format!("{coefficient}/sqrt(t)"),
            TailLaw::Power {
                coefficient,
                exponent,
            } => format!("{coefficient}*t^-{exponent}"),
        }
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(ImpactError::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl<T: Real> KernelSpec<T> {
    pub fn delta(eta: T) -> Result<Self> {
        let k = Self::Delta { eta };
        k.validate()?;
        Ok(k)
    }

    pub fn exponential(eta: T, beta: T) -> Result<Self> {
        let k = Self::Exponential { eta, beta };
        k.validate()?;
        Ok(k)
    }

    pub fn diffusion(c: T, kappa: T, x2: OuterBoundary<T>) -> Result<Self> {
        let k = Self::Diffusion { c, kappa, x2 };
        k.validate()?;
        Ok(k)
    }

    pub fn diffusion_unbounded(c: T, kappa: T) -> Result<Self> {
        Self::diffusion(c, kappa, OuterBoundary::Unbounded)
    }

    pub fn power(c0: T, c1: T, t0: T, alpha: T) -> Result<Self> {
        let k = Self::Power { c0, c1, t0, alpha };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Delta { eta } => positive("eta", eta),
            Self::Exponential { eta, beta } => {
                positive("eta", eta)?;
                positive("beta", beta)
            }
            Self::Diffusion { c, kappa, x2 } => {
                positive("c", c)?;
                positive("kappa", kappa)?;
                if let OuterBoundary::Finite(x2) = x2 {
                    positive("x2", x2)?;
                }
                Ok(())
            }
            Self::Power { c0, c1, t0, alpha } => {
                if !(c0.is_finite() && c0 >= T::zero()) {
                    return Err(ImpactError::InvalidParameter(format!(
                        "c0 must be non-negative, got {c0}"
                    )));
                }
                positive("c1", c1)?;
                positive("t0", t0)?;
                positive("alpha", alpha)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Delta { .. } => "delta",
            Self::Exponential { .. } => "exponential",
            Self::Diffusion { .. } => "diffusion",
            Self::Power { .. } => "power",
        }
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, Self::Delta { .. })
    }

    /// Diffusion time `κt/c²`; `None` for other families.
    pub fn dimensionless_time(&self, t: T) -> Option<T> {
        match *self {
            Self::Diffusion { c, kappa, .. } => Some(kappa * t / (c * c)),
            _ => None,
        }
    }

    /// Kernel value `K(t)` for `t ≥ 0`.
    pub fn eval(&self, t: T) -> Result<T> {
        if self.is_delta() {
            return Err(ImpactError::NoPointwiseEvaluation);
        }
        check_time(t)?;
        Ok(self.eval_unchecked(t))
    }

    /// `K(t)`; caller guarantees a non-delta kernel and `t ≥ 0`.
    pub(crate) fn eval_unchecked(&self, t: T) -> T {
        match *self {
            Self::Delta { .. } => T::nan(),
            Self::Exponential { eta, beta } => eta * beta * (-beta * t).exp(),
            Self::Diffusion { c, kappa, x2 } => match x2 {
                OuterBoundary::Unbounded => erfcx_nonneg((kappa * t / (c * c)).sqrt()) / c,
                OuterBoundary::Finite(_) => {
                    if t == T::zero() {
                        c.recip()
                    } else {
                        Inverter::talbot().invert_unchecked(&|s| self.laplace_unchecked(s), t)
                    }
                }
            },
            Self::Power { c0, c1, t0, alpha } => c0 + c1 / (t0 + t).powf(alpha),
        }
    }

    /// `K(0)`, finite for every family except the delta kernel.
    pub fn initial_value(&self) -> Result<T> {
        self.eval(T::zero())
    }

    /// `K(∞)`, the permanent part of the impact.
    pub fn permanent_value(&self) -> T {
        match *self {
            Self::Delta { .. } | Self::Exponential { .. } => T::zero(),
            Self::Diffusion { c, x2, .. } => match x2 {
                OuterBoundary::Unbounded => T::zero(),
                OuterBoundary::Finite(x2) => (c + x2).recip(),
            },
            Self::Power { c0, .. } => c0,
        }
    }

    /// Laplace transform `K̄(s)` for `Re s > 0`.
    pub fn laplace(&self, s: Complex<T>) -> Result<Complex<T>> {
        if s.re.is_nan() || s.re <= T::zero() {
            return Err(ImpactError::Domain(format!(
                "laplace variable needs Re(s) > 0, got {s}"
            )));
        }
        Ok(self.laplace_unchecked(s))
    }

    pub(crate) fn laplace_unchecked(&self, s: Complex<T>) -> Complex<T> {
        match *self {
            Self::Delta { eta } => Complex::new(eta, T::zero()),
            Self::Exponential { eta, beta } => {
                Complex::new(eta * beta, T::zero()) / (s + Complex::new(beta, T::zero()))
            }
            Self::Diffusion { c, kappa, x2 } => {
                let flux = (s * kappa).sqrt();
                let flux = match x2 {
                    OuterBoundary::Unbounded => flux,
                    OuterBoundary::Finite(x2) => flux * tanh_stable((s / kappa).sqrt() * x2),
                };
                (s * c + flux).inv()
            }
            Self::Power { c0, c1, t0, alpha } => {
                Complex::new(c0, T::zero()) / s + power_tail_laplace(s, c1, t0, alpha)
            }
        }
    }

    /// Impact of a unit constant rate started at time 0: `K₋₁(t) = ∫₀ᵗ K`.
    pub fn step_response(&self, t: T) -> Result<T> {
        check_time(t)?;
        Ok(self.step_unchecked(t))
    }

    /// `K₋₁(t)`, zero for `t ≤ 0` except for the delta kernel at `t = 0`.
    pub(crate) fn step_unchecked(&self, t: T) -> T {
        if t < T::zero() {
            return T::zero();
        }
        match *self {
            Self::Delta { eta } => eta,
            _ if t == T::zero() => T::zero(),
            Self::Exponential { eta, beta } => -eta * (-beta * t).exp_m1(),
            Self::Diffusion { .. } => Inverter::talbot()
                .invert_unchecked(&|s: Complex<T>| self.laplace_unchecked(s) / s, t),
            Self::Power { c0, c1, t0, alpha } => {
                let p = T::one() - alpha;
                let l = (t / t0).ln_1p();
                c0 * t + c1 * t0.powf(p) * l * expm1_ratio(p * l)
            }
        }
    }

    /// Twice-integrated kernel `K₋₂(t) = ∫₀ᵗ∫₀^u K(τ) dτ du`.
    pub fn double_integral(&self, t: T) -> Result<T> {
        check_time(t)?;
        Ok(self.double_unchecked(t))
    }

    /// `K₋₂(t)`, zero for `t ≤ 0`.
    pub(crate) fn double_unchecked(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        match *self {
            Self::Delta { eta } => eta * t,
            Self::Exponential { eta, beta } => eta * exp_remainder(beta * t) / beta,
            Self::Diffusion { .. } => Inverter::talbot()
                .invert_unchecked(&|s: Complex<T>| self.laplace_unchecked(s) / (s * s), t),
            Self::Power { c0, c1, t0, alpha } => {
                let p = T::one() - alpha;
                let l = (t / t0).ln_1p();
                let rule = gauss_legendre::<T>(16);
                let panels = (l / lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
                let j: T = integrate(&rule, T::zero(), l, panels, |w: T| {
                    w.exp() * w * expm1_ratio(p * w)
                });
                c0 * t * t * lit(0.5) + c1 * t0.powf(p + T::one()) * j
            }
        }
    }

    /// Initial value, tail law and permanent level of the diffusion and power kernels.
    pub fn asymptotics(&self) -> Result<KernelAsymptotics<T>> {
        match *self {
            Self::Delta { .. } => Err(ImpactError::TrivialAsymptotics("delta")),
            Self::Exponential { .. } => Err(ImpactError::TrivialAsymptotics("exponential")),
            Self::Diffusion { c, kappa, .. } => Ok(KernelAsymptotics {
                initial: c.recip(),
                tail: TailLaw::InverseSqrt {
                    coefficient: (T::PI() * kappa).sqrt().recip(),
                },
                permanent: self.permanent_value(),
            }),
            Self::Power { c0, c1, t0, alpha } => Ok(KernelAsymptotics {
                initial: c0 + c1 / t0.powf(alpha),
                tail: TailLaw::Power {
                    coefficient: c1,
                    exponent: alpha,
                },
                permanent: c0,
            }),
        }
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(ImpactError::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

/// `expm1(z)/z`, equal to 1 at `z = 0`.
fn expm1_ratio<T: Real>(z: T) -> T {
    if z == T::zero() {
        T::one()
    } else {
        z.exp_m1() / z
    }
}

/// `e^{-x} - 1 + x` without cancellation at small `x`.
fn exp_remainder<T: Real>(x: T) -> T {
    if x < lit(0.1) {
        // Σ_{n≥2} (-x)ⁿ/n!
        let mut term = x * x * lit(0.5);
        let mut sum = T::zero();
        for n in 2..20usize {
            sum += term;
            term = -term * x / from_usize::<T>(n + 1);
        }
        sum
    } else {
        x + (-x).exp_m1()
    }
}

/// `c1·∫₀^∞ e^{-st}(t0+t)^{-α} dt` by quadrature along the ray `arg t = -arg s`,
/// where the integrand decays monotonically.
fn power_tail_laplace<T: Real>(s: Complex<T>, c1: T, t0: T, alpha: T) -> Complex<T> {
    let r = s.norm();
    let rot = Complex::from_polar(T::one(), -s.arg());
    let tau_max = lit::<T>(40.0) / r;
    let rule = gauss_legendre::<T>(16);

    let mut edges = vec![T::zero()];
    let mut edge = t0.min(tau_max);
    edges.push(edge);
    while edge < tau_max {
        edge = (edge + edge).min(tau_max);
        edges.push(edge);
    }

    let base = Complex::new(t0, T::zero());
    let mut total = Complex::new(T::zero(), T::zero());
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let panels = ((b - a) * r / lit(4.0))
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .clamp(1, 10_000);
        total += integrate(&rule, a, b, panels, |tau: T| {
                (base + rot * tau).powf(-alpha) * (-r * tau).exp()
            });
    }
    total * rot * c1
}

/// Long-time growth of the impact of a constant rate `q` in a diffusion
/// medium of spatial dimension `dim`, up to a constant factor.
///
/// `q·t^{1-D/2}` for `D = 1`, `q·ln t` for `D = 2`, and a flat `q` for
/// `D = 3` where the response saturates.
pub fn dimension_asymptote<T: Real>(dim: u32, q: T, t: T) -> Result<T> {
    if t.is_nan() || t <= T::one() {
        return Err(ImpactError::Domain(format!(
            "asymptote requires t > 1, got {t}"
        )));
    }
    match dim {
        1 => Ok(q * t.sqrt()),
        2 => Ok(q * t.ln()),
        3 => Ok(q),
        _ => Err(ImpactError::Domain(format!(
            "space dimension must be 1, 2 or 3, got {dim}"
        ))),
    }
}
