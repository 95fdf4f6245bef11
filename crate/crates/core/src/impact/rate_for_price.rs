use num_complex::Complex;

use crate::error::{ImpactError, Result};
use crate::kernels::{KernelSpec, OuterBoundary};
use crate::laplace::{ln_gamma_pos, tanh_stable, Inverter};
use crate::scalar::{from_usize, lit, Real};

use super::profile::{Impulse, RateProfile};

/// Price path to be held by trading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriceTarget<T> {
    /// `h(t) = ΔS` for `t ≥ 0`.
    Constant { delta_s: T },
    /// `h(t) = A·t^α`, `α > 0`.
    Power { amplitude: T, alpha: T },
}

impl<T: Real> PriceTarget<T> {
    fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { delta_s } if !delta_s.is_finite() => Err(
                ImpactError::InvalidParameter("price step must be finite".into()),
            ),
            Self::Power { amplitude, alpha } => {
                if !(alpha > T::zero() && alpha.is_finite()) {
                    return Err(ImpactError::Domain(format!(
                        "power price target needs alpha > 0, got {alpha}"
                    )));
                }
                if !amplitude.is_finite() {
                    return Err(ImpactError::InvalidParameter(
                        "amplitude must be finite".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn value(&self, t: T) -> T {
        match *self {
            Self::Constant { delta_s } => delta_s,
            Self::Power { amplitude, alpha } => amplitude * t.powf(alpha),
        }
    }

    /// Price jump at `t = 0⁺`, matched by a block trade.
    fn initial(&self) -> T {
        match *self {
            Self::Constant { delta_s } => delta_s,
            Self::Power { .. } => T::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        match *self {
            Self::Constant { delta_s } => delta_s == T::zero(),
            Self::Power { amplitude, .. } => amplitude == T::zero(),
        }
    }
}

fn diffusion_params<T: Real>(kernel: &KernelSpec<T>) -> Result<(T, T, OuterBoundary<T>)> {
    match *kernel {
        // c = 0 (no cash-term in K̄) is meaningful here even though K(0) diverges
        KernelSpec::Diffusion { c, kappa, x2 } => {
            let x2_ok = match x2 {
                OuterBoundary::Unbounded => true,
                OuterBoundary::Finite(x) => x > T::zero() && x.is_finite(),
            };
            if !(c >= T::zero() && c.is_finite() && kappa > T::zero() && kappa.is_finite() && x2_ok)
            {
                return Err(ImpactError::InvalidParameter(format!(
                    "diffusion kernel needs c >= 0, kappa > 0, x2 > 0 (got c = {c}, kappa = {kappa})"
                )));
            }
            Ok((c, kappa, x2))
        }
        _ => Err(ImpactError::Unsupported(format!(
            "rate-for-price inversion is implemented for the diffusion kernel, not {}",
            kernel.family()
        ))),
    }
}

/// Volume traded over `(0, t]` by the flux part `√(sκ)·tanh(…)` of `1/K̄`,
/// excluding the block trade at 0.
fn flux_volume<T: Real>(target: &PriceTarget<T>, kappa: T, x2: OuterBoundary<T>, t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    let half: T = lit(0.5);
    match (x2, *target) {
        (OuterBoundary::Unbounded, PriceTarget::Constant { delta_s }) => {
            delta_s * lit::<T>(2.0) * (kappa * t / T::PI()).sqrt()
        }
        (OuterBoundary::Unbounded, PriceTarget::Power { amplitude, alpha }) => {
            let g = (ln_gamma_pos(alpha + T::one()) - ln_gamma_pos(alpha + half)).exp();
            amplitude * kappa.sqrt() * g * t.powf(alpha + half) / (alpha + half)
        }
        (OuterBoundary::Finite(x2), target) => {
            let flux =
                move |s: Complex<T>| (s * kappa).sqrt() * tanh_stable((s / kappa).sqrt() * x2);
            let transform = move |s: Complex<T>| match target {
                PriceTarget::Constant { delta_s } => flux(s) * delta_s / (s * s),
                PriceTarget::Power { amplitude, alpha } => {
                    let g = ln_gamma_pos(alpha + T::one()).exp();
                    flux(s) * amplitude * g / s.powf(alpha + lit(2.0))
                }
            };
            Inverter::talbot().invert_unchecked(&transform, t)
        }
    }
}

/// Trading profile whose impact under a diffusion kernel follows `target`.
///
/// Solves `q̄ = h̄/K̄`. `grid` must start at 0; the rate on each interval is
/// the exact average of the required rate, so cumulative volumes match at
/// every grid point. A constant target needs a block trade `c·ΔS` at 0.
/// With a finite outer boundary the flux term goes through Laplace
/// inversion.
pub fn rate_for_price_target<T: Real>(
    target: PriceTarget<T>,
    kernel: &KernelSpec<T>,
    grid: &[T],
) -> Result<RateProfile<T>> {
    let (c, kappa, x2) = diffusion_params(kernel)?;
    target.validate()?;
    if grid.len() < 2 || grid[0] != T::zero() {
        return Err(ImpactError::InvalidParameter(
            "rate-for-price grid needs at least two points starting at 0".into(),
        ));
    }
    if target.is_zero() {
        return RateProfile::new(grid.to_vec(), vec![T::zero(); grid.len() - 1], Vec::new());
    }
    let volume = |t: T| {
        let own = if t > T::zero() {
            c * (target.value(t) - target.initial())
        } else {
            T::zero()
        };
        own + flux_volume(&target, kappa, x2, t)
    };
    let cumulative: Vec<T> = grid.iter().map(|&t| volume(t)).collect();
    let rates = grid
        .windows(2)
        .zip(cumulative.windows(2))
        .map(|(g, v)| (v[1] - v[0]) / (g[1] - g[0]))
        .collect();
    let jump = c * target.initial();
    let impulses = if jump != T::zero() {
        vec![Impulse::new(T::zero(), jump)]
    } else {
        Vec::new()
    };
    RateProfile::new(grid.to_vec(), rates, impulses)
}

/// Pointwise required rate for an unbounded diffusion kernel:
/// `ΔS·√(κ/πt)` for a constant target and
/// `A[cαt^{α−1} + √κ·t^{α−½}·Γ(α+1)/Γ(α+½)]` for a power target.
pub fn required_rate<T: Real>(target: PriceTarget<T>, kernel: &KernelSpec<T>, t: T) -> Result<T> {
    let (c, kappa, x2) = diffusion_params(kernel)?;
    target.validate()?;
    if !matches!(x2, OuterBoundary::Unbounded) {
        return Err(ImpactError::Unsupported(
            "pointwise closed form needs an unbounded diffusion kernel; use rate_for_price_target"
                .into(),
        ));
    }
    if !(t > T::zero() && t.is_finite()) {
        return Err(ImpactError::Domain(format!(
            "required rate needs t > 0, got {t}"
        )));
    }
    let half: T = lit(0.5);
    Ok(match target {
        PriceTarget::Constant { delta_s } => delta_s * (kappa / (T::PI() * t)).sqrt(),
        PriceTarget::Power { amplitude, alpha } => {
            let g = (ln_gamma_pos(alpha + T::one()) - ln_gamma_pos(alpha + half)).exp();
            amplitude
                * (c * alpha * t.powf(alpha - T::one()) + kappa.sqrt() * t.powf(alpha - half) * g)
        }
    })
}

/// `[0, t_min, …, t_max]` with `per_decade` geometrically spaced points per
/// decade.
pub fn geometric_grid<T: Real>(t_min: T, t_max: T, per_decade: usize) -> Result<Vec<T>> {
    if !(t_min > T::zero() && t_max > t_min && t_max.is_finite() && per_decade > 0) {
        return Err(ImpactError::InvalidParameter(format!(
            "geometric grid needs 0 < t_min < t_max and per_decade > 0 (got {t_min}, {t_max}, {per_decade})"
        )));
    }
    let decades = (t_max / t_min).log10();
    let n = (decades * from_usize(per_decade))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let mut grid = vec![T::zero()];
    grid.extend((0..=n).map(|i| t_min * (t_max / t_min).powf(from_usize::<T>(i) / from_usize(n))));
    *grid.last_mut().expect("nonempty") = t_max;
    Ok(grid)
}
