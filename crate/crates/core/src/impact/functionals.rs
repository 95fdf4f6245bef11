use std::collections::HashMap;

use crate::error::{ImpactError, Result};
use crate::kernels::KernelSpec;
use crate::scalar::{key, lit, Real};

use super::profile::{ImpactPath, Impulse, RateProfile};

/// Memoized `K`, `K₋₁` and `K₋₂` lookups. Diffusion kernels with a finite
/// outer boundary need a Laplace inversion per value, and cost sums revisit
/// the same lags many times.
pub(crate) struct KernelCache<'k, T> {
    kernel: &'k KernelSpec<T>,
    k0: HashMap<u64, T>,
    k1: HashMap<u64, T>,
    k2: HashMap<u64, T>,
}

impl<'k, T: Real> KernelCache<'k, T> {
    pub(crate) fn new(kernel: &'k KernelSpec<T>) -> Self {
        Self {
            kernel,
            k0: HashMap::new(),
            k1: HashMap::new(),
            k2: HashMap::new(),
        }
    }

    pub(crate) fn k(&mut self, t: T) -> T {
        let kernel = self.kernel;
        *self
            .k0
            .entry(key(t))
            .or_insert_with(|| kernel.eval_unchecked(t))
    }

    pub(crate) fn k1(&mut self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let kernel = self.kernel;
        *self
            .k1
            .entry(key(t))
            .or_insert_with(|| kernel.step_unchecked(t))
    }

    pub(crate) fn k2(&mut self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let kernel = self.kernel;
        *self
            .k2
            .entry(key(t))
            .or_insert_with(|| kernel.double_unchecked(t))
    }
}

fn impact_at<T: Real>(p: &RateProfile<T>, cache: &mut KernelCache<'_, T>, t: T) -> Result<T> {
    if let Some(start) = p.start() {
        if t < start {
            return Err(ImpactError::Domain(format!(
                "impact requested at t = {t} before the profile starts at {start}"
            )));
        }
    }
    if let KernelSpec::Delta { eta } = *cache.kernel {
        if p.impulses()
            .iter()
            .any(|i| i.time == t && i.volume != T::zero())
        {
            return Err(ImpactError::UndefinedPointwise(format!(
                "delta kernel with a block trade at t = {t}"
            )));
        }
        return Ok(eta * p.rate_at(t));
    }
    let mut h = T::zero();
    for (a, b, q) in p.intervals() {
        if q != T::zero() && t > a {
            h += q * (cache.k1(t - a) - cache.k1(t - b));
        }
    }
    for imp in p.impulses().iter().filter(|i| i.time <= t) {
        h += imp.volume * cache.k(t - imp.time);
    }
    Ok(h)
}

/// Temporary impact `h(t) = ∫ q(τ) K(t − τ) dτ` of a profile (linear `f`).
pub fn temporary_impact<T: Real>(p: &RateProfile<T>, kernel: &KernelSpec<T>, t: T) -> Result<T> {
    kernel.validate()?;
    impact_at(p, &mut KernelCache::new(kernel), t)
}

/// [`temporary_impact`] at many times, sharing kernel evaluations.
pub fn impact_path<T: Real>(
    p: &RateProfile<T>,
    kernel: &KernelSpec<T>,
    times: &[T],
) -> Result<ImpactPath<T>> {
    kernel.validate()?;
    let mut cache = KernelCache::new(kernel);
    let values = times
        .iter()
        .map(|&t| impact_at(p, &mut cache, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ImpactPath {
        times: times.to_vec(),
        values,
    })
}

/// Cost per share of a sequence of child orders,
/// `ΔW = (1/2Q) Σᵢ Σⱼ vᵢ vⱼ K(|tᵢ − tⱼ|)`.
pub fn discrete_cost<T: Real>(trades: &[Impulse<T>], kernel: &KernelSpec<T>) -> Result<T> {
    kernel.validate()?;
    if trades.is_empty() {
        return Err(ImpactError::Precondition(
            "discrete cost needs at least one trade".into(),
        ));
    }
    if kernel.is_delta() {
        return Err(ImpactError::Precondition(
            "delta kernel has no finite K(0); use constant_rate_cost".into(),
        ));
    }
    let total: T = trades.iter().map(|t| t.volume).sum();
    if total == T::zero() {
        return Err(ImpactError::Precondition(
            "discrete cost needs nonzero total volume".into(),
        ));
    }
    let mut cache = KernelCache::new(kernel);
    let k0 = cache.k(T::zero());
    let mut diag = T::zero();
    let mut off = T::zero();
    for (i, a) in trades.iter().enumerate() {
        diag += a.volume * a.volume * k0;
        for b in &trades[i + 1..] {
            off += a.volume * b.volume * cache.k((a.time - b.time).abs());
        }
    }
    Ok((diag + off + off) / (total + total))
}

/// Cycle work `W = ∫ q(t) h(t) dt`.
///
/// Interval–interval terms are exact second differences of `K₋₂`; a block
/// trade sees the impact midway through its own execution (`½vK(0)`).
pub(crate) fn cycle_work<T: Real>(p: &RateProfile<T>, cache: &mut KernelCache<'_, T>) -> Result<T> {
    let half: T = lit(0.5);
    if let KernelSpec::Delta { eta } = *cache.kernel {
        if p.impulses().iter().any(|i| i.volume != T::zero()) {
            return Err(ImpactError::UndefinedPointwise(
                "block trades against a delta kernel have unbounded cost".into(),
            ));
        }
        return Ok(eta * p.intervals().map(|(a, b, q)| q * q * (b - a)).sum::<T>());
    }
    let iv: Vec<(T, T, T)> = p.intervals().filter(|iv| iv.2 != T::zero()).collect();
    let mut w = T::zero();
    for (i, &(ai, bi, qi)) in iv.iter().enumerate() {
        w += qi * qi * cache.k2(bi - ai);
        for &(aj, bj, qj) in &iv[..i] {
            // interval i lies after interval j
            let d = cache.k2(bi - aj) - cache.k2(bi - bj) - cache.k2(ai - aj) + cache.k2(ai - bj);
            w += qi * qj * d;
        }
    }
    let imps = p.impulses();
    for (j, imp) in imps.iter().enumerate() {
        let (s, v) = (imp.time, imp.volume);
        w += half * v * v * cache.k(T::zero());
        for other in &imps[..j] {
            w += v * other.volume * cache.k((s - other.time).abs());
        }
        for &(a, b, q) in &iv {
            // rate after the impulse feels it, impulse feels rate before it
            let after = cache.k1(b - s) - cache.k1(a - s);
            let before = cache.k1(s - a) - cache.k1(s - b);
            w += v * q * (after + before);
        }
    }
    Ok(w)
}

/// Cost per share `W/Q` of a profile; for a round trip (`Q = 0`) the cycle
/// work itself is returned.
pub fn continuous_cost<T: Real>(p: &RateProfile<T>, kernel: &KernelSpec<T>) -> Result<T> {
    kernel.validate()?;
    let w = cycle_work(p, &mut KernelCache::new(kernel))?;
    let q = p.total_volume();
    Ok(if q == T::zero() { w } else { w / q })
}

/// Cost per share of trading at constant rate `q` over `[0, T]`,
/// `q·K₋₂(T)/T`.
pub fn constant_rate_cost<T: Real>(q: T, horizon: T, kernel: &KernelSpec<T>) -> Result<T> {
    kernel.validate()?;
    if !(q > T::zero() && q.is_finite() && horizon > T::zero() && horizon.is_finite()) {
        return Err(ImpactError::InvalidParameter(format!(
            "constant-rate cost needs q > 0 and T > 0 (got q = {q}, T = {horizon})"
        )));
    }
    Ok(q * kernel.double_unchecked(horizon) / horizon)
}

/// Relative volume tolerance for a profile to count as a round trip.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;

/// Cycle work of a zero-net-volume profile. Nonnegative for completely
/// monotone kernels: no dynamic arbitrage.
pub fn round_trip_check<T: Real>(p: &RateProfile<T>, kernel: &KernelSpec<T>) -> Result<T> {
    kernel.validate()?;
    let net = p.total_volume();
    let tol = lit::<T>(ROUND_TRIP_TOLERANCE) * p.gross_volume().max(T::one());
    if net.abs() > tol {
        return Err(ImpactError::Precondition(format!(
            "round trip must have zero net volume (net = {net})"
        )));
    }
    cycle_work(p, &mut KernelCache::new(kernel))
}

/// Natural size of the cycle work of `p`, `(gross volume)²·K(0)`; sets the
/// scale for the numerical tolerance on round-trip nonnegativity.
pub fn profile_scale<T: Real>(p: &RateProfile<T>, kernel: &KernelSpec<T>) -> T {
    let g = p.gross_volume();
    match *kernel {
        KernelSpec::Delta { eta } => {
            eta * p.intervals().map(|(a, b, q)| q * q * (b - a)).sum::<T>()
        }
        _ => g * g * kernel.eval_unchecked(T::zero()),
    }
}
