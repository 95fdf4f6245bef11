use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ImpactError, Result};
use crate::kernels::KernelSpec;
use crate::scalar::{from_usize, lit, Real};

use super::functionals::{cycle_work, profile_scale, KernelCache};
use super::profile::RateProfile;

/// Intervals in a random round-trip profile.
pub const RANDOM_INTERVALS: usize = 16;

/// Round-trip profile on a uniform grid over `[0, horizon]`: i.i.d. rates in
/// `[−1, 1]`, the last one chosen to make the net volume zero.
pub fn random_round_trip<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    intervals: usize,
    horizon: T,
) -> Result<RateProfile<T>> {
    if intervals < 2 {
        return Err(ImpactError::InvalidParameter(
            "a round trip needs at least two intervals".into(),
        ));
    }
    let n = from_usize::<T>(intervals);
    let grid: Vec<T> = (0..=intervals)
        .map(|i| horizon * from_usize::<T>(i) / n)
        .collect();
    let mut rates: Vec<T> = (0..intervals - 1)
        .map(|_| lit::<T>(rng.gen_range(-1.0..=1.0)))
        .collect();
    let sum: T = rates.iter().copied().sum();
    rates.push(-sum);
    RateProfile::new(grid, rates, Vec::new())
}

/// Outcome of one profile of an arbitrage sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripSample<T> {
    pub index: usize,
    pub work: T,
    pub scale: T,
}

impl<T: Real> RoundTripSample<T> {
    /// `work ≥ −tolerance·scale`.
    pub fn passes(&self, tolerance: T) -> bool {
        self.work >= -tolerance * self.scale
    }
}

/// Cycle work of `count` random round trips drawn from a ChaCha8 stream
/// seeded with `seed`. Profiles are drawn sequentially and evaluated in
/// parallel; results come back in draw order.
pub fn arbitrage_sweep<T: Real>(
    kernel: &KernelSpec<T>,
    count: usize,
    seed: u64,
    intervals: usize,
    horizon: T,
) -> Result<Vec<RoundTripSample<T>>> {
    kernel.validate()?;
    if !(horizon > T::zero() && horizon.is_finite()) {
        return Err(ImpactError::InvalidParameter(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profiles = (0..count)
        .map(|_| random_round_trip(&mut rng, intervals, horizon))
        .collect::<Result<Vec<_>>>()?;
    profiles
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let work = cycle_work(p, &mut KernelCache::new(kernel))?;
            Ok(RoundTripSample {
                index,
                work,
                scale: profile_scale(p, kernel),
            })
        })
        .collect()
}
