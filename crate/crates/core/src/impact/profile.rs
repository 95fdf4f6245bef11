use crate::error::{ImpactError, Result};
use crate::scalar::{lit, Real};

/// A block trade of `volume` executed at `time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse<T> {
    pub time: T,
    pub volume: T,
}

impl<T> Impulse<T> {
    pub fn new(time: T, volume: T) -> Self {
        Self { time, volume }
    }
}

/// Piecewise-constant trading rate on a time grid plus block trades.
///
/// `rates[i]` applies on `[grid[i], grid[i+1])`. Positive rates and volumes
/// sell into cash.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile<T> {
    grid: Vec<T>,
    rates: Vec<T>,
    impulses: Vec<Impulse<T>>,
}

impl<T: Real> RateProfile<T> {
    pub fn new(grid: Vec<T>, rates: Vec<T>, mut impulses: Vec<Impulse<T>>) -> Result<Self> {
        if grid.is_empty() != rates.is_empty()
            || (!grid.is_empty() && grid.len() != rates.len() + 1)
        {
            return Err(ImpactError::InvalidParameter(format!(
                "grid of {} points cannot carry {} rates",
                grid.len(),
                rates.len()
            )));
        }
        if grid.iter().chain(&rates).any(|v| !v.is_finite()) {
            return Err(ImpactError::InvalidParameter(
                "profile values must be finite".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ImpactError::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        if impulses
            .iter()
            .any(|i| !(i.time.is_finite() && i.volume.is_finite()))
        {
            return Err(ImpactError::InvalidParameter(
                "impulses must be finite".into(),
            ));
        }
        impulses.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));
        Ok(Self {
            grid,
            rates,
            impulses,
        })
    }

    /// Constant `rate` on `[0, horizon]`.
    pub fn constant(rate: T, horizon: T) -> Result<Self> {
        Self::new(vec![T::zero(), horizon], vec![rate], Vec::new())
    }

    /// Block trades only.
    pub fn from_impulses(impulses: Vec<Impulse<T>>) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), impulses)
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    pub fn impulses(&self) -> &[Impulse<T>] {
        &self.impulses
    }

    /// `(start, end, rate)` of each interval.
    pub fn intervals(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.grid
            .windows(2)
            .zip(&self.rates)
            .map(|(w, &q)| (w[0], w[1], q))
    }

    /// Earliest time at which the profile trades.
    pub fn start(&self) -> Option<T> {
        let g = self.grid.first().copied();
        let i = self.impulses.first().map(|i| i.time);
        match (g, i) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Net traded volume `Σ qᵢΔtᵢ + Σ vⱼ`.
    pub fn total_volume(&self) -> T {
        self.intervals().map(|(a, b, q)| q * (b - a)).sum::<T>()
            + self.impulses.iter().map(|i| i.volume).sum::<T>()
    }

    /// Gross traded volume `Σ |qᵢ|Δtᵢ + Σ |vⱼ|`.
    pub fn gross_volume(&self) -> T {
        self.intervals()
            .map(|(a, b, q)| q.abs() * (b - a))
            .sum::<T>()
            + self.impulses.iter().map(|i| i.volume.abs()).sum::<T>()
    }

    /// Rate in force at `t` (intervals are closed on the left).
    pub fn rate_at(&self, t: T) -> T {
        self.intervals()
            .find(|&(a, b, _)| t >= a && t < b)
            .map_or(T::zero(), |(_, _, q)| q)
    }

    pub fn is_zero(&self) -> bool {
        self.rates.iter().all(|q| *q == T::zero())
            && self.impulses.iter().all(|i| i.volume == T::zero())
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            grid: self.grid.clone(),
            rates: self.rates.iter().map(|&q| q * factor).collect(),
            impulses: self
                .impulses
                .iter()
                .map(|i| Impulse::new(i.time, i.volume * factor))
                .collect(),
        }
    }

    /// Sum of two profiles on the union of their grids.
    pub fn superpose(&self, other: &Self) -> Self {
        let mut grid: Vec<T> = self.grid.iter().chain(&other.grid).copied().collect();
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
        grid.dedup();
        let rates = grid
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) * lit(0.5);
                self.rate_at(mid) + other.rate_at(mid)
            })
            .collect();
        let mut impulses = self.impulses.clone();
        impulses.extend_from_slice(&other.impulses);
        impulses.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));
        Self {
            grid,
            rates,
            impulses,
        }
    }
}

/// Temporary impact sampled at a set of times.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactPath<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_profiles() {
        assert!(RateProfile::new(vec![0.0, 1.0], vec![1.0, 2.0], vec![]).is_err());
        assert!(RateProfile::new(vec![0.0, 0.0], vec![1.0], vec![]).is_err());
        assert!(RateProfile::new(vec![0.0, 1.0], vec![f64::NAN], vec![]).is_err());
        assert!(RateProfile::<f64>::new(vec![], vec![], vec![]).is_ok());
    }

    #[test]
    fn volumes() {
        let p = RateProfile::new(
            vec![0.0, 1.0, 3.0],
            vec![2.0, -1.0],
            vec![Impulse::new(0.5, 0.25)],
        )
        .unwrap();
        assert_eq!(p.total_volume(), 0.25);
        assert_eq!(p.gross_volume(), 4.25);
        assert_eq!(p.rate_at(1.0), -1.0);
        assert_eq!(p.rate_at(3.0), 0.0);
        assert_eq!(p.start(), Some(0.0));
    }

    #[test]
    fn superposition_merges_grids() {
        let a = RateProfile::constant(1.0, 2.0).unwrap();
        let b = RateProfile::new(vec![1.0, 3.0], vec![2.0], vec![Impulse::new(0.0, 1.0)]).unwrap();
        let s = a.superpose(&b);
        assert_eq!(s.grid(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.rates(), &[1.0, 3.0, 2.0]);
        assert_eq!(s.total_volume(), a.total_volume() + b.total_volume());
    }
}
