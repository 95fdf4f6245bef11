//! Optimal liquidation paths under the delta and exponential kernels, and a
//! grid check of the Euler–Lagrange equation for any kernel.
//!
//! Positions are reported for the continuous part of the path. Block trades
//! at the start and end of the horizon are carried separately as
//! `jump_initial` and `jump_terminal`, so `x(0⁻) = positions[0] + jump_initial`
//! and `x(T⁺) = positions[last] - jump_terminal`.

use crate::error::{ImpactError, Result};
use crate::kernels::KernelSpec;
use crate::scalar::{from_usize, lit, Real};

/// Below this value of `k·T` the sinh ratios use their series expansion.
const SERIES_CUTOFF: f64 = 1e-6;

/// Boundary positions, horizon and urgency of a liquidation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryProblem<T> {
    pub x0: T,
    pub x_terminal: T,
    pub horizon: T,
    /// Urgency rate `k` (1/time).
    pub urgency: T,
    /// Exponential-kernel decay rate; required by the exponential solutions only.
    pub beta: Option<T>,
}

/// One point of a closed-form path together with the block trades at the ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub position: T,
    pub jump_initial: T,
    pub jump_terminal: T,
}

/// A sampled position path `x(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub positions: Vec<T>,
    pub jump_initial: T,
    pub jump_terminal: T,
}

impl<T: Real> Trajectory<T> {
    /// Position before the opening block trade.
    pub fn initial_position(&self) -> T {
        self.positions[0] + self.jump_initial
    }

    /// Position after the closing block trade.
    pub fn terminal_position(&self) -> T {
        self.positions[self.positions.len() - 1] - self.jump_terminal
    }

    /// Largest pointwise distance between two paths sampled on the same grid.
    pub fn sup_distance(&self, other: &Trajectory<T>) -> T {
        self.positions
            .iter()
            .zip(&other.positions)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

impl<T: Real> TrajectoryProblem<T> {
    pub fn new(x0: T, x_terminal: T, horizon: T, urgency: T) -> Result<Self> {
        if !(horizon.is_finite() && horizon > T::zero()) {
            return Err(ImpactError::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if !(urgency.is_finite() && urgency >= T::zero()) {
            return Err(ImpactError::InvalidParameter(format!(
                "urgency must be non-negative, got {urgency}"
            )));
        }
        if !(x0.is_finite() && x_terminal.is_finite()) {
            return Err(ImpactError::InvalidParameter(
                "positions must be finite".into(),
            ));
        }
        Ok(Self {
            x0,
            x_terminal,
            horizon,
            urgency,
            beta: None,
        })
    }

    pub fn with_beta(mut self, beta: T) -> Result<Self> {
        if !(beta.is_finite() && beta > T::zero()) {
            return Err(ImpactError::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        self.beta = Some(beta);
        Ok(self)
    }

    /// Delta-kernel problem with urgency `k = √λ`.
    pub fn from_risk_aversion(x0: T, x_terminal: T, horizon: T, lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        Self::new(x0, x_terminal, horizon, lambda.sqrt())
    }

    /// Exponential-kernel problem with `k² = λβ²/(λ + β²)`.
    pub fn exponential_from_risk_aversion(
        x0: T,
        x_terminal: T,
        horizon: T,
        lambda: T,
        beta: T,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        let k = (lambda * beta * beta / (lambda + beta * beta)).sqrt();
        Self::new(x0, x_terminal, horizon, k)?.with_beta(beta)
    }

    fn beta(&self) -> Result<T> {
        self.beta.ok_or_else(|| {
            ImpactError::InvalidParameter("exponential-kernel solution needs beta".into())
        })
    }

    /// Risk aversion `λ = k²β²/(β² - k²)` implied by the urgency of an
    /// exponential-kernel problem.
    pub fn exponential_risk_aversion(&self) -> Result<T> {
        let beta = self.exponential_beta()?;
        let k = self.urgency;
        Ok(k * k * beta * beta / (beta * beta - k * k))
    }

    fn exponential_beta(&self) -> Result<T> {
        let beta = self.beta()?;
        if beta <= self.urgency {
            return Err(ImpactError::InvalidRegime {
                beta: beta.to_f64().unwrap_or(f64::NAN),
                urgency: self.urgency.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(beta)
    }

    fn check_time(&self, t: T) -> Result<()> {
        if t.is_nan() || t < T::zero() || t > self.horizon {
            return Err(ImpactError::Domain(format!(
                "t = {t} outside [0, {}]",
                self.horizon
            )));
        }
        Ok(())
    }

    /// Delta-kernel optimum `X0·sinh(k(T-t))/sinh(kT) + XT·sinh(kt)/sinh(kT)`,
    /// linear interpolation at `k = 0`.
    pub fn ac_position(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        let (k, big_t) = (self.urgency, self.horizon);
        Ok(self.x0 * sinh_ratio(k, big_t - t, big_t) + self.x_terminal * sinh_ratio(k, t, big_t))
    }

    /// Exponential-kernel optimum: the continuous part
    /// `B·[X0·sinh(k(T-t)+A) + XT·sinh(kt+A)]/sinh(kT+2A)` with
    /// `A = atanh(k/β)`, `B = √(1 - k²/β²)`, plus equal block trades at both ends.
    pub fn exp_kernel_point(&self, t: T) -> Result<TrajectoryPoint<T>> {
        self.check_time(t)?;
        let beta = self.exponential_beta()?;
        if self.urgency == T::zero() {
            let jump = self.risk_neutral_jump()?;
            return Ok(TrajectoryPoint {
                position: self.risk_neutral_unchecked(t, jump),
                jump_initial: jump,
                jump_terminal: jump,
            });
        }
        let k = self.urgency;
        let ratio = k / beta;
        let a = ratio.atanh();
        let b = (T::one() - ratio * ratio).sqrt();
        let denom = k * self.horizon + a + a;
        let continuous = |t: T| {
            b * (self.x0 * sinh_quotient(k * (self.horizon - t) + a, denom)
                + self.x_terminal * sinh_quotient(k * t + a, denom))
        };
        Ok(TrajectoryPoint {
            position: continuous(t),
            jump_initial: self.x0 - continuous(T::zero()),
            jump_terminal: continuous(self.horizon) - self.x_terminal,
        })
    }

    /// Size of each block trade of the risk-neutral exponential-kernel path,
    /// `(X0 - XT)/(βT + 2)`.
    pub fn risk_neutral_jump(&self) -> Result<T> {
        let beta = self.beta()?;
        Ok((self.x0 - self.x_terminal) / (beta * self.horizon + lit(2.0)))
    }

    /// Risk-neutral exponential-kernel path: two equal block trades joined by
    /// a straight line.
    pub fn risk_neutral_position(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        let jump = self.risk_neutral_jump()?;
        Ok(self.risk_neutral_unchecked(t, jump))
    }

    fn risk_neutral_unchecked(&self, t: T, jump: T) -> T {
        let big_t = self.horizon;
        (self.x0 - jump) * (big_t - t) / big_t + (self.x_terminal + jump) * t / big_t
    }

    fn grid(&self, points: usize) -> Result<Vec<T>> {
        if points < 2 {
            return Err(ImpactError::Domain(format!(
                "need at least 2 sample points, got {points}"
            )));
        }
        let n = from_usize::<T>(points - 1);
        Ok((0..points)
            .map(|i| {
                if i == points - 1 {
                    self.horizon
                } else {
                    self.horizon * from_usize::<T>(i) / n
                }
            })
            .collect())
    }

    pub fn ac_trajectory(&self, points: usize) -> Result<Trajectory<T>> {
        let times = self.grid(points)?;
        let positions = times
            .iter()
            .map(|&t| self.ac_position(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            times,
            positions,
            jump_initial: T::zero(),
            jump_terminal: T::zero(),
        })
    }

    pub fn exp_kernel_trajectory(&self, points: usize) -> Result<Trajectory<T>> {
        let times = self.grid(points)?;
        let pts = times
            .iter()
            .map(|&t| self.exp_kernel_point(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            times,
            positions: pts.iter().map(|p| p.position).collect(),
            jump_initial: pts[0].jump_initial,
            jump_terminal: pts[0].jump_terminal,
        })
    }

    pub fn risk_neutral_trajectory(&self, points: usize) -> Result<Trajectory<T>> {
        let times = self.grid(points)?;
        let jump = self.risk_neutral_jump()?;
        let positions = times
            .iter()
            .map(|&t| self.risk_neutral_unchecked(t, jump))
            .collect();
        Ok(Trajectory {
            times,
            positions,
            jump_initial: jump,
            jump_terminal: jump,
        })
    }
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if !(lambda.is_finite() && lambda >= T::zero()) {
        return Err(ImpactError::InvalidParameter(format!(
            "risk aversion must be non-negative, got {lambda}"
        )));
    }
    Ok(())
}

/// `sinh(k·a)/sinh(k·b)` for `0 ≤ a ≤ b`, including the `k → 0` limit `a/b`.
fn sinh_ratio<T: Real>(k: T, a: T, b: T) -> T {
    if k * b < lit(SERIES_CUTOFF) {
        let k2 = k * k;
        (a / b) * (T::one() + k2 * (a * a - b * b) / lit(6.0))
    } else {
        sinh_quotient(k * a, k * b)
    }
}

/// `sinh(a)/sinh(b)` for `0 ≤ a`, `0 < b`, safe against overflow.
fn sinh_quotient<T: Real>(a: T, b: T) -> T {
    let two = lit::<T>(2.0);
    (a - b).exp() * (-two * a).exp_m1() / (-two * b).exp_m1()
}

/// Max-norm defect of the optimality condition
/// `2λ·x(t) = d/dt ∫₀ᵀ ẋ(τ)K(|t-τ|)dτ` on the interior grid points,
/// normalized by `|X0 - XT|`.
///
/// The convolution uses trapezoid quadrature of finite-difference rates;
/// block trades enter as `-ΔX0·K(t) - ΔXT·K(T-t)`. For the delta kernel the
/// symmetric convolution reduces to `2η·ẋ(t)`, giving `2η·ẍ` on the right.
pub fn euler_residual<T: Real>(
    traj: &Trajectory<T>,
    kernel: &KernelSpec<T>,
    lambda: T,
) -> Result<T> {
    let n = traj.times.len();
    if n < 66 || traj.positions.len() != n {
        return Err(ImpactError::GridTooCoarse(format!(
            "need at least 64 interior points, got {}",
            n.saturating_sub(2)
        )));
    }
    let h = (traj.times[n - 1] - traj.times[0]) / from_usize::<T>(n - 1);
    let uniform = traj
        .times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= lit::<T>(1e-9) * h.abs().max(T::one()));
    if h.is_nan() || h <= T::zero() || !uniform {
        return Err(ImpactError::GridTooCoarse(
            "times must form a uniform increasing grid".into(),
        ));
    }

    let x = &traj.positions;
    let span = (traj.initial_position() - traj.terminal_position()).abs();
    let scale = if span > T::zero() {
        span
    } else {
        let peak = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if peak > T::zero() {
            peak
        } else {
            T::one()
        }
    };
    let two = lit::<T>(2.0);

    let rhs: Vec<T> = match *kernel {
        KernelSpec::Delta { eta } => (1..n - 1)
            .map(|i| two * eta * (x[i + 1] - two * x[i] + x[i - 1]) / (h * h))
            .collect(),
        _ => {
            let lags: Vec<T> = (0..n)
                .map(|m| kernel.eval_unchecked(h * from_usize::<T>(m)))
                .collect();
            let mut rate = vec![T::zero(); n];
            rate[0] = (-lit::<T>(3.0) * x[0] + lit::<T>(4.0) * x[1] - x[2]) / (two * h);
            rate[n - 1] =
                (lit::<T>(3.0) * x[n - 1] - lit::<T>(4.0) * x[n - 2] + x[n - 3]) / (two * h);
            for i in 1..n - 1 {
                rate[i] = (x[i + 1] - x[i - 1]) / (two * h);
            }
            let conv: Vec<T> = (0..n)
                .map(|i| {
                    let mut acc = T::zero();
                    for (j, &r) in rate.iter().enumerate() {
                        let w = if j == 0 || j == n - 1 {
                            lit(0.5)
                        } else {
                            T::one()
                        };
                        acc += w * r * lags[i.abs_diff(j)];
                    }
                    acc * h - traj.jump_initial * lags[i] - traj.jump_terminal * lags[n - 1 - i]
                })
                .collect();
            (1..n - 1)
                .map(|i| (conv[i + 1] - conv[i - 1]) / (two * h))
                .collect()
        }
    };

    Ok((1..n - 1).zip(rhs).fold(T::zero(), |m, (i, r)| {
        m.max((two * lambda * x[i] - r).abs())
    }) / scale)
}
