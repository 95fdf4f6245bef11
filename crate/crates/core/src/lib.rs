//! Market impact kernels, optimal execution trajectories and execution-cost
//! functionals.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`). The `*F64` aliases below name the double-precision
//! instantiations used by the command-line tool.

pub mod error;
pub mod impact;
pub mod kernels;
pub mod laplace;
pub mod regimes;
pub mod scalar;
pub mod trajectories;

pub use error::{ImpactError, Result};
pub use impact::{
    arbitrage_sweep, constant_rate_cost, continuous_cost, discrete_cost, impact_path,
    rate_for_price_target, round_trip_check, temporary_impact, ImpactPath, Impulse, PriceTarget,
    RateProfile,
};
pub use kernels::{dimension_asymptote, KernelAsymptotics, KernelSpec, OuterBoundary, TailLaw};
pub use laplace::{
    erfcx, gamma, invert_laplace, ln_gamma, InversionConfig, InversionMethod, Inverter,
};
pub use regimes::{
    binary_tree_shortfall, fit_log_log_slope, isochoric_sweep, isochronic_sweep, isotachic_sweep,
    regime_law_check, MarketParams, Mode, Regime, SweepConfig, SweepResult, SweepRow, TreePolicy,
};
pub use scalar::Real;
pub use trajectories::{euler_residual, Trajectory, TrajectoryPoint, TrajectoryProblem};

pub type KernelSpecF64 = KernelSpec<f64>;
pub type KernelSpecF32 = KernelSpec<f32>;
pub type InverterF64 = Inverter<f64>;
pub type TrajectoryProblemF64 = TrajectoryProblem<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type RateProfileF64 = RateProfile<f64>;
pub type RateProfileF32 = RateProfile<f32>;
pub type ImpulseF64 = Impulse<f64>;
pub type SweepConfigF64 = SweepConfig<f64>;
pub type SweepResultF64 = SweepResult<f64>;
