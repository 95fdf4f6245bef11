//! Impact of trading profiles and the costs they incur.

mod functionals;
mod profile;
mod rate_for_price;
mod round_trip;

pub use functionals::{
    constant_rate_cost, continuous_cost, discrete_cost, impact_path, profile_scale,
    round_trip_check, temporary_impact, ROUND_TRIP_TOLERANCE,
};
pub use profile::{ImpactPath, Impulse, RateProfile};
pub use rate_for_price::{geometric_grid, rate_for_price_target, required_rate, PriceTarget};
pub use round_trip::{arbitrage_sweep, random_round_trip, RoundTripSample, RANDOM_INTERVALS};
