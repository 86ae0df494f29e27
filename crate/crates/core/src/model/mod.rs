//! Domain types and exact arithmetic primitives.
//!
//! Every dollar amount is an integer count of micro-USD, every hour count is
//! an integer count of 10^-4 hours and hourly rates are quoted to the cent, so
//! `count × hours × rate` is always an exact micro-dollar value. Proportions
//! are exact rationals built from counts. Only uncertainty ranges ([`Interval`])
//! use binary floating point.

mod decimal;
pub mod display;
mod domain;
mod fraction;
mod interval;
mod money;
mod rational;

pub use domain::{
    CostBreakdown, FunnelCounts, FunnelCountsBuilder, GenerationProfile, PriceFactors, Severity, Stage,
    StageEffort, TokenPricing,
};
pub use fraction::Fraction;
pub use interval::{Interval, Unit};
pub use money::{ExactMoney, HourlyRate, Hours, Money};
pub use rational::Rational;

/// Parses a USD decimal literal (at most six fractional digits) into [`Money`].
pub fn money_from_usd(dollars: &str) -> crate::Result<Money> {
    Money::from_usd_str(dollars)
}
