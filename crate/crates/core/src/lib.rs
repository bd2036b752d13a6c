//! Sequential market games: capital processes under the zero-interest,
//! relative, numéraire and drift protocols, the explicit volatility
//! strategies that play them, and uncentered R/S path statistics.
//!
//! The crate is organised around five pieces:
//!
//! * [`protocol`] settles Investor moves against announced prices and drives
//!   whole games ([`protocol::run_game`]).
//! * [`strategies`] produces move sequences (low/high volatility, relative,
//!   mixtures, drift-compensated) together with their stopping rules and
//!   closed-form capital identities.
//! * [`pathstats`] computes variations, the β function, R/S quantities,
//!   capital factors and Hurst-style exponents.
//! * [`data_io`] reads two-column CSV series and generates synthetic paths.
//! * [`verify`] runs the property suites used by the CLI and
//!   the acceptance tests.

pub mod data_io;
pub mod error;
pub mod pathstats;
pub mod protocol;
pub mod strategies;
pub mod verify;

pub use error::{Error, Result};
pub use protocol::{
    run_game, CapitalTrajectory, DriftScenario, Flavor, GameInput, NumerairePair, PricePath,
    Protocol,
};
pub use strategies::{StrategySpec, StrategyState};
