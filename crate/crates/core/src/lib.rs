//! Equilibria of the EV-charging aggregative game with coalitions.
//!
//! Stations choose per-slot charging schedules that meet a fixed total demand.
//! They pay a linear, load-dependent price and a quadratic penalty for
//! deviating from a desired schedule. A coalition minimizes its members' summed
//! cost jointly while everyone else acts alone.
//!
//! * [`model`]: scenarios, profiles, costs, the coalition block matrix.
//! * [`equilibrium`]: closed-form and KKT solutions, positive-definiteness checks.
//! * [`oracle`]: best-response dynamics, an independent verification path.
//! * [`analysis`]: welfare ratios and the conditions deciding when a coalition hurts.
//! * [`scenarios`]: experiment builders with seeded randomness.
//! * [`format`]: scenario files, result records, sweep CSV and comparison tables.

pub mod analysis;
pub mod equilibrium;
pub mod error;
pub mod format;
pub mod model;
pub mod oracle;
pub mod scenarios;

pub use error::{Error, Result};
pub use model::{CoalitionStructure, Profile, Scenario};
