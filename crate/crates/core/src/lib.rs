//! Exact and approximate optimization for nonuniform election bribery.
//!
//! * [`election`]: (k,b)-elections, tallies, winners and rule encoders.
//! * [`flow`]: integral min-cost flow with an optimality certificate.
//! * [`kb`]: minimum-cost bribery for (k,b)-elections by a sweep over the
//!   preferred candidate's final score.
//! * [`weighted`]: weighted priced bribery (plurality and approval), the
//!   price-scaling FPTAS, and the negative-bribery reduction.
//! * [`testkit`]: brute-force oracles and a seeded instance generator.

pub mod election;
pub mod error;
pub mod flow;
pub mod kb;
pub mod testkit;
pub mod weighted;

pub use error::{Overflow, MAX_EXACT};
