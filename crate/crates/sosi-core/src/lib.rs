//! Step out-Step in (SoSi) sequencing games.
//!
//! A coalition of players in a single-machine queue may reorder itself to
//! reduce its total weighted completion time, as long as no member moves
//! ahead of a non-member that was originally in front of it. This crate
//! computes coalition values exactly with a greedy algorithm, verifies
//! them against a brute-force enumeration of admissible orders, and
//! analyzes the resulting cooperative game (supermodularity, Shapley
//! value, core membership). All arithmetic is exact rational; no floating
//! point is used anywhere.
//!
//! Modules:
//! - [`sched`]: instances, orders, coalitions, costs, Smith's rule, and
//!   the swap-saving delta calculus.
//! - [`engine`]: admissibility, the greedy algorithm with trace, the
//!   brute-force oracle, and value tables.
//! - [`coop`]: supermodularity/monotonicity/modularity checks, marginal
//!   vectors, Shapley value, and core membership.
//! - [`io`]: JSON instance files and seeded random generation.

#[allow(clippy::result_large_err)]
pub mod coop;
pub mod engine;
pub mod error;
pub mod io;
pub mod rational;
pub mod sched;

pub use error::{Error, Result};
pub use rational::Rational;
pub use sched::{Coalition, Instance, Order, PlayerId};
