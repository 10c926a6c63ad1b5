//! Desk-scale laboratory for bilinear exponential and character sums with
//! reciprocals of polynomials over prime fields: exact sum evaluators,
//! congruence-solution counters, the pigeonhole coefficient-shrinking
//! reduction, and an exact-rational calculus over bound exponents.

pub mod accum;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod counting;
pub mod csvout;
pub mod error;
pub mod field;
pub mod pigeonhole;
pub mod regions;
pub mod rng;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
