//! Uniquely decodable code pairs (UDCPs) for the two-user binary adder channel.
//!
//! Two codes `A, B ⊆ {0,1}^n` form a UDCP when every sum `a + b` taken over the
//! integers is distinct. This crate verifies and composes such pairs, computes
//! exact and sampled probabilities under correlated noise on the hypercube,
//! evaluates the isoperimetric and counting bounds that limit the rate of `B`
//! when `A` is nearly the whole cube, and searches for extremal pairs at small
//! word lengths.
//!
//! Module map:
//!
//! * [`code`]: binary codes, sumsets, censuses, encodings, dense subcodes.
//! * [`noise`]: correlated distributions, exact joint probabilities, split finding.
//! * [`bounds`]: entropy helpers, rate bound solvers, certified inequality checks.
//! * [`search`]: branch-and-bound search for optimal pairs and frontiers.

pub mod bounds;
pub mod code;
pub mod coords;
pub mod error;
pub mod math;
pub mod noise;
pub mod search;

pub use code::{BinaryCode, CodePair, DistanceCensus, TernaryWord};
pub use coords::CoordSet;
pub use error::{Error, Result};
