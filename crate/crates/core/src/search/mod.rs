//! Exhaustive and branch-and-bound search for extremal pairs at small `n`.

mod battery;
mod bnb;
mod clique;
mod graph;
mod random;

pub use battery::curated_battery;
pub use bnb::{
    brute_force_max_product, exhaustive_max_product, max_b_given_a_floor, unbalanced_frontier, FrontierPoint,
    FrontierReport, Objective, ProductCaps, RefutedRange, SearchLog, SearchOutcome, SearchSpec,
};
pub use clique::{has_clique, max_clique};
pub use graph::{CompatGraph, MAX_GRAPH_N};
pub use random::random_udcp;

use crate::code::{product_compose, CodePair};
use crate::error::{Error, Result};

/// The `k`-fold product of the Kasami–Lin pair: `n = 2k`, `|A| = 3^k`,
/// `|B| = 2^k`.
pub fn kasami_tower(k: usize) -> Result<CodePair> {
    if !(1..=8).contains(&k) {
        return Err(Error::domain("k", k as f64, "1..=8"));
    }
    let base = CodePair::kasami_lin();
    let mut pair = base.clone();
    for _ in 1..k {
        pair = product_compose(&pair, &base)?;
    }
    Ok(pair)
}
