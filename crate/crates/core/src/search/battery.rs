use super::bnb::{exhaustive_max_product, unbalanced_frontier, SearchSpec};
use super::kasami_tower;
use super::random::random_udcp;
use crate::code::{product_compose, BinaryCode, CodePair};
use crate::error::Result;
use crate::noise::rng_for;

/// A deterministic collection of verified pairs with `n <= max_n`: Kasami–Lin
/// towers, proved optima and frontier witnesses for `n <= 4`, their products
/// with the trivial length-1 pair, and `random_per_n` random pairs per length.
pub fn curated_battery(max_n: usize, random_per_n: usize, seed: u64) -> Result<Vec<CodePair>> {
    let mut out = Vec::new();
    for k in 1..=max_n / 2 {
        out.push(kasami_tower(k)?);
    }
    for n in 1..=max_n.min(4) {
        out.push(exhaustive_max_product(&SearchSpec::max_product(n))?.point.witness);
        out.extend(unbalanced_frontier(&SearchSpec::frontier(n, None))?.points.into_iter().map(|p| p.witness));
    }
    let pad = CodePair::new(BinaryCode::full_cube(1)?, BinaryCode::singleton(1, 0)?)?;
    let padded: Vec<CodePair> =
        out.iter().filter(|p| p.word_length() < max_n).map(|p| product_compose(p, &pad)).collect::<Result<_>>()?;
    out.extend(padded);
    let mut rng = rng_for(seed, 0);
    for n in 1..=max_n {
        for _ in 0..random_per_n {
            out.push(random_udcp(n, 1 << (n / 2 + 1), &mut rng)?);
        }
    }
    Ok(out)
}
