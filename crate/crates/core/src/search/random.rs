use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::code::{BinaryCode, CodePair};
use crate::error::Result;

/// A random uniquely decodable pair: a random `B` of random size, then a
/// greedily grown maximal `A` in random order (every `a - a'` must avoid
/// `B - B`). Works for any `n <= 16`.
pub fn random_udcp<R: Rng>(n: usize, max_b: usize, rng: &mut R) -> Result<CodePair> {
    assert!((1..=16).contains(&n) && max_b >= 1);
    let words = 1u64 << n;
    let mut pool: Vec<u64> = (0..words).collect();
    pool.shuffle(rng);
    let b_size = rng.random_range(1..=max_b.min(words as usize));
    let b = pool[..b_size].to_vec();
    let diffs: HashSet<(u64, u64)> = b.iter().flat_map(|&x| b.iter().map(move |&y| (x & !y, y & !x))).collect();
    pool.shuffle(rng);
    let mut a: Vec<u64> = Vec::new();
    for &x in &pool {
        if a.iter().all(|&y| !diffs.contains(&(x & !y, y & !x))) {
            a.push(x);
        }
    }
    CodePair::new(BinaryCode::new(n, a)?, BinaryCode::new(n, b)?)
}
