//! Choosing `L` with `|L|/n` in `1/2 ± √(ln2·ε/2)` and `|B_L|` large.

use rand::seq::index::sample as sample_indices;
use serde::Serialize;

use super::fat_layer::in_fat_window;
use super::sample::rng_for;
use crate::code::{distance_census, CodePair};
use crate::coords::{coord_bit, low_mask, CoordSet};
use crate::error::{Error, Result};

/// Largest `n` accepted by the exhaustive mode.
pub const EXHAUSTIVE_SPLIT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SplitMode {
    Exhaustive,
    Greedy,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub n: usize,
    pub mode: SplitMode,
    pub epsilon: f64,
    pub beta: f64,
    pub l_set: CoordSet,
    pub lambda: f64,
    pub b_projection: usize,
    pub pi: f64,
    /// Interval for λ.
    pub window: (f64, f64),
    /// The admissible `|L|`.
    pub window_sizes: Vec<usize>,
    pub candidates: u64,
    /// Pairs `(a, b)` with `|a ⊕ b|` inside the window.
    pub fat_pairs: u64,
    /// `2|P| >= |A||B|`; together with the UDCP property it yields the floor.
    pub fat_premise: bool,
    /// `|A| >= 2^((1-ε)n)`.
    pub density_precondition: bool,
    /// `log2|P|/n - 1`: by injectivity of `(a, b) ↦ (a ⊕ b, b \ a)` some
    /// window set reaches it, premise or not.
    pub pigeonhole_floor: f64,
    /// `β - ε - 1/n`.
    pub guarantee_floor: f64,
    pub guarantee_met: bool,
}

/// The admissible sizes `k` with `k/n ∈ 1/2 ± √(ln2·ε/2)`.
pub fn split_window(n: usize, epsilon: f64) -> Result<((f64, f64), Vec<usize>)> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    let w = (std::f64::consts::LN_2 * epsilon / 2.0).sqrt();
    let sizes: Vec<usize> = (0..=n).filter(|&k| in_fat_window(k, n, w)).collect();
    let window = (0.5 - w, 0.5 + w);
    if sizes.is_empty() {
        return Err(Error::EmptyWindow { n, lo: window.0, hi: window.1 });
    }
    Ok((window, sizes))
}

/// Better means larger projection, then smaller `|L|`, then the
/// lexicographically smaller coordinate list (the larger mask).
fn better(size: usize, mask: u64, best: Option<(usize, u64)>) -> bool {
    match best {
        None => true,
        Some((bs, bm)) => {
            size > bs
                || (size == bs
                    && (mask.count_ones() < bm.count_ones() || (mask.count_ones() == bm.count_ones() && mask > bm)))
        }
    }
}

fn next_same_weight(v: u64) -> u64 {
    let t = v | (v - 1);
    let shifted = if v == 0 { 0 } else { (!t & t.wrapping_add(1)).wrapping_sub(1) >> (v.trailing_zeros() + 1) };
    t.wrapping_add(1) | shifted
}

fn exhaustive(pair: &CodePair, sizes: &[usize]) -> Result<(u64, u64)> {
    let n = pair.word_length();
    if n > EXHAUSTIVE_SPLIT_LIMIT {
        return Err(Error::TooLarge(format!("exhaustive split needs n <= {EXHAUSTIVE_SPLIT_LIMIT}, got {n}")));
    }
    let full = low_mask(n);
    let mut best = None;
    let mut count = 0u64;
    for &k in sizes {
        if k == 0 {
            count += 1;
            let size = 1;
            if better(size, 0, best) {
                best = Some((size, 0));
            }
            continue;
        }
        let mut mask = low_mask(k);
        while mask & !full == 0 && mask != 0 {
            count += 1;
            let size = pair.b().projection_size(&CoordSet::from_mask(n, mask)?);
            if better(size, mask, best) {
                best = Some((size, mask));
            }
            if k == n {
                break;
            }
            mask = next_same_weight(mask);
        }
    }
    let (_, mask) = best.expect("window is nonempty");
    Ok((mask, count))
}

fn greedy(pair: &CodePair, sizes: &[usize]) -> Result<(u64, u64)> {
    let n = pair.word_length();
    let top = *sizes.last().expect("window is nonempty");
    let mut mask = 0u64;
    let mut best = None;
    let mut count = 0u64;
    for k in 0..=top {
        if sizes.contains(&k) {
            let size = pair.b().projection_size(&CoordSet::from_mask(n, mask)?);
            if better(size, mask, best) {
                best = Some((size, mask));
            }
        }
        if k == top {
            break;
        }
        let mut pick: Option<(usize, u64)> = None;
        for j in 0..n {
            let bit = coord_bit(n, j);
            if mask & bit != 0 {
                continue;
            }
            count += 1;
            let size = pair.b().projection_size(&CoordSet::from_mask(n, mask | bit)?);
            if pick.is_none_or(|(s, _)| size > s) {
                pick = Some((size, bit));
            }
        }
        mask |= pick.expect("a free coordinate remains").1;
    }
    let (_, mask) = best.expect("window is nonempty");
    Ok((mask, count))
}

fn sampled(pair: &CodePair, sizes: &[usize], samples: u64, seed: u64) -> Result<(u64, u64)> {
    if samples == 0 {
        return Err(Error::domain("samples", 0.0, ">= 1"));
    }
    let n = pair.word_length();
    let mut rng = rng_for(seed, 0);
    let mut best = None;
    for _ in 0..samples {
        let k = sizes[sample_indices(&mut rng, sizes.len(), 1).index(0)];
        let mask = sample_indices(&mut rng, n, k).iter().fold(0u64, |m, j| m | coord_bit(n, j));
        let size = pair.b().projection_size(&CoordSet::from_mask(n, mask)?);
        if better(size, mask, best) {
            best = Some((size, mask));
        }
    }
    let (_, mask) = best.expect("at least one sample");
    Ok((mask, samples))
}

/// `epsilon` defaults to the pair's own `1 - log2|A|/n`.
pub fn find_split(pair: &CodePair, mode: SplitMode, epsilon: Option<f64>) -> Result<SplitReport> {
    if !pair.is_udcp() {
        return Err(Error::NotVerified);
    }
    let n = pair.word_length();
    let epsilon = epsilon.unwrap_or_else(|| pair.epsilon().clamp(0.0, 1.0));
    let (window, window_sizes) = split_window(n, epsilon)?;
    let (mask, candidates) = match mode {
        SplitMode::Exhaustive => exhaustive(pair, &window_sizes)?,
        SplitMode::Greedy => greedy(pair, &window_sizes)?,
        SplitMode::Sampled { samples, seed } => sampled(pair, &window_sizes, samples, seed)?,
    };
    let l_set = CoordSet::from_mask(n, mask)?;
    let b_projection = pair.b().projection_size(&l_set);
    let nf = n as f64;
    let pi = (b_projection as f64).log2() / nf;
    let beta = pair.beta();

    let gamma = (window.1 - 0.5).max(0.0);
    let census = distance_census(pair, None)?;
    let fat_pairs: u64 = (0..=n).filter(|&d| in_fat_window(d, n, gamma)).map(|d| census.count(d)).sum();
    let product = pair.product_size();
    let guarantee_floor = beta - epsilon - 1.0 / nf;
    Ok(SplitReport {
        n,
        mode,
        epsilon,
        beta,
        l_set,
        lambda: l_set.len() as f64 / nf,
        b_projection,
        pi,
        window,
        window_sizes,
        candidates,
        fat_pairs,
        fat_premise: 2 * fat_pairs >= product,
        density_precondition: pair.alpha() >= 1.0 - epsilon - 1e-12,
        pigeonhole_floor: if fat_pairs == 0 { f64::NEG_INFINITY } else { (fat_pairs as f64).log2() / nf - 1.0 },
        guarantee_floor,
        guarantee_met: pi >= guarantee_floor - 1e-12,
    })
}
