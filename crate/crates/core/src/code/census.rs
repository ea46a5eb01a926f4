use serde::Serialize;

use super::pair::CodePair;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::math::binomial;

/// Counts `W_d` of pairs `(a, b) ∈ A × B` at Hamming distance `d`, measured
/// on all coordinates or only on `restriction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceCensus {
    pub n: usize,
    pub restriction: Option<CoordSet>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl DistanceCensus {
    /// Number of coordinates the distance is measured on.
    pub fn measured_len(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, d: usize) -> u64 {
        self.counts.get(d).copied().unwrap_or(0)
    }
}

/// Largest dimension for the transform-based census.
const WHT_MAX_N: usize = 20;

pub fn distance_census(pair: &CodePair, restriction: Option<&CoordSet>) -> Result<DistanceCensus> {
    let n = pair.word_length();
    let set = match restriction {
        Some(l) if l.n() != n => return Err(Error::LengthMismatch { left: n, right: l.n() }),
        Some(l) => *l,
        None => CoordSet::full(n),
    };
    let m = set.len();
    let mask = set.mask();
    let mut counts = vec![0u64; m + 1];

    let pairwise_cost = pair.product_size() as f64;
    let transform_cost = 4.0 * n as f64 * (1u64 << n.min(WHT_MAX_N)) as f64;
    if n <= WHT_MAX_N && pairwise_cost > transform_cost {
        let xor_counts = xor_correlation(pair);
        for (z, &c) in xor_counts.iter().enumerate() {
            if c != 0 {
                counts[(z as u64 & mask).count_ones() as usize] += c;
            }
        }
    } else {
        for &a in pair.a().words() {
            for &b in pair.b().words() {
                counts[((a ^ b) & mask).count_ones() as usize] += 1;
            }
        }
    }

    let total = counts.iter().sum();
    debug_assert_eq!(total, pair.product_size());
    Ok(DistanceCensus { n, restriction: restriction.copied(), counts, total })
}

/// `c[z] = #{(a, b) ∈ A × B : a ⊕ b = z}` via the integer Walsh–Hadamard
/// transform. All arithmetic is exact: intermediate magnitudes stay below
/// `2^(3n) <= 2^60`.
fn xor_correlation(pair: &CodePair) -> Vec<u64> {
    let n = pair.word_length();
    let size = 1usize << n;
    let mut fa = vec![0i64; size];
    let mut fb = vec![0i64; size];
    for &a in pair.a().words() {
        fa[a as usize] = 1;
    }
    for &b in pair.b().words() {
        fb[b as usize] = 1;
    }
    walsh_hadamard(&mut fa);
    walsh_hadamard(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    walsh_hadamard(&mut fa);
    fa.into_iter()
        .map(|v| {
            debug_assert!(v >= 0 && v % size as i64 == 0);
            (v >> n) as u64
        })
        .collect()
}

fn walsh_hadamard(data: &mut [i64]) {
    let mut h = 1;
    while h < data.len() {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

/// `C(n, d) · 2^min(d, n-d)`.
pub fn van_tilborg_bound(n: usize, d: usize) -> u128 {
    binomial(n, d) << d.min(n - d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanTilborgRow {
    pub d: usize,
    pub count: u64,
    pub bound: u128,
    pub slack: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanTilborgReport {
    pub n: usize,
    pub rows: Vec<VanTilborgRow>,
    pub min_slack: i128,
}

/// Compares the census of a verified UDCP with the per-distance cap. A
/// negative slack is reported as an error: it cannot happen for a genuine
/// UDCP.
pub fn van_tilborg_check(pair: &CodePair) -> Result<VanTilborgReport> {
    if !pair.is_udcp() {
        return Err(Error::NotVerified);
    }
    let census = distance_census(pair, None)?;
    let n = census.n;
    let mut rows = Vec::with_capacity(n + 1);
    for (d, &count) in census.counts.iter().enumerate() {
        let bound = van_tilborg_bound(n, d);
        let slack = bound as i128 - count as i128;
        if slack < 0 {
            return Err(Error::VanTilborgViolation { d, count, bound });
        }
        rows.push(VanTilborgRow { d, count, bound, slack });
    }
    let min_slack = rows.iter().map(|r| r.slack).min().unwrap_or(0);
    Ok(VanTilborgReport { n, rows, min_slack })
}
