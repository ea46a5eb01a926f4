//! Seeded sampling.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)` and split into independent streams with
//! `set_stream`. A Bernoulli(p) draw consumes one `u64` and succeeds when its
//! top 53 bits, read as an integer, are below `p · 2^53`. A correlated copy
//! consumes exactly one draw per coordinate, coordinate 1 first. Monte-Carlo
//! estimates split the budget into fixed chunks of 2^16 samples; chunk `k`
//! uses stream `k`, so the hit count does not depend on the worker count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::CorrelationSpec;
use crate::code::CodePair;
use crate::coords::{coord_bit, low_mask};
use crate::error::{Error, Result};

const CHUNK: u64 = 1 << 16;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub fn bernoulli<R: RngCore>(rng: &mut R, p: f64) -> bool {
    let threshold = (p * (1u64 << 53) as f64) as u64;
    (rng.next_u64() >> 11) < threshold
}

#[inline]
fn correlated_unchecked<R: RngCore>(x: u64, spec: &CorrelationSpec, rng: &mut R) -> u64 {
    let n = spec.n;
    let l = spec.correlated();
    let keep = spec.agree_probability();
    let mut y = 0u64;
    for j in 0..n {
        let bit = coord_bit(n, j);
        let value = if l.contains(j) {
            let xj = x & bit != 0;
            if bernoulli(rng, keep) {
                xj
            } else {
                !xj
            }
        } else {
            rng.next_u64() >> 63 == 1
        };
        if value {
            y |= bit;
        }
    }
    y
}

pub fn sample_correlated<R: RngCore>(x: u64, spec: &CorrelationSpec, rng: &mut R) -> Result<u64> {
    if x & !low_mask(spec.n) != 0 {
        return Err(Error::WordOutOfRange { word: x, n: spec.n });
    }
    Ok(correlated_unchecked(x, spec, rng))
}

pub fn sample_correlated_seeded(x: u64, spec: &CorrelationSpec, seed: u64) -> Result<u64> {
    sample_correlated(x, spec, &mut rng_for(seed, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub estimate: f64,
    /// Binomial standard error at the estimate.
    pub std_error: f64,
    /// Four standard errors.
    pub radius: f64,
}

/// Estimates `Pr[a ∈ A, b ∈ B]` for uniform `a` and `b` correlated with `a`.
pub fn monte_carlo_joint(pair: &CodePair, spec: &CorrelationSpec, samples: u64, seed: u64) -> Result<McEstimate> {
    let n = pair.word_length();
    if spec.n != n {
        return Err(Error::LengthMismatch { left: n, right: spec.n });
    }
    if samples == 0 {
        return Err(Error::domain("samples", 0.0, ">= 1"));
    }
    let mask = low_mask(n);
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(seed, k);
            let count = CHUNK.min(samples - k * CHUNK);
            let mut hits = 0u64;
            for _ in 0..count {
                let a = rng.next_u64() & mask;
                let b = correlated_unchecked(a, spec, &mut rng);
                if pair.a().contains(a) && pair.b().contains(b) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let estimate = hits as f64 / samples as f64;
    let std_error = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    Ok(McEstimate { samples, hits, seed, estimate, std_error, radius: 4.0 * std_error })
}
