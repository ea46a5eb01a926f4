//! Dense subcodes with respect to a coordinate split.
//!
//! `A` is ε-dense with respect to `L` when `|A_L| >= 2^(|L| - εn - 1)` and
//! every class `{a' ∈ A : a'_L = a_L}` has at least `2^(n - |L| - εn - 1)`
//! members. All threshold comparisons are exact: ε is a rational and
//! `s >= 2^(p/q)` is decided as `s^q >= 2^p`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::word::BinaryCode;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::math::{int_ge_pow2, rational_to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCheck {
    pub projection_count: usize,
    /// `|L| - εn - 1`.
    pub projection_floor_log2: f64,
    pub projection_ok: bool,
    pub min_class_size: usize,
    /// `n - |L| - εn - 1`.
    pub class_floor_log2: f64,
    pub class_ok: bool,
}

impl DensityCheck {
    pub fn is_dense(&self) -> bool {
        self.projection_ok && self.class_ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseSubcodeReport {
    pub parent: BinaryCode,
    pub subset: BinaryCode,
    pub l_set: CoordSet,
    pub epsilon: f64,
    pub epsilon_exact: String,
    /// Classes kept.
    pub class_count: usize,
    /// Classes in the partition of the parent.
    pub parent_class_count: usize,
    pub min_class_size: usize,
    /// Classes of size at least `|A| / 2^(|L|+1)` are kept.
    pub class_cutoff: f64,
    pub density: DensityCheck,
}

fn eps_n(epsilon: Rational, n: usize) -> Rational {
    epsilon * Rational::from_integer(n as i64)
}

fn check_epsilon(epsilon: Rational) -> Result<()> {
    if epsilon < Rational::from_integer(0) || epsilon > Rational::from_integer(1) {
        return Err(Error::domain("epsilon", rational_to_f64(&epsilon), "[0, 1]"));
    }
    Ok(())
}

fn classes(code: &BinaryCode, l: &CoordSet) -> BTreeMap<u64, Vec<u64>> {
    let mask = l.mask();
    let mut map: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &w in code.words() {
        map.entry(w & mask).or_default().push(w);
    }
    map
}

/// Evaluates both clauses of the density definition by enumeration.
pub fn check_density(code: &BinaryCode, l: &CoordSet, epsilon: Rational) -> Result<DensityCheck> {
    check_epsilon(epsilon)?;
    let n = code.word_length();
    if l.n() != n {
        return Err(Error::LengthMismatch { left: n, right: l.n() });
    }
    let en = eps_n(epsilon, n);
    let k = l.len() as i64;
    let proj_exp = Rational::from_integer(k - 1) - en;
    let class_exp = Rational::from_integer(n as i64 - k - 1) - en;

    let parts = classes(code, l);
    let min_class_size = parts.values().map(Vec::len).min().unwrap_or(0);
    Ok(DensityCheck {
        projection_count: parts.len(),
        projection_floor_log2: rational_to_f64(&proj_exp),
        projection_ok: int_ge_pow2(parts.len() as u128, proj_exp),
        min_class_size,
        class_floor_log2: rational_to_f64(&class_exp),
        class_ok: int_ge_pow2(min_class_size as u128, class_exp),
    })
}

/// Partitions `A` by the projection onto `L` and keeps the union of all
/// classes of size at least `|A| / 2^(|L|+1)`.
///
/// Requires `|A| >= 2^((1-ε)n)`; under that condition the result is ε-dense
/// with respect to `L`, which the returned report re-checks.
pub fn extract_dense_subcode(a: &BinaryCode, l: &CoordSet, epsilon: Rational) -> Result<DenseSubcodeReport> {
    check_epsilon(epsilon)?;
    let n = a.word_length();
    if l.n() != n {
        return Err(Error::LengthMismatch { left: n, right: l.n() });
    }
    let required = Rational::from_integer(n as i64) - eps_n(epsilon, n);
    if !int_ge_pow2(a.len() as u128, required) {
        return Err(Error::BelowDensityThreshold { size: a.len(), required_log2: rational_to_f64(&required) });
    }

    let parts = classes(a, l);
    let scale = 1u128 << (l.len() + 1);
    let total = a.len() as u128;
    let mut kept = Vec::new();
    let mut class_count = 0;
    let mut min_class_size = usize::MAX;
    for members in parts.values() {
        if (members.len() as u128).saturating_mul(scale) >= total {
            class_count += 1;
            min_class_size = min_class_size.min(members.len());
            kept.extend_from_slice(members);
        }
    }
    let subset = BinaryCode::new(n, kept)?;
    let density = check_density(&subset, l, epsilon)?;
    Ok(DenseSubcodeReport {
        parent: a.clone(),
        subset,
        l_set: *l,
        epsilon: rational_to_f64(&epsilon),
        epsilon_exact: epsilon.to_string(),
        class_count,
        parent_class_count: parts.len(),
        min_class_size,
        class_cutoff: total as f64 / scale as f64,
        density,
    })
}
