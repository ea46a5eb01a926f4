//! The encoding `(a, b) ↦ (a ⊕ b, b \ a)` and its split variant
//! `(a_L ⊕ b_L, a_L \ b_L, a_R ⊕ b_R, a_R \ b_R)`.
//!
//! The residue is kept at full length; projecting it onto the support of the
//! symmetric difference is left to callers.

use std::collections::HashSet;

use serde::Serialize;

use super::pair::CodePair;
use super::word::TernaryWord;
use crate::coords::{low_mask, CoordSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplitEncoding {
    pub l_set: CoordSet,
    /// `a_L ⊕ b_L`, packed to `|L|` bits.
    pub left_sym_diff: u64,
    /// `a_L \ b_L`, packed to `|L|` bits.
    pub left_residue: u64,
    /// `a_R ⊕ b_R`, packed to `|R|` bits.
    pub right_sym_diff: u64,
    /// `a_R \ b_R`, packed to `|R|` bits.
    pub right_residue: u64,
}

impl SplitEncoding {
    /// Reconstructs `b - a` from the four blocks alone.
    pub fn difference(&self) -> TernaryWord {
        let l = self.l_set;
        let r = l.complement();
        let sym = l.scatter(self.left_sym_diff) | r.scatter(self.right_sym_diff);
        let a_only = l.scatter(self.left_residue) | r.scatter(self.right_residue);
        TernaryWord::from_planes(super::word::TernaryKind::Difference, l.n(), sym & !a_only, a_only)
            .expect("residue lies inside the symmetric difference")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EncodedPair {
    pub word_length: usize,
    /// `a ⊕ b`.
    pub sym_diff: u64,
    /// `b \ a`; always a subset of `sym_diff`.
    pub residue: u64,
    pub split: Option<SplitEncoding>,
}

impl EncodedPair {
    /// Reconstructs `b - a`: +1 on the residue, -1 on the rest of the
    /// symmetric difference.
    pub fn difference(&self) -> TernaryWord {
        TernaryWord::from_planes(
            super::word::TernaryKind::Difference,
            self.word_length,
            self.residue,
            self.sym_diff & !self.residue,
        )
        .expect("residue lies inside the symmetric difference")
    }
}

pub fn encode_eta(n: usize, a: u64, b: u64, split: Option<&CoordSet>) -> Result<EncodedPair> {
    let mask = low_mask(n);
    for w in [a, b] {
        if w & !mask != 0 {
            return Err(Error::WordOutOfRange { word: w, n });
        }
    }
    let split = match split {
        None => None,
        Some(l) if l.n() != n => return Err(Error::LengthMismatch { left: n, right: l.n() }),
        Some(l) => {
            let r = l.complement();
            Some(SplitEncoding {
                l_set: *l,
                left_sym_diff: l.project(a ^ b),
                left_residue: l.project(a & !b),
                right_sym_diff: r.project(a ^ b),
                right_residue: r.project(a & !b),
            })
        }
    };
    Ok(EncodedPair { word_length: n, sym_diff: a ^ b, residue: b & !a, split })
}

/// Number of pairs in `A × B` whose encoding repeats an earlier one. Zero
/// exactly when the pair is a UDCP.
pub fn eta_collisions(pair: &CodePair, split: Option<&CoordSet>) -> Result<usize> {
    let n = pair.word_length();
    let mut seen = HashSet::with_capacity(pair.product_size() as usize);
    let mut collisions = 0;
    for &a in pair.a().words() {
        for &b in pair.b().words() {
            if !seen.insert(encode_eta(n, a, b, split)?) {
                collisions += 1;
            }
        }
    }
    Ok(collisions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::BinaryCode;

    #[test]
    fn hand_example() {
        let e = encode_eta(2, 0b01, 0b10, None).unwrap();
        assert_eq!((e.sym_diff, e.residue), (0b11, 0b10));
        assert_eq!(e.difference(), TernaryWord::difference(2, 0b10, 0b01));
    }

    #[test]
    fn equal_words_encode_to_zero() {
        let e = encode_eta(4, 0b1011, 0b1011, None).unwrap();
        assert_eq!((e.sym_diff, e.residue), (0, 0));
    }

    #[test]
    fn split_blocks_reconstruct_difference() {
        let l = CoordSet::from_one_based(5, &[1, 4]).unwrap();
        for a in 0..32u64 {
            for b in 0..32u64 {
                let e = encode_eta(5, a, b, Some(&l)).unwrap();
                assert_eq!(e.residue & !e.sym_diff, 0);
                let diff = TernaryWord::difference(5, b, a);
                assert_eq!(e.difference(), diff);
                assert_eq!(e.split.unwrap().difference(), diff);
            }
        }
    }

    #[test]
    fn injective_on_kasami_lin() {
        assert_eq!(eta_collisions(&CodePair::kasami_lin(), None).unwrap(), 0);
        let cube = BinaryCode::full_cube(2).unwrap();
        let bad = CodePair::new(cube.clone(), cube).unwrap();
        assert!(eta_collisions(&bad, None).unwrap() > 0);
    }

    #[test]
    fn rejects_wide_words() {
        assert!(encode_eta(2, 0b100, 0, None).is_err());
        let l = CoordSet::full(3);
        assert!(encode_eta(2, 0, 0, Some(&l)).is_err());
    }
}
