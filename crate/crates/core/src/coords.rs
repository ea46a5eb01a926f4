//! Subsets of the coordinate set `[n]`.
//!
//! Words are stored most-significant-bit first: coordinate `1` (0-based index
//! `0`) is bit `n - 1`, so the numeric order of words is the lexicographic
//! order of their `{0,1}` strings. All user-facing coordinates are 1-based.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub const MAX_WORD_LENGTH: usize = 64;

/// Bit holding 0-based coordinate `j` of a length-`n` word.
#[inline]
pub fn coord_bit(n: usize, j: usize) -> u64 {
    debug_assert!(j < n);
    1u64 << (n - 1 - j)
}

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoordSet {
    n: usize,
    mask: u64,
}

impl CoordSet {
    pub fn empty(n: usize) -> Self {
        CoordSet { n, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        CoordSet { n, mask: low_mask(n) }
    }

    /// Builds a set from 1-based coordinates. Repeats are ignored.
    pub fn from_one_based(n: usize, coords: &[usize]) -> Result<Self> {
        if n > MAX_WORD_LENGTH {
            return Err(Error::WordTooLong(n));
        }
        let mut mask = 0;
        for &c in coords {
            if c == 0 || c > n {
                return Err(Error::CoordOutOfRange { coord: c, n });
            }
            mask |= coord_bit(n, c - 1);
        }
        Ok(CoordSet { n, mask })
    }

    /// Builds a set from 0-based coordinate indices.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0;
        for j in indices {
            if j >= n {
                return Err(Error::CoordOutOfRange { coord: j + 1, n });
            }
            mask |= coord_bit(n, j);
        }
        Ok(CoordSet { n, mask })
    }

    /// Wraps a raw bit mask in word bit order.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > MAX_WORD_LENGTH {
            return Err(Error::WordTooLong(n));
        }
        if mask & !low_mask(n) != 0 {
            return Err(Error::WordOutOfRange { word: mask, n });
        }
        Ok(CoordSet { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The set as a bit mask in word bit order.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.n && self.mask & coord_bit(self.n, j) != 0
    }

    pub fn complement(&self) -> Self {
        CoordSet { n: self.n, mask: !self.mask & low_mask(self.n) }
    }

    pub fn union(&self, other: &CoordSet) -> Self {
        debug_assert_eq!(self.n, other.n);
        CoordSet { n: self.n, mask: self.mask | other.mask }
    }

    /// 0-based indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.contains(j))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.indices().map(|j| j + 1).collect()
    }

    /// Restriction of `word` to this set, packed into `len()` bits in
    /// coordinate order.
    pub fn project(&self, word: u64) -> u64 {
        let mut out = 0u64;
        for j in self.indices() {
            out = (out << 1) | u64::from(word & coord_bit(self.n, j) != 0);
        }
        out
    }

    /// Inverse of [`project`](Self::project): spreads `packed` back over the
    /// coordinates of this set, zero elsewhere.
    pub fn scatter(&self, packed: u64) -> u64 {
        let k = self.len();
        let mut out = 0u64;
        for (i, j) in self.indices().enumerate() {
            if packed >> (k - 1 - i) & 1 == 1 {
                out |= coord_bit(self.n, j);
            }
        }
        out
    }
}

impl Serialize for CoordSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for c in self.to_one_based() {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let s = CoordSet::from_one_based(5, &[1, 3, 5]).unwrap();
        assert_eq!(s.to_one_based(), vec![1, 3, 5]);
        assert_eq!(s.mask(), 0b10101);
        assert_eq!(s.complement().to_one_based(), vec![2, 4]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(CoordSet::from_one_based(3, &[0]), Err(Error::CoordOutOfRange { coord: 0, n: 3 })));
        assert!(CoordSet::from_one_based(3, &[4]).is_err());
    }

    #[test]
    fn project_and_scatter() {
        // word 1011, keep coordinates 1,2,4 -> 101
        let s = CoordSet::from_one_based(4, &[1, 2, 4]).unwrap();
        assert_eq!(s.project(0b1011), 0b101);
        assert_eq!(s.scatter(0b101), 0b1001);
        assert_eq!(s.project(s.scatter(0b110)), 0b110);
    }

    #[test]
    fn full_set_of_64() {
        let s = CoordSet::full(64);
        assert_eq!(s.len(), 64);
        assert_eq!(s.project(u64::MAX), u64::MAX);
    }
}
