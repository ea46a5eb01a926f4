use std::fmt;

use serde::{Serialize, Serializer};

use crate::coords::{coord_bit, low_mask, CoordSet, MAX_WORD_LENGTH};
use crate::error::{Error, Result};

/// Renders the low `n` bits of `word` as a `{0,1}` string, coordinate 1 first.
pub fn format_word(word: u64, n: usize) -> String {
    (0..n).map(|j| if word & coord_bit(n, j) != 0 { '1' } else { '0' }).collect()
}

/// Parses a `{0,1}` string; the length of the string is the word length.
pub fn parse_word(text: &str) -> Result<(u64, usize)> {
    let n = text.len();
    if n > MAX_WORD_LENGTH {
        return Err(Error::WordTooLong(n));
    }
    let mut word = 0u64;
    for (i, c) in text.chars().enumerate() {
        word <<= 1;
        match c {
            '0' => {}
            '1' => word |= 1,
            other => {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("invalid character {other:?} at position {}", i + 1),
                })
            }
        }
    }
    Ok((word, n))
}

/// An ordered set of distinct words of a common length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    n: usize,
    words: Vec<u64>,
}

impl BinaryCode {
    /// Builds a code from raw words. Words are sorted; duplicates, empty input
    /// and words wider than `n` bits are rejected.
    pub fn new(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if n > MAX_WORD_LENGTH {
            return Err(Error::WordTooLong(n));
        }
        if words.is_empty() {
            return Err(Error::EmptyCode);
        }
        let mask = low_mask(n);
        if let Some(&w) = words.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::WordOutOfRange { word: w, n });
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateWord(format_word(pair[0], n)));
        }
        Ok(BinaryCode { n, words })
    }

    /// Like [`new`](Self::new) but silently merges duplicates.
    pub fn from_words_dedup(n: usize, mut words: Vec<u64>) -> Result<Self> {
        words.sort_unstable();
        words.dedup();
        Self::new(n, words)
    }

    pub fn from_strs<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let mut n = None;
        let mut parsed = Vec::with_capacity(words.len());
        for w in words {
            let (word, len) = parse_word(w.as_ref())?;
            match n {
                None => n = Some(len),
                Some(m) if m != len => return Err(Error::LengthMismatch { left: m, right: len }),
                _ => {}
            }
            parsed.push(word);
        }
        Self::new(n.ok_or(Error::EmptyCode)?, parsed)
    }

    pub fn full_cube(n: usize) -> Result<Self> {
        if n > 26 {
            return Err(Error::TooLarge(format!("full cube of dimension {n}")));
        }
        Ok(BinaryCode { n, words: (0..1u64 << n).collect() })
    }

    pub fn singleton(n: usize, word: u64) -> Result<Self> {
        Self::new(n, vec![word])
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false; codes are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, word: u64) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    /// `log2 |X| / n`.
    pub fn rate(&self) -> f64 {
        (self.len() as f64).log2() / self.n as f64
    }

    /// `X_P = { x_P : x ∈ X }`, packed into `|P|`-bit words.
    pub fn project(&self, p: &CoordSet) -> Result<BinaryCode> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch { left: self.n, right: p.n() });
        }
        let words = self.words.iter().map(|&w| p.project(w)).collect();
        BinaryCode::from_words_dedup(p.len(), words)
    }

    /// Number of distinct projections onto `p`, without materializing them.
    pub fn projection_size(&self, p: &CoordSet) -> usize {
        let mask = p.mask();
        let mut masked: Vec<u64> = self.words.iter().map(|&w| w & mask).collect();
        masked.sort_unstable();
        masked.dedup();
        masked.len()
    }

    /// Words of `self` followed by words of `other`, coordinate-wise concatenated.
    pub fn concat(&self, other: &BinaryCode) -> Result<BinaryCode> {
        let n = self.n + other.n;
        if n > MAX_WORD_LENGTH {
            return Err(Error::WordTooLong(n));
        }
        let mut words = Vec::with_capacity(self.len() * other.len());
        for &x in &self.words {
            for &y in &other.words {
                words.push((x << other.n) | y);
            }
        }
        BinaryCode::new(n, words)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.words.iter().map(|&w| format_word(w, self.n)).collect()
    }
}

impl Serialize for BinaryCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TernaryKind {
    /// Digits in `{0,1,2}`.
    Sum,
    /// Digits in `{-1,0,1}`.
    Difference,
}

/// A word over a three-letter alphabet stored as two disjoint bit planes.
///
/// For sums, `low` marks digit 1 and `high` marks digit 2. For differences,
/// `low` marks +1 and `high` marks -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord {
    kind: TernaryKind,
    n: usize,
    low: u64,
    high: u64,
}

impl TernaryWord {
    /// `x + y` over the integers.
    #[inline]
    pub fn sum(n: usize, x: u64, y: u64) -> Self {
        TernaryWord { kind: TernaryKind::Sum, n, low: x ^ y, high: x & y }
    }

    /// `x - y` over the integers.
    #[inline]
    pub fn difference(n: usize, x: u64, y: u64) -> Self {
        TernaryWord { kind: TernaryKind::Difference, n, low: x & !y, high: y & !x }
    }

    /// Builds a word from its planes, checking they are disjoint and fit.
    pub fn from_planes(kind: TernaryKind, n: usize, low: u64, high: u64) -> Result<Self> {
        let mask = low_mask(n);
        if low & high != 0 || (low | high) & !mask != 0 {
            return Err(Error::WordOutOfRange { word: low | high, n });
        }
        Ok(TernaryWord { kind, n, low, high })
    }

    pub fn kind(&self) -> TernaryKind {
        self.kind
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn high(&self) -> u64 {
        self.high
    }

    /// Both planes in one integer; unique per word of a given kind and length.
    #[inline]
    pub fn packed(&self) -> u128 {
        (u128::from(self.high) << 64) | u128::from(self.low)
    }

    /// Digit at 0-based coordinate `j`.
    pub fn digit(&self, j: usize) -> i8 {
        let bit = coord_bit(self.n, j);
        let (lo, hi) = (self.low & bit != 0, self.high & bit != 0);
        match (self.kind, lo, hi) {
            (_, false, false) => 0,
            (TernaryKind::Sum, true, _) => 1,
            (TernaryKind::Sum, _, true) => 2,
            (TernaryKind::Difference, true, _) => 1,
            (TernaryKind::Difference, _, true) => -1,
        }
    }

    /// Coordinates (0-based) holding digit `z`, i.e. the preimage `x^{-1}(z)`.
    pub fn preimage(&self, z: i8) -> CoordSet {
        let mask = (0..self.n).filter(|&j| self.digit(j) == z).fold(0u64, |m, j| m | coord_bit(self.n, j));
        CoordSet::from_mask(self.n, mask).expect("mask within word length")
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            let c = match (self.kind, self.digit(j)) {
                (TernaryKind::Sum, d) => (b'0' + d as u8) as char,
                (TernaryKind::Difference, 1) => '+',
                (TernaryKind::Difference, -1) => '-',
                (TernaryKind::Difference, _) => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for TernaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
