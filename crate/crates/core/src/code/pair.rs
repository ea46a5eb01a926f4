use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::OnceLock;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::word::{format_word, BinaryCode, TernaryWord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UdcpStatus {
    VerifiedYes,
    VerifiedNo,
    Unchecked,
}

/// Two distinct pairs `(a, b)`, `(a', b')` with `a + b = a' + b'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub first: (u64, u64),
    pub second: (u64, u64),
    pub sum: TernaryWord,
}

impl Collision {
    pub fn describe(&self, n: usize) -> String {
        format!(
            "{} + {} = {} + {} = {}",
            format_word(self.first.0, n),
            format_word(self.first.1, n),
            format_word(self.second.0, n),
            format_word(self.second.1, n),
            self.sum
        )
    }
}

/// A candidate pair `(A, B)` of codes with a write-once verification cache.
#[derive(Clone, Debug)]
pub struct CodePair {
    a: BinaryCode,
    b: BinaryCode,
    status: OnceLock<bool>,
}

impl CodePair {
    pub fn new(a: BinaryCode, b: BinaryCode) -> Result<Self> {
        if a.word_length() != b.word_length() {
            return Err(Error::LengthMismatch { left: a.word_length(), right: b.word_length() });
        }
        if a.word_length() == 0 {
            return Err(Error::domain("word length", 0.0, "1..=64"));
        }
        Ok(CodePair { a, b, status: OnceLock::new() })
    }

    /// The Kasami–Lin pair `A = {00, 01, 11}`, `B = {10, 01}`.
    pub fn kasami_lin() -> Self {
        let a = BinaryCode::from_strs(&["00", "01", "11"]).expect("valid code");
        let b = BinaryCode::from_strs(&["10", "01"]).expect("valid code");
        CodePair::new(a, b).expect("equal lengths")
    }

    pub fn a(&self) -> &BinaryCode {
        &self.a
    }

    pub fn b(&self) -> &BinaryCode {
        &self.b
    }

    pub fn word_length(&self) -> usize {
        self.a.word_length()
    }

    pub fn alpha(&self) -> f64 {
        self.a.rate()
    }

    pub fn beta(&self) -> f64 {
        self.b.rate()
    }

    /// `1 - alpha`.
    pub fn epsilon(&self) -> f64 {
        1.0 - self.alpha()
    }

    pub fn product_size(&self) -> u64 {
        self.a.len() as u64 * self.b.len() as u64
    }

    pub fn status(&self) -> UdcpStatus {
        match self.status.get() {
            Some(true) => UdcpStatus::VerifiedYes,
            Some(false) => UdcpStatus::VerifiedNo,
            None => UdcpStatus::Unchecked,
        }
    }

    /// Whether all sums `a + b` are distinct. The answer is cached.
    pub fn is_udcp(&self) -> bool {
        *self.status.get_or_init(|| !SumTracker::has_collision(self))
    }

    /// Recomputes the answer, ignoring the cache.
    pub fn recheck(&self) -> bool {
        !SumTracker::has_collision(self)
    }

    /// A witness of non-unique decodability, if any.
    pub fn find_collision(&self) -> Option<Collision> {
        let n = self.word_length();
        let mut seen: HashMap<u128, (u64, u64)> = HashMap::with_capacity(self.product_size() as usize);
        for &a in self.a.words() {
            for &b in self.b.words() {
                let s = TernaryWord::sum(n, a, b);
                match seen.entry(s.packed()) {
                    Entry::Occupied(e) => {
                        let _ = self.status.set(false);
                        return Some(Collision { first: *e.get(), second: (a, b), sum: s });
                    }
                    Entry::Vacant(e) => {
                        e.insert((a, b));
                    }
                }
            }
        }
        let _ = self.status.set(true);
        None
    }

    /// Pair with the roles of `A` and `B` exchanged. Unique decodability is
    /// symmetric, so the cache carries over.
    pub fn swapped(&self) -> CodePair {
        CodePair { a: self.b.clone(), b: self.a.clone(), status: self.status.clone() }
    }
}

impl PartialEq for CodePair {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Eq for CodePair {}

impl Serialize for CodePair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CodePair", 3)?;
        st.serialize_field("n", &self.word_length())?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

/// Tracks seen sums: a flat bitmap over both planes for short words, a hash
/// set otherwise.
enum SumTracker {
    Bitmap { n: usize, bits: Vec<u64> },
    Hashed(std::collections::HashSet<u128>),
}

impl SumTracker {
    const BITMAP_MAX_N: usize = 11;

    fn new(n: usize, capacity: usize) -> Self {
        if n <= Self::BITMAP_MAX_N {
            SumTracker::Bitmap { n, bits: vec![0; (1usize << (2 * n)).div_ceil(64)] }
        } else {
            SumTracker::Hashed(std::collections::HashSet::with_capacity(capacity))
        }
    }

    /// Returns false if the sum was already present.
    #[inline]
    fn insert(&mut self, s: &TernaryWord) -> bool {
        match self {
            SumTracker::Bitmap { n, bits } => {
                let key = ((s.high() << *n) | s.low()) as usize;
                let (w, m) = (key / 64, 1u64 << (key % 64));
                let fresh = bits[w] & m == 0;
                bits[w] |= m;
                fresh
            }
            SumTracker::Hashed(set) => set.insert(s.packed()),
        }
    }

    fn has_collision(pair: &CodePair) -> bool {
        let n = pair.word_length();
        let mut tracker = SumTracker::new(n, pair.product_size() as usize);
        for &a in pair.a.words() {
            for &b in pair.b.words() {
                if !tracker.insert(&TernaryWord::sum(n, a, b)) {
                    return true;
                }
            }
        }
        false
    }
}

fn collect_set(mut words: Vec<TernaryWord>) -> Vec<TernaryWord> {
    words.sort_unstable_by_key(|w| w.packed());
    words.dedup();
    words
}

/// `A + B` over the integers, sorted and deduplicated.
pub fn sumset(pair: &CodePair) -> Vec<TernaryWord> {
    let n = pair.word_length();
    let mut out = Vec::with_capacity(pair.product_size() as usize);
    for &a in pair.a.words() {
        for &b in pair.b.words() {
            out.push(TernaryWord::sum(n, a, b));
        }
    }
    collect_set(out)
}

/// `A - B` over the integers, sorted and deduplicated.
pub fn diffset(pair: &CodePair) -> Vec<TernaryWord> {
    let n = pair.word_length();
    let mut out = Vec::with_capacity(pair.product_size() as usize);
    for &a in pair.a.words() {
        for &b in pair.b.words() {
            out.push(TernaryWord::difference(n, a, b));
        }
    }
    collect_set(out)
}

/// `(A1 × A2, B1 × B2)`, which is a UDCP whenever both inputs are.
pub fn product_compose(p1: &CodePair, p2: &CodePair) -> Result<CodePair> {
    if !p1.is_udcp() || !p2.is_udcp() {
        return Err(Error::NotVerified);
    }
    CodePair::new(p1.a.concat(&p2.a)?, p1.b.concat(&p2.b)?)
}
