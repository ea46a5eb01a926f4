//! The compatibility graph of `B`: words `a ≠ a'` are adjacent iff
//! `a - a' ∉ B - B`. The valid partners `A` of `B` are exactly its cliques.

use crate::coords::low_mask;

/// Largest `n` the bitset search handles (`2^n` vertices in one `u64`).
pub const MAX_GRAPH_N: usize = 6;

#[derive(Clone, Debug)]
pub struct CompatGraph {
    n: usize,
    adj: Vec<u64>,
}

impl CompatGraph {
    /// The complete graph: the partners of a singleton `B`.
    pub fn complete(n: usize) -> Self {
        assert!((1..=MAX_GRAPH_N).contains(&n));
        let all = low_mask(1 << n);
        CompatGraph { n, adj: (0..1usize << n).map(|v| all & !(1u64 << v)).collect() }
    }

    pub fn vertices(&self) -> u64 {
        low_mask(1 << self.n)
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Removes every edge `{x|p, x|q}` for `x` disjoint from `p|q`, i.e.
    /// forbids the difference `p - q` (and its negative) inside `A`.
    pub fn forbid(&mut self, p: u64, q: u64) {
        let free = low_mask(self.n) & !(p | q);
        let mut x = free;
        loop {
            let (u, v) = ((x | p) as usize, (x | q) as usize);
            self.adj[u] &= !(1u64 << v);
            self.adj[v] &= !(1u64 << u);
            if x == 0 {
                break;
            }
            x = (x - 1) & free;
        }
    }

    /// Updates the graph for `B ∪ {b}`.
    pub fn add_word(&mut self, b: u64, existing: &[u64]) {
        for &c in existing {
            self.forbid(b & !c, c & !b);
        }
    }

    pub fn for_code(n: usize, words: &[u64]) -> Self {
        let mut g = CompatGraph::complete(n);
        for (i, &b) in words.iter().enumerate() {
            g.add_word(b, &words[..i]);
        }
        g
    }
}
