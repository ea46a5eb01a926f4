//! Maximum clique on at most 64 vertices, with greedy-coloring bounds.

/// Adjacency rows as bitsets; `adj[v]` must not contain `v`.
pub type Adjacency = [u64];

/// A maximum clique inside `candidates`, as a bitset. Deterministic: among
/// maxima, the first reached by the fixed branching order.
pub fn max_clique(adj: &Adjacency, candidates: u64) -> u64 {
    let mut best = (0usize, 0u64);
    expand(adj, 0, candidates, &mut best, usize::MAX);
    best.1
}

/// Whether a clique of `k` vertices exists inside `candidates`; stops at the
/// first one found.
pub fn has_clique(adj: &Adjacency, candidates: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let mut best = (k - 1, 0u64);
    expand(adj, 0, candidates, &mut best, k);
    best.1 != 0
}

/// Vertices of `p` ordered by greedy color class, with their colors.
fn color_order(adj: &Adjacency, mut p: u64) -> (Vec<u32>, Vec<usize>) {
    let mut order = Vec::with_capacity(p.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    let mut color = 0;
    while p != 0 {
        color += 1;
        let mut q = p;
        while q != 0 {
            let v = q.trailing_zeros();
            q &= !adj[v as usize] & !(1u64 << v);
            p &= !(1u64 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

/// Stops once a clique of `stop_at` vertices is recorded.
fn expand(adj: &Adjacency, r: u64, mut p: u64, best: &mut (usize, u64), stop_at: usize) {
    let size = r.count_ones() as usize;
    let (order, colors) = color_order(adj, p);
    for i in (0..order.len()).rev() {
        if size + colors[i] <= best.0 || best.0 >= stop_at {
            return;
        }
        let v = order[i];
        let bit = 1u64 << v;
        let r2 = r | bit;
        let p2 = p & adj[v as usize];
        if p2 == 0 {
            if size + 1 > best.0 {
                *best = (size + 1, r2);
            }
        } else {
            expand(adj, r2, p2, best, stop_at);
        }
        p &= !bit;
    }
}
