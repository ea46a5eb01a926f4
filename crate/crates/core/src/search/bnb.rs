//! Branch-and-bound over `B`, with `A` read off as a maximum clique of the
//! compatibility graph of `B`.
//!
//! Symmetries: flipping a coordinate in `B` alone, or in `A` alone, keeps a
//! pair uniquely decodable (`a + (1 - b) = 1 + (a - b)`), and so does a
//! common coordinate permutation. With reduction on, `B` contains `0` and,
//! if `|B| >= 2`, the word `b1` of the first `w` coordinates set, where `w` is
//! the minimum distance of `B`; all other words lie at distance `>= w` from
//! every chosen word.
//!
//! Root branches run in parallel and share the best value found so far.
//! Subtrees are pruned only when their bound is strictly below the shared
//! value, so every branch still finds its first optimum and the witness is
//! the optimum of the earliest branch, whatever the scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::clique::{has_clique, max_clique};
use super::graph::{CompatGraph, MAX_GRAPH_N};
use super::kasami_tower;
use crate::bounds::best_bound;
use crate::code::{product_compose, BinaryCode, CodePair};
use crate::coords::low_mask;
use crate::error::{Error, Result};
use crate::math::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MaxProduct,
    MaxBGivenAFloor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub n: usize,
    pub objective: Objective,
    pub a_floor: Option<u64>,
    pub symmetry_reduction: bool,
    pub node_budget: Option<u64>,
}

impl SearchSpec {
    pub fn max_product(n: usize) -> Self {
        SearchSpec { n, objective: Objective::MaxProduct, a_floor: None, symmetry_reduction: true, node_budget: None }
    }

    pub fn frontier(n: usize, a_floor: Option<u64>) -> Self {
        SearchSpec { n, objective: Objective::MaxBGivenAFloor, a_floor, symmetry_reduction: true, node_budget: None }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=MAX_GRAPH_N).contains(&self.n) {
            return Err(Error::TooLarge(format!("search needs 1 <= n <= {MAX_GRAPH_N}, got {}", self.n)));
        }
        if let Some(k) = self.a_floor {
            if k == 0 || k > 1u64 << self.n {
                return Err(Error::domain("a_floor", k as f64, "1..=2^n"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub n: usize,
    pub a_floor: Option<u64>,
    pub a_size: u64,
    pub b_size: u64,
    pub product: u64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub witness: CodePair,
    /// Proved by exhaustion rather than cut short by the budget.
    pub optimal: bool,
    /// The smallest available asymptotic β bound at this point's ε, for
    /// comparison only.
    pub bound_curve: f64,
}

/// Upper bounds on `|A||B|` valid at every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCaps {
    pub three_pow_n: u64,
    /// `⌊2^(1.5n)⌋`.
    pub entropy: u64,
    /// `Σ_d C(n,d) 2^min(d, n-d)`.
    pub van_tilborg: u64,
    pub cap: u64,
}

impl ProductCaps {
    pub fn new(n: usize) -> Self {
        let three_pow_n = 3u64.pow(n as u32);
        let entropy = isqrt(1u128 << (3 * n)) as u64;
        let van_tilborg = (0..=n).map(|d| binomial(n, d) << d.min(n - d)).sum::<u128>() as u64;
        ProductCaps { three_pow_n, entropy, van_tilborg, cap: three_pow_n.min(entropy).min(van_tilborg) }
    }

    fn tightest(&self) -> &'static str {
        if self.cap == self.van_tilborg {
            "van-tilborg"
        } else if self.cap == self.entropy {
            "entropy"
        } else {
            "three-pow-n"
        }
    }
}

fn isqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutedRange {
    pub from: u64,
    pub to: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchLog {
    pub n: usize,
    pub objective: Objective,
    pub nodes: u64,
    pub root_branches: usize,
    pub budget_exhausted: bool,
    pub caps: ProductCaps,
    pub best_value: u64,
    /// Values of the objective shown impossible.
    pub refuted: Vec<RefutedRange>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub point: FrontierPoint,
    pub log: SearchLog,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontierReport {
    pub n: usize,
    pub points: Vec<FrontierPoint>,
    pub nodes: u64,
    pub budget_exhausted: bool,
}

#[derive(Clone, Copy)]
enum Goal {
    Product,
    BSize { floor: usize },
}

#[derive(Clone, Debug)]
struct Found {
    value: u64,
    b: Vec<u64>,
    a: u64,
}

struct Shared<'a> {
    goal: Goal,
    cap: u64,
    /// `far[w][x]`: the words at distance `>= w` from `x`.
    far: &'a [Vec<u64>],
    budget: Option<u64>,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    global: AtomicU64,
}

impl Shared<'_> {
    fn tick(&self) -> bool {
        let seen = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| seen > b) {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn beaten(&self, bound: u64, local: &Option<Found>) -> bool {
        bound <= local.as_ref().map_or(0, |f| f.value) || bound < self.global.load(Ordering::Relaxed)
    }
}

fn above(c: u64) -> u64 {
    if c >= 63 {
        0
    } else {
        !low_mask(c as usize + 1)
    }
}

fn visit(sh: &Shared, w: usize, b: &mut Vec<u64>, graph: &CompatGraph, cands: u64, local: &mut Option<Found>) {
    if sh.exhausted.load(Ordering::Relaxed) || !sh.tick() {
        return;
    }
    let s = b.len() as u64;
    let adj = graph.adjacency();
    let verts = graph.vertices();
    let c = cands.count_ones() as u64;
    let (value, ub, omega) = match sh.goal {
        Goal::Product => {
            let clique = max_clique(adj, verts);
            let om = clique.count_ones() as u64;
            if local.as_ref().is_none_or(|f| s * om > f.value) {
                *local = Some(Found { value: s * om, b: b.clone(), a: clique });
            }
            (s * om, (om * (s + c)).min(sh.cap), om)
        }
        Goal::BSize { floor } => {
            if !has_clique(adj, verts, floor) {
                return;
            }
            if local.as_ref().is_none_or(|f| s > f.value) {
                *local = Some(Found { value: s, b: b.clone(), a: max_clique(adj, verts) });
            }
            (s, (s + c).min(sh.cap / floor as u64), 0)
        }
    };
    sh.global.fetch_max(value, Ordering::Relaxed);
    if sh.beaten(ub, local) {
        return;
    }
    let mut rest = cands;
    while rest != 0 {
        let x = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        let child_cands = cands & above(x) & sh.far[w][x as usize];
        if let Goal::Product = sh.goal {
            // The child's clique number is at most the parent's.
            let quick = (omega * (s + 1 + child_cands.count_ones() as u64)).min(sh.cap);
            if sh.beaten(quick, local) {
                continue;
            }
        }
        let mut child = graph.clone();
        child.add_word(x, b);
        b.push(x);
        visit(sh, w, b, &child, child_cands, local);
        b.pop();
    }
}

/// A root branch: an initial `B`, its candidates and its distance table.
struct Root {
    b: Vec<u64>,
    cands: u64,
    w: usize,
}

fn far_tables(n: usize) -> Vec<Vec<u64>> {
    let words = 1u64 << n;
    (0..=n)
        .map(|w| {
            (0..words)
                .map(|x| (0..words).filter(|&y| (x ^ y).count_ones() as usize >= w).fold(0u64, |m, y| m | 1 << y))
                .collect()
        })
        .collect()
}

fn roots(n: usize, symmetry: bool, far: &[Vec<u64>]) -> Vec<Root> {
    let all = low_mask(1 << n);
    let mut out = Vec::new();
    if !symmetry {
        for b0 in 0..1u64 << n {
            out.push(Root { b: vec![b0], cands: all & above(b0), w: 0 });
        }
        return out;
    }
    out.push(Root { b: vec![0], cands: 0, w: 0 });
    for (w, table) in far.iter().enumerate().skip(1) {
        let b1 = low_mask(w);
        let cands = table[0] & table[b1 as usize];
        out.push(Root { b: vec![0, b1], cands: 0, w });
        let mut rest = cands;
        while rest != 0 {
            let x = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            out.push(Root { b: vec![0, b1, x], cands: cands & above(x) & table[x as usize], w });
        }
    }
    out
}

struct RunResult {
    best: Option<Found>,
    nodes: u64,
    exhausted: bool,
    branches: usize,
}

fn run(n: usize, goal: Goal, symmetry: bool, budget: Option<u64>, seed_value: u64) -> RunResult {
    let far = far_tables(n);
    let roots = roots(n, symmetry, &far);
    let caps = ProductCaps::new(n);
    let sh = Shared {
        goal,
        cap: match goal {
            Goal::Product => caps.cap,
            Goal::BSize { .. } => caps.cap.min(1 << n),
        },
        far: &far,
        budget,
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        global: AtomicU64::new(seed_value),
    };
    let found: Vec<Option<Found>> = roots
        .par_iter()
        .map(|root| {
            let mut local = None;
            let mut b = root.b.clone();
            let graph = CompatGraph::for_code(n, &b);
            visit(&sh, root.w, &mut b, &graph, root.cands, &mut local);
            local
        })
        .collect();
    let mut best: Option<Found> = None;
    for f in found.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| f.value > b.value) {
            best = Some(f);
        }
    }
    RunResult {
        best,
        nodes: sh.nodes.load(Ordering::Relaxed),
        exhausted: sh.exhausted.load(Ordering::Relaxed),
        branches: roots.len(),
    }
}

fn mask_words(mask: u64) -> Vec<u64> {
    (0..64).filter(|v| mask >> v & 1 == 1).collect()
}

fn point(n: usize, a_floor: Option<u64>, witness: CodePair, optimal: bool) -> Result<FrontierPoint> {
    debug_assert!(witness.is_udcp());
    if !witness.recheck() {
        return Err(Error::NotVerified);
    }
    let (a_size, b_size) = (witness.a().len() as u64, witness.b().len() as u64);
    let alpha = witness.alpha();
    let epsilon = (1.0 - alpha).clamp(0.0, 1.0);
    Ok(FrontierPoint {
        n,
        a_floor,
        a_size,
        b_size,
        product: a_size * b_size,
        alpha,
        beta: witness.beta(),
        epsilon,
        bound_curve: best_bound(epsilon)?.beta_bound,
        witness,
        optimal,
    })
}

fn found_pair(n: usize, f: &Found) -> Result<CodePair> {
    CodePair::new(BinaryCode::new(n, mask_words(f.a))?, BinaryCode::from_words_dedup(n, f.b.clone())?)
}

/// The best known construction: a tower of Kasami–Lin pairs, padded with the
/// length-1 pair `({0,1}, {0})` when `n` is odd.
fn seed_pair(n: usize) -> Result<CodePair> {
    let pad = CodePair::new(BinaryCode::full_cube(1)?, BinaryCode::singleton(1, 0)?)?;
    if n == 1 {
        return Ok(pad);
    }
    let tower = kasami_tower(n / 2)?;
    if n % 2 == 1 {
        product_compose(&tower, &pad)
    } else {
        Ok(tower)
    }
}

/// A pair maximizing `|A||B|` at length `n`.
///
/// The known construction seeds the pruning, and is the witness when the
/// search finds nothing strictly better.
pub fn exhaustive_max_product(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let n = spec.n;
    let seed = seed_pair(n)?;
    let seed_value = seed.product_size();
    let r = run(n, Goal::Product, spec.symmetry_reduction, spec.node_budget, seed_value);
    let witness = match &r.best {
        Some(f) if f.value > seed_value => found_pair(n, f)?,
        _ => seed,
    };
    let best_value = witness.product_size();
    let caps = ProductCaps::new(n);
    let mut refuted = Vec::new();
    if !r.exhausted && best_value < caps.cap {
        refuted.push(RefutedRange { from: best_value + 1, to: caps.cap, reason: "exhaustive".into() });
    }
    if caps.cap < caps.three_pow_n {
        refuted.push(RefutedRange { from: caps.cap + 1, to: caps.three_pow_n, reason: caps.tightest().into() });
    }
    Ok(SearchOutcome {
        point: point(n, None, witness, !r.exhausted)?,
        log: SearchLog {
            n,
            objective: Objective::MaxProduct,
            nodes: r.nodes,
            root_branches: r.branches,
            budget_exhausted: r.exhausted,
            caps,
            best_value,
            refuted,
        },
    })
}

/// Largest `|B|` over pairs with `|A| >= a_floor`.
pub fn max_b_given_a_floor(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let n = spec.n;
    let floor = spec.a_floor.ok_or(Error::domain("a_floor", f64::NAN, "required"))?;
    let r = run(n, Goal::BSize { floor: floor as usize }, spec.symmetry_reduction, spec.node_budget, 1);
    let f = r.best.as_ref().expect("B = {0} always qualifies");
    let witness = found_pair(n, f)?;
    let caps = ProductCaps::new(n);
    let top = (caps.cap / floor).min(1 << n);
    let mut refuted = Vec::new();
    if !r.exhausted && f.value < top {
        refuted.push(RefutedRange { from: f.value + 1, to: top, reason: "exhaustive".into() });
    }
    if top < 1 << n {
        refuted.push(RefutedRange { from: top + 1, to: 1 << n, reason: caps.tightest().into() });
    }
    Ok(SearchOutcome {
        point: point(n, Some(floor), witness, !r.exhausted)?,
        log: SearchLog {
            n,
            objective: Objective::MaxBGivenAFloor,
            nodes: r.nodes,
            root_branches: r.branches,
            budget_exhausted: r.exhausted,
            caps,
            best_value: f.value,
            refuted,
        },
    })
}

/// One point per floor `|A| >= k`, for `k` from `2^n` down to
/// `spec.a_floor` (default 1), i.e. sorted by increasing ε.
pub fn unbalanced_frontier(spec: &SearchSpec) -> Result<FrontierReport> {
    spec.validate()?;
    let n = spec.n;
    let lowest = spec.a_floor.unwrap_or(1);
    let mut points = Vec::new();
    let (mut nodes, mut exhausted) = (0, false);
    for k in (lowest..=1u64 << n).rev() {
        let sub = SearchSpec { objective: Objective::MaxBGivenAFloor, a_floor: Some(k), ..*spec };
        let out = max_b_given_a_floor(&sub)?;
        nodes += out.log.nodes;
        exhausted |= out.log.budget_exhausted;
        points.push(out.point);
    }
    Ok(FrontierReport { n, points, nodes, budget_exhausted: exhausted })
}

/// All pairs at length `n <= 3` by direct enumeration; the largest
/// `|A||B|`. Independent of the graph machinery.
pub fn brute_force_max_product(n: usize) -> Result<u64> {
    if !(1..=3).contains(&n) {
        return Err(Error::TooLarge(format!("brute force needs 1 <= n <= 3, got {n}")));
    }
    let words = 1usize << n;
    let mut best = 0u64;
    for am in 1u64..1 << words {
        for bm in 1u64..1 << words {
            let product = (am.count_ones() * bm.count_ones()) as u64;
            if product <= best {
                continue;
            }
            let a = BinaryCode::new(n, mask_words(am))?;
            let b = BinaryCode::new(n, mask_words(bm))?;
            if CodePair::new(a, b)?.is_udcp() {
                best = product;
            }
        }
    }
    Ok(best)
}
