//! Brute-force ground truth: induced-`C4`-free enumeration, split and
//! quasirandomness predicates, the deletion sampler and `ex(G, C4)`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ceil, from_decimal, int, Rational};
use crate::graph::{choose2, pair_from_index, pair_index, LabeledGraph};

/// Largest `n` for exhaustive enumeration.
pub const MAX_ENUMERATION_N: usize = 8;
/// Largest `n` for the exact subset searches.
pub const MAX_EXACT_SUBSET_N: usize = 16;
/// Largest `n` for the `ex(G, C4)` branch and bound.
pub const MAX_EX_C4_N: usize = 14;

fn is_induced_c4(g: &LabeledGraph, q: [usize; 4]) -> bool {
    let mut edges = 0;
    for (i, &u) in q.iter().enumerate() {
        let d = q.iter().filter(|&&w| g.has_edge(u, w)).count();
        if d != 2 {
            return false;
        }
        edges += q[i + 1..].iter().filter(|&&w| g.has_edge(u, w)).count();
    }
    edges == 4
}

/// No 4-set induces a 4-cycle.
pub fn is_induced_c4_free(g: &LabeledGraph) -> bool {
    !(0..g.n()).combinations(4).any(|q| is_induced_c4(g, [q[0], q[1], q[2], q[3]]))
}

/// Pair masks of each 4-set and of its three 4-cycles.
fn c4_patterns(n: usize) -> Vec<(u64, [u64; 3])> {
    let bit = |a: usize, b: usize| 1u64 << pair_index(a, b);
    (0..n)
        .combinations(4)
        .map(|q| {
            let [a, b, c, d] = [q[0], q[1], q[2], q[3]];
            let all = q.iter().tuple_combinations().fold(0, |m, (&x, &y)| m | bit(x, y));
            (
                all,
                [
                    bit(a, b) | bit(b, c) | bit(c, d) | bit(a, d),
                    bit(a, b) | bit(b, d) | bit(c, d) | bit(a, c),
                    bit(a, c) | bit(b, c) | bit(b, d) | bit(a, d),
                ],
            )
        })
        .collect()
}

fn mask_is_free(patterns: &[(u64, [u64; 3])], mask: u64) -> bool {
    patterns.iter().all(|(all, cyc)| {
        let r = mask & all;
        r != cyc[0] && r != cyc[1] && r != cyc[2]
    })
}

fn refuse(n: usize, limit: usize, what: &str) -> Error {
    Error::ScaleRefusal {
        what: what.into(),
        detail: format!("n = {n} exceeds the exhaustive limit {limit}"),
    }
}

/// Counts of induced-`C4`-free graphs by edge number, scanning all pair masks
/// against the 4-set patterns. `n <= 7`.
pub fn fnm_table_by_mask_scan(n: usize) -> Result<Vec<u64>> {
    if n > 7 {
        return Err(refuse(n, 7, "mask scan"));
    }
    let pairs = choose2(n);
    let patterns = c4_patterns(n);
    let total = 1u64 << pairs;
    let chunk = 1u64 << pairs.saturating_sub(6).min(14);
    let chunks = total.div_ceil(chunk);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; pairs + 1];
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                if mask_is_free(&patterns, mask) {
                    counts[mask.count_ones() as usize] += 1;
                }
            }
            counts
        })
        .reduce(|| vec![0u64; pairs + 1], add_counts))
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Same table by adding vertices one at a time and rejecting any neighbourhood
/// that closes an induced 4-cycle through the new vertex. `n <= 8`.
pub fn fnm_table_by_extension(n: usize) -> Result<Vec<u64>> {
    if n > MAX_ENUMERATION_N {
        return Err(refuse(n, MAX_ENUMERATION_N, "vertex extension"));
    }
    fn closes_c4(adj: &[u64], s: u64) -> bool {
        let low = (1u64 << adj.len()) - 1;
        let mut a_iter = s;
        while a_iter != 0 {
            let a = a_iter.trailing_zeros() as usize;
            a_iter &= a_iter - 1;
            // b > a in S, not adjacent to a
            let mut b_iter = a_iter & !adj[a];
            while b_iter != 0 {
                let b = b_iter.trailing_zeros() as usize;
                b_iter &= b_iter - 1;
                if adj[a] & adj[b] & !s & low != 0 {
                    return true;
                }
            }
        }
        false
    }
    fn grow(n: usize, adj: &mut Vec<u64>, edges: usize, counts: &mut [u64]) {
        let v = adj.len();
        if v == n {
            counts[edges] += 1;
            return;
        }
        for s in 0..1u64 << v {
            if closes_c4(adj, s) {
                continue;
            }
            for u in 0..v {
                if s >> u & 1 == 1 {
                    adj[u] |= 1 << v;
                }
            }
            adj.push(s);
            grow(n, adj, edges + s.count_ones() as usize, counts);
            adj.pop();
            for u in 0..v {
                adj[u] &= !(1 << v);
            }
        }
    }
    let pairs = choose2(n);
    // fan out over the first four vertices
    let start = n.min(4);
    let mut seeds = vec![(Vec::<u64>::new(), 0usize)];
    for _ in 0..start {
        seeds = seeds
            .into_iter()
            .flat_map(|(adj, e)| {
                let v = adj.len();
                (0..1u64 << v).filter_map(move |s| {
                    if closes_c4(&adj, s) {
                        return None;
                    }
                    let mut next = adj.clone();
                    for (u, row) in next.iter_mut().enumerate() {
                        if s >> u & 1 == 1 {
                            *row |= 1 << v;
                        }
                    }
                    next.push(s);
                    Some((next, e + s.count_ones() as usize))
                })
            })
            .collect();
    }
    Ok(seeds
        .into_par_iter()
        .map(|(mut adj, e)| {
            let mut counts = vec![0u64; pairs + 1];
            grow(n, &mut adj, e, &mut counts);
            counts
        })
        .reduce(|| vec![0u64; pairs + 1], add_counts))
}

/// `|F_{n,m}(C4)|`: labelled graphs on `n` vertices with `m` edges and no
/// induced 4-cycle.
pub fn count_fnm_c4(n: usize, m: usize) -> Result<u64> {
    if n > MAX_ENUMERATION_N {
        return Err(refuse(n, MAX_ENUMERATION_N, "count_Fnm_c4"));
    }
    if m > choose2(n) {
        return Ok(0);
    }
    static TABLES: [OnceLock<Vec<u64>>; MAX_ENUMERATION_N + 1] = [const { OnceLock::new() }; MAX_ENUMERATION_N + 1];
    let slot = &TABLES[n];
    if slot.get().is_none() {
        let table = if n <= 7 { fnm_table_by_mask_scan(n)? } else { fnm_table_by_extension(n)? };
        let _ = slot.set(table);
    }
    Ok(slot.get().expect("filled above")[m])
}

/// Pair masks of all induced-`C4`-free graphs on `n <= 7` vertices, grouped by
/// edge count and sorted within each group.
pub fn fnm_c4_masks(n: usize) -> Result<Vec<Vec<u64>>> {
    if n > 7 {
        return Err(refuse(n, 7, "mask listing"));
    }
    let pairs = choose2(n);
    let patterns = c4_patterns(n);
    let mut groups = vec![Vec::new(); pairs + 1];
    let free: Vec<u64> = (0..1u64 << pairs).into_par_iter().filter(|&m| mask_is_free(&patterns, m)).collect();
    for mask in free {
        groups[mask.count_ones() as usize].push(mask);
    }
    Ok(groups)
}

/// Clique / independent-set partition of a split graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub clique: Vec<usize>,
    pub independent: Vec<usize>,
}

impl SplitWitness {
    pub fn is_valid(&self, g: &LabeledGraph) -> bool {
        self.clique.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b))
            && self.independent.iter().tuple_combinations().all(|(&a, &b)| !g.has_edge(a, b))
    }
}

/// Degree-sequence split test: with `d_1 >= .. >= d_n` and
/// `k = max{i : d_i >= i - 1}`, split iff `Σ_{i<=k} d_i = k(k-1) + Σ_{i>k} d_i`.
/// The `k` highest-degree vertices then form the clique.
pub fn is_split(g: &LabeledGraph) -> Option<SplitWitness> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let d: Vec<usize> = order.iter().map(|&v| g.degree(v)).collect();
    let k = (1..=n).filter(|&i| d[i - 1] + 1 >= i).max().unwrap_or(0);
    let head: usize = d[..k].iter().sum();
    let tail: usize = d[k..].iter().sum();
    if head != k * k.saturating_sub(1) + tail {
        return None;
    }
    let mut clique = order[..k].to_vec();
    let mut independent = order[k..].to_vec();
    clique.sort_unstable();
    independent.sort_unstable();
    let w = SplitWitness { clique, independent };
    debug_assert!(w.is_valid(g));
    Some(w)
}

/// Exhaustive split test over all `2^n` partitions.
pub fn is_split_exhaustive(g: &LabeledGraph) -> bool {
    let n = g.n();
    (0..1u64 << n).any(|mask| {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| mask >> v & 1 == 1);
        SplitWitness { clique: a, independent: b }.is_valid(g)
    })
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn edges_in(adj: &[u64], set: u64) -> u32 {
    let mut s = set;
    let mut twice = 0;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        s &= s - 1;
        twice += (adj[v] & set).count_ones();
    }
    twice / 2
}

fn rational_eps(eps: f64) -> Result<Rational> {
    from_decimal(eps).ok_or_else(|| Error::invalid("ε must be finite"))
}

fn floor_i64(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn ceil_i64(x: &Rational) -> i64 {
    ceil(x).to_i64().unwrap_or(i64::MAX)
}

/// Outcome of a quasirandomness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasirandomCheck {
    pub holds: bool,
    /// `false` when subsets were sampled rather than exhausted.
    pub exact: bool,
    /// A subset whose density leaves the window.
    pub violating: Option<Vec<usize>>,
}

/// Per-size integer edge windows `[⌈(1-ε)p C(s,2)⌉, ⌊(1+ε)p C(s,2)⌋]`.
fn density_windows(g: &LabeledGraph, eps: &Rational) -> Vec<(i64, i64)> {
    let n = g.n();
    let p = Rational::new(g.edge_count().into(), choose2(n).max(1).into());
    (0..=n)
        .map(|s| {
            let c = int(choose2(s) as u64) * &p;
            (ceil_i64(&((Rational::one() - eps) * &c)), floor_i64(&((Rational::one() + eps) * &c)))
        })
        .collect()
}

/// Every vertex set of more than `εn` vertices (and at least two) has density
/// within `[(1-ε)p, (1+ε)p]`, `p = e(G)/C(n,2)`. Exact for `n <= 16`, otherwise
/// sampled with a fixed seed.
pub fn is_eps_quasirandom(g: &LabeledGraph, eps: f64) -> Result<QuasirandomCheck> {
    if g.n() <= MAX_EXACT_SUBSET_N {
        is_eps_quasirandom_exact(g, eps)
    } else {
        is_eps_quasirandom_sampled(g, eps, 4096, 0)
    }
}

fn quasirandom_min_size(n: usize, eps: f64) -> usize {
    // sizes strictly above εn
    ((eps * n as f64).floor() as usize + 1).max(2)
}

pub fn is_eps_quasirandom_exact(g: &LabeledGraph, eps: f64) -> Result<QuasirandomCheck> {
    let n = g.n();
    if n > MAX_EXACT_SUBSET_N {
        return Err(refuse(n, MAX_EXACT_SUBSET_N, "exact quasirandomness"));
    }
    let eps_r = rational_eps(eps)?;
    let windows = density_windows(g, &eps_r);
    let adj: Vec<u64> = (0..n).map(|v| g.adjacency_mask(v)).collect();
    let min = quasirandom_min_size(n, eps);
    let bad = (0..1u64 << n).find(|&s| {
        let size = s.count_ones() as usize;
        if size < min {
            return false;
        }
        let e = edges_in(&adj, s) as i64;
        let (lo, hi) = windows[size];
        e < lo || e > hi
    });
    Ok(QuasirandomCheck {
        holds: bad.is_none(),
        exact: true,
        violating: bad.map(members),
    })
}

pub fn is_eps_quasirandom_sampled(g: &LabeledGraph, eps: f64, samples: usize, seed: u64) -> Result<QuasirandomCheck> {
    let n = g.n();
    let eps_r = rational_eps(eps)?;
    let windows = density_windows(g, &eps_r);
    let min = quasirandom_min_size(n, eps);
    if min > n {
        return Ok(QuasirandomCheck { holds: true, exact: false, violating: None });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        let size = rng.gen_range(min..=n);
        for i in 0..size {
            let j = rng.gen_range(i..n);
            verts.swap(i, j);
        }
        let mut set = verts[..size].to_vec();
        set.sort_unstable();
        let e = g.edges_within(&set) as i64;
        let (lo, hi) = windows[size];
        if e < lo || e > hi {
            return Ok(QuasirandomCheck { holds: false, exact: false, violating: Some(set) });
        }
    }
    Ok(QuasirandomCheck { holds: true, exact: false, violating: None })
}

/// Partition `(A, B)` with `e(A) >= (1-ε)C(|A|,2)` and `e(B) <= ε e(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloseToSplit {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Exhaustive partition search, `n <= 16`. The first witness in mask order is
/// returned.
pub fn is_eps_close_to_split(g: &LabeledGraph, eps: f64) -> Result<Option<CloseToSplit>> {
    let n = g.n();
    if n > MAX_EXACT_SUBSET_N {
        return Err(refuse(n, MAX_EXACT_SUBSET_N, "close-to-split search"));
    }
    let eps_r = rational_eps(eps)?;
    let need: Vec<i64> = (0..=n)
        .map(|s| ceil_i64(&((Rational::one() - &eps_r) * int(choose2(s) as u64))))
        .collect();
    let b_cap = floor_i64(&(&eps_r * int(g.edge_count() as u64)));
    let adj: Vec<u64> = (0..n).map(|v| g.adjacency_mask(v)).collect();
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let hit = (0..1u64 << n).find(|&a| {
        edges_in(&adj, a) as i64 >= need[a.count_ones() as usize] && edges_in(&adj, full & !a) as i64 <= b_cap
    });
    Ok(hit.map(|a| CloseToSplit {
        a: members(a),
        b: members(full & !a),
    }))
}

/// Number of (not necessarily induced) 4-cycles: `Σ_{u<v} C(codeg(u,v), 2) / 2`.
pub fn count_c4_subgraphs(g: &LabeledGraph) -> u64 {
    let n = g.n();
    let mut twice = 0u64;
    for v in 1..n {
        for u in 0..v {
            let c = g.codegree(u, v) as u64;
            twice += c * c.saturating_sub(1) / 2;
        }
    }
    twice / 2
}

/// Every 4-cycle as its sorted colex edge indices, in sorted order.
pub fn c4_copies(g: &LabeledGraph) -> Vec<[usize; 4]> {
    let n = g.n();
    let mut out = BTreeSet::new();
    for c in 1..n {
        for a in 0..c {
            let common: Vec<usize> = g.neighbors(a).filter(|&w| g.has_edge(w, c)).collect();
            for (&w1, &w2) in common.iter().tuple_combinations() {
                let mut e = [pair_index(a, w1), pair_index(w1, c), pair_index(c, w2), pair_index(w2, a)];
                e.sort_unstable();
                out.insert(e);
            }
        }
    }
    out.into_iter().collect()
}

/// One draw of the deletion construction.
#[derive(Clone, Debug)]
pub struct DeletionTrial {
    /// Number of 4-cycles in the `m'`-edge graph.
    pub x: u64,
    /// `X <= m' - m`.
    pub accepted: bool,
    /// The `m`-edge `C4`-free graph, on acceptance.
    pub graph: Option<LabeledGraph>,
}

/// Uniform `m'`-edge graph via partial Fisher–Yates over pair indices.
pub fn uniform_gnm(n: usize, m: usize, rng: &mut impl Rng) -> Result<LabeledGraph> {
    let total = choose2(n);
    if m > total {
        return Err(Error::invalid(format!("m = {m} exceeds C({n},2) = {total}")));
    }
    let mut pairs: Vec<usize> = (0..total).collect();
    for i in 0..m {
        let j = rng.gen_range(i..total);
        pairs.swap(i, j);
    }
    LabeledGraph::from_edges(n, pairs[..m].iter().map(|&p| pair_from_index(p)))
}

/// `m' = ⌊(1+δ)m⌋`; draws `G(n, m')`, and if it has at most `m' - m` four-cycles
/// deletes the lowest-index edge of each surviving copy, then the lowest-index
/// surplus edges, leaving exactly `m` edges.
pub fn deletion_trial(n: usize, m: usize, delta: f64, rng: &mut impl Rng) -> Result<DeletionTrial> {
    if !(delta >= 0.0) {
        return Err(Error::invalid("δ must be nonnegative"));
    }
    let m_prime = ((1.0 + delta) * m as f64).floor() as usize;
    let mut g = uniform_gnm(n, m_prime, rng)?;
    let x = count_c4_subgraphs(&g);
    if x > (m_prime - m) as u64 {
        return Ok(DeletionTrial { x, accepted: false, graph: None });
    }
    for copy in c4_copies(&g) {
        let present = copy.iter().all(|&e| {
            let (u, v) = pair_from_index(e);
            g.has_edge(u, v)
        });
        if present {
            let (u, v) = pair_from_index(copy[0]);
            g.remove_edge(u, v);
        }
    }
    let surplus = g.edge_count() - m;
    let drop: Vec<(usize, usize)> = g.edges().take(surplus).collect();
    for (u, v) in drop {
        g.remove_edge(u, v);
    }
    debug_assert_eq!(g.edge_count(), m);
    debug_assert_eq!(count_c4_subgraphs(&g), 0);
    Ok(DeletionTrial { x, accepted: true, graph: Some(g) })
}

/// Result of [`sample_c4free_by_deletion`].
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    /// `None` when every attempt was rejected.
    pub graph: Option<LabeledGraph>,
    pub attempts: usize,
    /// `X` of each attempt.
    pub x_values: Vec<u64>,
}

/// Retries [`deletion_trial`] up to `max_attempts` times from one seeded stream.
pub fn sample_c4free_by_deletion(n: usize, m: usize, delta: f64, seed: u64, max_attempts: usize) -> Result<SampleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_c4free_with(n, m, delta, &mut rng, max_attempts)
}

pub fn sample_c4free_with(n: usize, m: usize, delta: f64, rng: &mut impl Rng, max_attempts: usize) -> Result<SampleOutcome> {
    let mut x_values = Vec::new();
    for attempt in 1..=max_attempts {
        let t = deletion_trial(n, m, delta, rng)?;
        x_values.push(t.x);
        if t.accepted {
            return Ok(SampleOutcome { graph: t.graph, attempts: attempt, x_values });
        }
    }
    Ok(SampleOutcome { graph: None, attempts: max_attempts, x_values })
}

/// Known values of `ex(n, C4)` for `n <= 14`, an upper bound in the search.
const EX_C4_KN: [usize; 15] = [0, 0, 1, 3, 4, 6, 7, 9, 11, 13, 16, 18, 21, 24, 27];

/// Maximum number of edges of a `C4`-free subgraph of `g`, `n <= 14`.
pub fn ex_c4(g: &LabeledGraph) -> Result<usize> {
    let n = g.n();
    if n > MAX_EX_C4_N {
        return Err(refuse(n, MAX_EX_C4_N, "ex(G, C4) branch and bound"));
    }
    if count_c4_subgraphs(g) == 0 {
        return Ok(g.edge_count());
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    struct Search<'a> {
        edges: &'a [(usize, usize)],
        adj: Vec<u64>,
        best: usize,
        cap: usize,
    }
    impl Search<'_> {
        fn closes_c4(&self, u: usize, v: usize) -> bool {
            // a path u - w - x - v of length three
            let mut ws = self.adj[u] & !(1 << v);
            while ws != 0 {
                let w = ws.trailing_zeros() as usize;
                ws &= ws - 1;
                if self.adj[w] & self.adj[v] & !(1 << u) != 0 {
                    return true;
                }
            }
            false
        }
        fn go(&mut self, i: usize, taken: usize) {
            if taken > self.best {
                self.best = taken;
            }
            if i == self.edges.len() || self.best >= self.cap || taken + (self.edges.len() - i) <= self.best {
                return;
            }
            let (u, v) = self.edges[i];
            if !self.closes_c4(u, v) {
                self.adj[u] |= 1 << v;
                self.adj[v] |= 1 << u;
                self.go(i + 1, taken + 1);
                self.adj[u] &= !(1 << v);
                self.adj[v] &= !(1 << u);
            }
            self.go(i + 1, taken);
        }
    }
    let mut s = Search {
        edges: &edges,
        adj: vec![0; n],
        best: 0,
        cap: EX_C4_KN[n].min(edges.len()),
    };
    s.go(0, 0);
    Ok(s.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    const C4: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (0, 3)];

    #[test]
    fn induced_c4_examples() {
        assert!(!is_induced_c4_free(&g(4, &C4)));
        assert!(is_induced_c4_free(&LabeledGraph::complete(4)));
        assert!(is_induced_c4_free(&g(4, &[(0, 1), (1, 2), (2, 3)])));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(count_fnm_c4(4, 4).unwrap(), 12);
        for n in 0..=3 {
            for m in 0..=choose2(n) {
                assert_eq!(count_fnm_c4(n, m).unwrap(), u64::try_from(crate::exact::binomial(choose2(n) as u64, m as u64)).unwrap());
            }
        }
        assert_eq!(count_fnm_c4(5, 11).unwrap(), 0);
        assert!(matches!(count_fnm_c4(9, 3), Err(Error::ScaleRefusal { .. })));
    }

    #[test]
    fn two_scans_agree_small() {
        for n in 0..=6 {
            assert_eq!(fnm_table_by_mask_scan(n).unwrap(), fnm_table_by_extension(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn split_examples() {
        assert!(is_split(&g(4, &C4)).is_none());
        assert!(is_split(&LabeledGraph::complete(5)).is_some());
        assert!(is_split(&LabeledGraph::empty(5)).is_some());
        let p3 = g(3, &[(0, 1), (1, 2)]);
        let w = is_split(&p3).unwrap();
        assert!(w.is_valid(&p3));
        assert!(is_split_exhaustive(&p3));
        assert!(is_split(&LabeledGraph::empty(0)).is_some());
    }

    #[test]
    fn split_matches_exhaustive_on_all_five_vertex_graphs() {
        for mask in 0..1u64 << 10 {
            let h = LabeledGraph::from_pair_mask(5, mask);
            let w = is_split(&h);
            assert_eq!(w.is_some(), is_split_exhaustive(&h), "{mask:b}");
            if let Some(w) = w {
                assert!(w.is_valid(&h));
                assert!(is_induced_c4_free(&h));
            }
        }
    }

    #[test]
    fn quasirandom_examples() {
        assert!(is_eps_quasirandom(&LabeledGraph::complete(8), 0.1).unwrap().holds);
        let mut half = LabeledGraph::empty(8);
        for (u, v) in (0..4).tuple_combinations() {
            half.add_edge(u, v);
        }
        let r = is_eps_quasirandom(&half, 0.1).unwrap();
        assert!(!r.holds && r.exact);
        assert!(is_eps_quasirandom(&half, 1.0).unwrap().holds);
    }

    #[test]
    fn close_to_split_examples() {
        let c4 = g(4, &C4);
        assert!(is_eps_close_to_split(&c4, 0.0).unwrap().is_none());
        assert!(is_eps_close_to_split(&LabeledGraph::empty(5), 0.0).unwrap().is_some());
        let p3 = g(3, &[(0, 1), (1, 2)]);
        for eps in [0.0, 0.3, 0.9] {
            assert!(is_eps_close_to_split(&p3, eps).unwrap().is_some());
        }
    }

    #[test]
    fn c4_counts() {
        assert_eq!(count_c4_subgraphs(&g(4, &C4)), 1);
        assert_eq!(count_c4_subgraphs(&LabeledGraph::complete(4)), 3);
        assert_eq!(count_c4_subgraphs(&LabeledGraph::complete(6)), 45);
        assert_eq!(c4_copies(&LabeledGraph::complete(6)).len(), 45);
    }

    #[test]
    fn ex_c4_examples() {
        assert_eq!(ex_c4(&g(4, &C4)).unwrap(), 3);
        assert_eq!(ex_c4(&LabeledGraph::complete(4)).unwrap(), 4);
        assert_eq!(ex_c4(&g(5, &[(0, 1), (1, 2)])).unwrap(), 2);
        for n in 1..=8 {
            assert_eq!(ex_c4(&LabeledGraph::complete(n)).unwrap(), EX_C4_KN[n]);
        }
    }

    #[test]
    fn sampler_postconditions() {
        let out = sample_c4free_by_deletion(30, 0, 0.1, 3, 1).unwrap();
        assert_eq!(out.graph.unwrap().edge_count(), 0);
        for seed in 0..20 {
            let out = sample_c4free_by_deletion(40, 30, 0.5, seed, 50).unwrap();
            let h = out.graph.expect("accepted within 50 attempts");
            assert_eq!(h.edge_count(), 30);
            assert_eq!(count_c4_subgraphs(&h), 0);
        }
    }
}
