//! Pregraphs `(M, E)`, good 4-cycles, the constraint hypergraphs `H_0, H_1, H_2`
//! and the greedy builder of permissible hypergraphs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{from_decimal, int, Rational};
use crate::graph::{choose2, pair_from_index, pair_index, LabeledGraph};
use crate::hypergraph::{Constraint, UniformHypergraph, VertexId};

/// Disjoint edge sets over `K_n`: mixed edges `M`, fixed edges `E` and
/// neutralised mixed edges `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pregraph {
    mixed: LabeledGraph,
    fixed: LabeledGraph,
    neutral: LabeledGraph,
}

impl std::fmt::Debug for Pregraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pregraph")
            .field("n", &self.n())
            .field("M", &self.mixed.edges().collect_vec())
            .field("E", &self.fixed.edges().collect_vec())
            .field("N", &self.neutral.edges().collect_vec())
            .finish()
    }
}

impl Pregraph {
    pub fn new(mixed: LabeledGraph, fixed: LabeledGraph) -> Result<Self> {
        let n = mixed.n();
        Self::with_neutral(mixed, fixed, LabeledGraph::empty(n))
    }

    pub fn with_neutral(mixed: LabeledGraph, fixed: LabeledGraph, neutral: LabeledGraph) -> Result<Self> {
        let n = mixed.n();
        if fixed.n() != n || neutral.n() != n {
            return Err(Error::invalid("M, E and N must share the vertex count"));
        }
        for (u, v) in mixed.edges() {
            if fixed.has_edge(u, v) || neutral.has_edge(u, v) {
                return Err(Error::invalid(format!("pair {u}-{v} lies in more than one of M, E, N")));
            }
        }
        if fixed.edges().any(|(u, v)| neutral.has_edge(u, v)) {
            return Err(Error::invalid("E and N overlap"));
        }
        Ok(Pregraph { mixed, fixed, neutral })
    }

    /// `M = E(K_n)`, `E = ∅`.
    pub fn complete(n: usize) -> Self {
        Pregraph {
            mixed: LabeledGraph::complete(n),
            fixed: LabeledGraph::empty(n),
            neutral: LabeledGraph::empty(n),
        }
    }

    pub fn n(&self) -> usize {
        self.mixed.n()
    }

    pub fn mixed(&self) -> &LabeledGraph {
        &self.mixed
    }

    pub fn fixed(&self) -> &LabeledGraph {
        &self.fixed
    }

    pub fn neutral(&self) -> &LabeledGraph {
        &self.neutral
    }

    /// Whether `E ⊆ G ⊆ E ∪ M`.
    pub fn contains_graph(&self, g: &LabeledGraph) -> bool {
        self.fixed.edges().all(|(u, v)| g.has_edge(u, v))
            && g.edges().all(|(u, v)| self.fixed.has_edge(u, v) || self.mixed.has_edge(u, v))
    }

    /// `(M, E)` as colex pair masks, for `n <= 11`.
    pub fn masks(&self) -> (u64, u64) {
        (self.mixed.pair_mask(), self.fixed.pair_mask())
    }

    /// Moves pair `{u, v}` from `M` to `E`.
    pub fn fix_edge(&mut self, u: usize, v: usize) -> bool {
        self.mixed.remove_edge(u, v) && self.fixed.add_edge(u, v)
    }

    /// Removes pair `{u, v}` from `M`.
    pub fn drop_edge(&mut self, u: usize, v: usize) -> bool {
        self.mixed.remove_edge(u, v)
    }

    /// Moves pair `{u, v}` from `M` to `N`.
    pub fn neutralize_edge(&mut self, u: usize, v: usize) -> bool {
        self.mixed.remove_edge(u, v) && self.neutral.add_edge(u, v)
    }

    /// Text format: `n <n>` followed by `M`, `E` and `N` lines of `u-v` pairs.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (tag, g) in [("M", &self.mixed), ("E", &self.fixed), ("N", &self.neutral)] {
            let _ = writeln!(out, "{tag}{}", g.edges().map(|(u, v)| format!(" {u}-{v}")).join(""));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut sets: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let tag = toks.next().unwrap_or_default();
            match tag {
                "n" => {
                    let v = toks.next().and_then(|t| t.parse().ok());
                    n = Some(v.ok_or_else(|| Error::parse(i + 1, "bad vertex count"))?);
                }
                "M" | "E" | "N" => {
                    let list = sets.entry(tag).or_default();
                    for t in toks {
                        let (a, b) = t
                            .split_once('-')
                            .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                            .ok_or_else(|| Error::parse(i + 1, format!("bad pair {t:?}")))?;
                        list.push((a, b));
                    }
                }
                other => return Err(Error::parse(i + 1, format!("unknown line tag {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(1, "missing `n` line"))?;
        let graph = |tag| LabeledGraph::from_edges(n, sets.get(tag).cloned().unwrap_or_default());
        Self::with_neutral(graph("M")?, graph("E")?, graph("N")?)
    }
}

/// A 4-cycle of mixed edges on an `E`-independent 4-set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodC4 {
    /// Sorted vertex 4-set.
    pub vertices: [usize; 4],
    /// Which of the three cyclic structures on the 4-set (0, 1 or 2).
    pub embedding: u8,
    /// Colex pair indices of the cycle edges, sorted.
    pub cycle_edges: [usize; 4],
    /// Pair indices of the diagonals lying in `M ∪ N`.
    pub extra_mixed: Vec<usize>,
}

/// Cycle and diagonal pairs of each embedding of `C4` on sorted `a < b < c < d`.
fn embeddings(q: [usize; 4]) -> [([(usize, usize); 4], [(usize, usize); 2]); 3] {
    let [a, b, c, d] = q;
    [
        ([(a, b), (b, c), (c, d), (a, d)], [(a, c), (b, d)]),
        ([(a, b), (b, d), (c, d), (a, c)], [(a, d), (b, c)]),
        ([(a, c), (b, c), (b, d), (a, d)], [(a, b), (c, d)]),
    ]
}

/// Good copies in canonical order (vertex 4-set, then embedding).
pub fn good_c4_enumerate(p: &Pregraph) -> Vec<GoodC4> {
    let (m, e, nn) = (&p.mixed, &p.fixed, &p.neutral);
    let mut out = Vec::new();
    for q in (0..p.n()).combinations(4) {
        let q = [q[0], q[1], q[2], q[3]];
        if q.iter().tuple_combinations().any(|(&x, &y)| e.has_edge(x, y)) {
            continue;
        }
        for (emb, (cycle, diag)) in embeddings(q).into_iter().enumerate() {
            if !cycle.iter().all(|&(x, y)| m.has_edge(x, y)) {
                continue;
            }
            let mut cycle_edges = cycle.map(|(x, y)| pair_index(x, y));
            cycle_edges.sort_unstable();
            let mut extra_mixed: Vec<_> = diag
                .iter()
                .filter(|&&(x, y)| m.has_edge(x, y) || nn.has_edge(x, y))
                .map(|&(x, y)| pair_index(x, y))
                .collect();
            extra_mixed.sort_unstable();
            out.push(GoodC4 {
                vertices: q,
                embedding: emb as u8,
                cycle_edges,
                extra_mixed,
            });
        }
    }
    out
}

/// `H_0`, `H_1`, `H_2` over a ground set of pairs relabelled `0..`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintHypergraphs {
    /// Colex pair index of each hypergraph vertex.
    pub ground: Vec<usize>,
    pub h: [UniformHypergraph; 3],
}

impl ConstraintHypergraphs {
    pub fn vertex_of(&self, pair: usize) -> Option<VertexId> {
        self.ground.binary_search(&pair).ok().map(|i| i as VertexId)
    }

    /// Number of pairs in the ground set.
    pub fn v(&self) -> usize {
        self.ground.len()
    }
}

fn ground_of(p: &Pregraph) -> Vec<usize> {
    let mut g: Vec<usize> = p
        .mixed
        .edges()
        .chain(p.neutral.edges())
        .map(|(u, v)| pair_index(u, v))
        .collect();
    g.sort_unstable();
    g
}

fn copy_constraint(copy: &GoodC4, ground: &[usize]) -> Constraint {
    let id = |pair: &usize| ground.binary_search(pair).expect("pair in ground set") as VertexId;
    Constraint::from_sorted(
        copy.extra_mixed.iter().map(id).collect(),
        copy.cycle_edges.iter().map(id).collect(),
    )
}

fn assemble(ground: Vec<usize>, parts: [BTreeMap<Constraint, u64>; 3]) -> ConstraintHypergraphs {
    let v = ground.len();
    let [a, b, c] = parts;
    ConstraintHypergraphs {
        h: [
            UniformHypergraph::from_merged(v, 0, 4, a),
            UniformHypergraph::from_merged(v, 1, 4, b),
            UniformHypergraph::from_merged(v, 2, 4, c),
        ],
        ground,
    }
}

/// Each good copy becomes one constraint `(extra, cycle)` of `H_i`, `i = |extra|`.
/// The ground set is `M ∪ N`.
pub fn build_constraint_hypergraphs(p: &Pregraph) -> ConstraintHypergraphs {
    let ground = ground_of(p);
    let mut parts: [BTreeMap<Constraint, u64>; 3] = Default::default();
    for copy in good_c4_enumerate(p) {
        let c = copy_constraint(&copy, &ground);
        *parts[copy.extra_mixed.len()].entry(c).or_insert(0) += 1;
    }
    assemble(ground, parts)
}

/// All (not necessarily induced) 4-cycles of `g` as a `(0,4)`-uniform hypergraph
/// on the `C(n,2)` pair indices.
pub fn c4_copy_hypergraph(g: &LabeledGraph) -> UniformHypergraph {
    let mut edges = Vec::new();
    for q in (0..g.n()).combinations(4) {
        for (cycle, _) in embeddings([q[0], q[1], q[2], q[3]]) {
            if cycle.iter().all(|&(x, y)| g.has_edge(x, y)) {
                let ones = cycle.map(|(x, y)| pair_index(x, y) as VertexId);
                edges.push((Constraint::new([], ones).expect("disjoint"), 1));
            }
        }
    }
    UniformHypergraph::from_edges(choose2(g.n()), 0, 4, edges).expect("valid (0,4) edges")
}

/// Caps `⌊ℓ³/n⌋`, `ℓ²`, `ℓ` for the shapes `(0,1)`, `(1,0)`, `(0,2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationCaps {
    pub c01: u64,
    pub c10: u64,
    pub c02: u64,
}

impl SaturationCaps {
    pub fn new(ell: u64, n: u64) -> Self {
        SaturationCaps {
            c01: ell.pow(3) / n.max(1),
            c10: ell * ell,
            c02: ell,
        }
    }
}

/// Whether `(S, T)` is saturated in `h` (degree at or above its cap).
pub fn is_saturated(s: &[VertexId], t: &[VertexId], h: &UniformHypergraph, ell: u64, n: u64) -> Result<bool> {
    let caps = SaturationCaps::new(ell, n);
    let cap = match (s.len(), t.len()) {
        (0, 1) => caps.c01,
        (1, 0) => caps.c10,
        (0, 2) => caps.c02,
        other => return Err(Error::invalid(format!("unsupported saturation shape {other:?}"))),
    };
    Ok(h.degree(s, t)? >= cap)
}

/// Whether `h` (as `H_i`) meets `Δ_{(0,1)} <= ℓ³/n`, `Δ_{(0,2)} <= ℓ` and, for
/// `i > 0`, `Δ_{(1,0)} <= ℓ²`.
pub fn is_permissible(h: &UniformHypergraph, ell: u64, n: u64) -> bool {
    let (i, k1) = h.uniformity();
    if h.is_empty() {
        return true;
    }
    let d01 = if k1 >= 1 { h.max_degree_unchecked(0, 1) } else { 0 };
    let d02 = if k1 >= 2 { h.max_degree_unchecked(0, 2) } else { 0 };
    let ok01 = d01 as u128 * n as u128 <= (ell as u128).pow(3);
    let ok02 = d02 <= ell;
    let ok10 = i == 0 || h.max_degree_unchecked(1, 0) <= ell * ell;
    ok01 && ok02 && ok10
}

/// Two-phase move: `M -> E` for pairs whose `({f}, ∅)` is saturated in `H_1` or
/// `H_2`, then `M -> N` for pairs whose `(∅, {f})` is saturated in any `H_i`.
pub fn preprocess_saturation(p: &Pregraph, hs: &ConstraintHypergraphs, ell: u64) -> Pregraph {
    let n = p.n() as u64;
    let deg = |i: usize, pair: usize, zero_side: bool| -> u64 {
        match hs.vertex_of(pair) {
            None => 0,
            Some(v) if zero_side => hs.h[i].degree_sorted(&[v], &[]),
            Some(v) => hs.h[i].degree_sorted(&[], &[v]),
        }
    };
    let caps = SaturationCaps::new(ell, n);
    preprocess_with(p, caps, |pair| {
        (deg(1, pair, true) >= caps.c10 || deg(2, pair, true) >= caps.c10, (0..3).any(|i| deg(i, pair, false) >= caps.c01))
    })
}

fn preprocess_with(p: &Pregraph, _caps: SaturationCaps, sat: impl Fn(usize) -> (bool, bool)) -> Pregraph {
    let mut out = p.clone();
    let status: Vec<((usize, usize), (bool, bool))> =
        p.mixed.edges().map(|(u, v)| ((u, v), sat(pair_index(u, v)))).collect();
    for &((u, v), (to_e, _)) in &status {
        if to_e {
            out.fix_edge(u, v);
        }
    }
    for &((u, v), (to_e, to_n)) in &status {
        if to_n && !to_e {
            out.neutralize_edge(u, v);
        }
    }
    out
}

/// Result of [`build_permissible`].
#[derive(Clone, Debug)]
pub struct PermissibleOutcome {
    /// `Some(i)` when `e(H_i) >= βℓ⁴` was reached.
    pub success: Option<usize>,
    pub hypergraphs: ConstraintHypergraphs,
    /// The preprocessed pregraph at termination.
    pub preprocessed: Pregraph,
    /// `(0,2)`-saturated pairs at termination, as sorted pair indices.
    pub blocked: Vec<(usize, usize)>,
    pub insertions: usize,
}

impl PermissibleOutcome {
    pub fn chosen(&self) -> Option<(usize, &UniformHypergraph)> {
        self.success.map(|i| (i, &self.hypergraphs.h[i]))
    }
}

/// Greedily grows permissible `H_0, H_1, H_2 ⊆ H_i^P` one good copy at a time.
///
/// Each step re-runs the saturation preprocessing on `P`, blocks every
/// `(0,2)`-saturated pair and inserts the first canonical good copy of the
/// preprocessed pregraph that avoids blocked pairs. Stops at `e(H_i) >= βℓ⁴`.
pub fn build_permissible(p: &Pregraph, ell: u64, beta: f64) -> Result<PermissibleOutcome> {
    if ell == 0 || !(beta > 0.0) {
        return Err(Error::invalid("build_permissible needs ℓ >= 1 and β > 0"));
    }
    let n = p.n() as u64;
    let target = from_decimal(beta).expect("finite β") * int(ell.pow(4));
    let caps = SaturationCaps::new(ell, n);
    let copies = good_c4_enumerate(p);
    let ground = ground_of(p);
    let mut parts: [BTreeMap<Constraint, u64>; 3] = Default::default();
    let mut counts = [0u64; 3];
    let mut d01: [HashMap<usize, u64>; 3] = Default::default();
    let mut d10: [HashMap<usize, u64>; 3] = Default::default();
    let mut d02: [HashMap<(usize, usize), u64>; 3] = Default::default();
    let mut used = vec![false; copies.len()];
    let mut insertions = 0;

    let reached = |counts: &[u64; 3]| (0..3).find(|&i| int(counts[i]) >= target);
    loop {
        let pre = preprocess_with(p, caps, |pair| {
            let z = |i: usize| d10[i].get(&pair).copied().unwrap_or(0);
            let o = |i: usize| d01[i].get(&pair).copied().unwrap_or(0);
            (z(1) >= caps.c10 || z(2) >= caps.c10, (0..3).any(|i| o(i) >= caps.c01))
        });
        let blocked: HashSet<(usize, usize)> = (0..3)
            .flat_map(|i| d02[i].iter().filter(|&(_, &d)| d >= caps.c02).map(|(&k, _)| k))
            .collect();
        let done = reached(&counts);
        let pick = if done.is_some() {
            None
        } else {
            (0..copies.len()).find(|&ci| {
                let copy = &copies[ci];
                !used[ci]
                    && copy.cycle_edges.iter().all(|&e| {
                        let (u, v) = pair_from_index(e);
                        pre.mixed.has_edge(u, v)
                    })
                    && !copy
                        .vertices
                        .iter()
                        .tuple_combinations()
                        .any(|(&x, &y)| pre.fixed.has_edge(x, y))
                    && !copy.cycle_edges.iter().tuple_combinations().any(|(&a, &b)| blocked.contains(&(a, b)))
            })
        };
        let Some(ci) = pick else {
            let mut blocked: Vec<_> = blocked.into_iter().collect();
            blocked.sort_unstable();
            let hypergraphs = assemble(ground, parts);
            if let Some(i) = done {
                debug_assert!(is_permissible(&hypergraphs.h[i], ell, n));
            }
            return Ok(PermissibleOutcome {
                success: done,
                hypergraphs,
                preprocessed: pre,
                blocked,
                insertions,
            });
        };
        used[ci] = true;
        insertions += 1;
        let copy = &copies[ci];
        let i = copy.extra_mixed.len();
        counts[i] += 1;
        *parts[i].entry(copy_constraint(copy, &ground)).or_insert(0) += 1;
        for &e in &copy.cycle_edges {
            *d01[i].entry(e).or_insert(0) += 1;
        }
        for &e in &copy.extra_mixed {
            *d10[i].entry(e).or_insert(0) += 1;
        }
        for (&a, &b) in copy.cycle_edges.iter().tuple_combinations() {
            *d02[i].entry((a, b)).or_insert(0) += 1;
        }
    }
}

/// `Σ_v 1 / (1 + deg(v))`, a lower bound on the independence number.
pub fn caro_wei_bound(g: &LabeledGraph) -> Rational {
    (0..g.n()).fold(Rational::zero(), |acc, v| acc + Rational::new(One::one(), (1 + g.degree(v)).into()))
}

/// Keeps each vertex independently with its probability, then returns the kept
/// `v_i` (in `order`) with no kept neighbour later in the order.
pub fn random_order_independent_set(g: &LabeledGraph, keep: &[f64], order: &[usize], seed: u64) -> Result<Vec<usize>> {
    let n = g.n();
    if keep.len() != n || order.len() != n {
        return Err(Error::invalid("keep probabilities and order must cover every vertex"));
    }
    if keep.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::invalid("keep probabilities must lie in [0, 1]"));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::invalid("order must be a permutation"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept: Vec<bool> = (0..n).map(|v| rng.gen_bool(keep[v])).collect();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut out: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&v| kept[v] && !g.neighbors(v).any(|u| kept[u] && pos[u] > pos[v]))
        .collect();
    out.sort_unstable();
    debug_assert!(out.iter().tuple_combinations().all(|(&a, &b)| !g.has_edge(a, b)));
    Ok(out)
}

/// Below this many vertices subset searches are exhaustive.
pub const EXACT_SUBSET_LIMIT: usize = 16;

/// A vertex subset produced by an exact or heuristic search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSearch {
    pub set: Vec<usize>,
    pub value: usize,
    /// `false` when produced by the greedy-plus-swaps heuristic.
    pub exact: bool,
}

/// Edit cost of turning `E` into a clique on some `ℓ`-set:
/// `min_U (C(ℓ,2) - e_E(U)) + (e(E) - e_E(U))`.
pub fn close_to_clique_cost(e: &LabeledGraph, ell: usize) -> Result<SubsetSearch> {
    let best = densest_subset(e, ell)?;
    let c = choose2(ell);
    Ok(SubsetSearch {
        value: (c - best.value) + (e.edge_count() - best.value),
        ..best
    })
}

/// `E` is `ε`-close to `K_ℓ` by edit distance: cost at most `ε C(ℓ,2)`.
pub fn is_close_to_clique_by_edits(e: &LabeledGraph, ell: usize, eps: f64) -> Result<bool> {
    let cost = close_to_clique_cost(e, ell)?;
    Ok(int(cost.value as u64) <= from_decimal(eps).expect("finite ε") * int(choose2(ell) as u64))
}

/// Some `ℓ`-set `U` has `e_E(U) >= (1-ε) C(ℓ,2)`.
pub fn has_dense_subset(e: &LabeledGraph, ell: usize, eps: f64) -> Result<Option<SubsetSearch>> {
    let best = densest_subset(e, ell)?;
    let need = (Rational::one() - from_decimal(eps).expect("finite ε")) * int(choose2(ell) as u64);
    Ok((int(best.value as u64) >= need).then_some(best))
}

/// An `ℓ`-set maximising `e_E(U)`, ties to the lexicographically first set.
pub fn densest_subset(e: &LabeledGraph, ell: usize) -> Result<SubsetSearch> {
    let n = e.n();
    if ell > n {
        return Err(Error::invalid(format!("ℓ = {ell} exceeds n = {n}")));
    }
    if n <= EXACT_SUBSET_LIMIT {
        let mut best = (0..ell).collect_vec();
        let mut value = e.edges_within(&best);
        for set in (0..n).combinations(ell) {
            let v = e.edges_within(&set);
            if v > value {
                value = v;
                best = set;
            }
        }
        return Ok(SubsetSearch {
            set: best,
            value,
            exact: true,
        });
    }
    let mut order = (0..n).collect_vec();
    order.sort_by_key(|&v| (std::cmp::Reverse(e.degree(v)), v));
    let mut set = order[..ell].to_vec();
    let mut value = e.edges_within(&set);
    // first-improvement swaps until a local optimum
    'outer: loop {
        for i in 0..set.len() {
            for out in 0..n {
                if set.contains(&out) {
                    continue;
                }
                let old = set[i];
                set[i] = out;
                let v = e.edges_within(&set);
                if v > value {
                    value = v;
                    continue 'outer;
                }
                set[i] = old;
            }
        }
        break;
    }
    set.sort_unstable();
    Ok(SubsetSearch {
        set,
        value,
        exact: false,
    })
}

/// Witness `(U, W)` of an `ε`-almost split pregraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostSplit {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub exact: bool,
}

/// Exact integer forms of the almost-split inequalities, indexed by `|U|`.
struct SplitThresholds {
    /// Least admissible `e_E(U)`.
    dense_min: Vec<u64>,
    /// Largest admissible `e_M(W)`.
    mixed_max: Vec<u64>,
}

impl SplitThresholds {
    fn new(n: usize, eps: f64) -> Self {
        let eps_r = from_decimal(eps).expect("finite ε");
        let one_minus = Rational::one() - &eps_r;
        let dense_min = (0..=n)
            .map(|k| {
                let need = crate::exact::ceil(&(&one_minus * int(choose2(k) as u64)));
                need.to_u64().unwrap_or(0)
            })
            .collect();
        // e_M(W) <= 7 √ε |U| n  <=>  e_M(W)² <= ⌊49 ε |U|² n²⌋
        let mixed_max = (0..=n)
            .map(|k| {
                let rhs = (int(49u64) * &eps_r * int((k * n) as u64).pow(2)).floor().to_integer();
                num_integer::Roots::sqrt(&rhs).to_u64().unwrap_or(u64::MAX)
            })
            .collect();
        SplitThresholds { dense_min, mixed_max }
    }

    fn holds(&self, p: &Pregraph, u: &[usize], w: &[usize]) -> bool {
        let k = u.len();
        p.fixed.edge_count() <= choose2(k)
            && p.fixed.edges_within(u) as u64 >= self.dense_min[k]
            && p.mixed.edges_within(w) as u64 <= self.mixed_max[k]
    }
}

/// Checks `e(E) <= C(|U|,2)`, `e_E(U) >= (1-ε) C(|U|,2)` and
/// `e_M(W) <= 7 √ε |U| n` exactly for a given partition.
pub fn almost_split_holds(p: &Pregraph, u: &[usize], eps: f64) -> bool {
    let n = p.n();
    let w: Vec<usize> = (0..n).filter(|x| !u.contains(x)).collect();
    SplitThresholds::new(n, eps).holds(p, u, &w)
}

/// Finds a partition witnessing an `ε`-almost split pregraph, if any.
///
/// Exhaustive over all `U` for `n <= 12`; otherwise tries the top-`k` vertices
/// by `E`-degree for every `k` followed by single swaps (flagged heuristic).
pub fn is_almost_split_pregraph(p: &Pregraph, eps: f64) -> Option<AlmostSplit> {
    if !(eps > 0.0) {
        return None;
    }
    let n = p.n();
    let split = |u: Vec<usize>, exact: bool| {
        let w = (0..n).filter(|x| !u.contains(x)).collect();
        AlmostSplit { u, w, exact }
    };
    // |U| must satisfy C(|U|,2) >= e(E)
    let min_u = (0..=n).find(|&k| choose2(k) >= p.fixed.edge_count())?;
    let th = SplitThresholds::new(n, eps);
    if n <= 12 {
        for k in min_u..=n {
            for u in (0..n).combinations(k) {
                let w = (0..n).filter(|x| !u.contains(x)).collect_vec();
                if th.holds(p, &u, &w) {
                    return Some(split(u, true));
                }
            }
        }
        return None;
    }
    let holds = |u: &[usize]| th.holds(p, u, &(0..n).filter(|x| !u.contains(x)).collect_vec());
    let mut order = (0..n).collect_vec();
    order.sort_by_key(|&v| (std::cmp::Reverse(p.fixed.degree(v)), v));
    for k in min_u..=n {
        let mut u = order[..k].to_vec();
        if holds(&u) {
            u.sort_unstable();
            return Some(split(u, false));
        }
        for i in 0..k {
            for &out in &order[k..] {
                let old = u[i];
                u[i] = out;
                if holds(&u) {
                    u.sort_unstable();
                    return Some(split(u, false));
                }
                u[i] = old;
            }
        }
    }
    None
}

/// Outcome of [`is_leaf_pregraph`], in the order the tests are applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafClass {
    AlmostSplit,
    RatioLeaf(usize),
    EOverflow,
    MUnderflow,
    NotLeaf,
}

impl LeafClass {
    pub fn name(&self) -> String {
        match self {
            LeafClass::AlmostSplit => "almost_split".into(),
            LeafClass::RatioLeaf(l) => format!("ratio_leaf({l})"),
            LeafClass::EOverflow => "e_overflow".into(),
            LeafClass::MUnderflow => "m_underflow".into(),
            LeafClass::NotLeaf => "not_leaf".into(),
        }
    }
}

/// `e(M)` below `(n² m / (2⁸ ln(n²/m)))^{1/2}`.
pub fn m_underflow_threshold(n: usize, m: u64) -> f64 {
    let n2 = (n * n) as f64;
    (n2 * m as f64 / (256.0 * (n2 / m as f64).ln())).sqrt()
}

pub fn is_leaf_pregraph(p: &Pregraph, m: u64, eps: f64, delta: f64) -> Result<LeafClass> {
    let n = p.n();
    if m == 0 || m >= (n * n) as u64 {
        return Err(Error::invalid(format!("m = {m} outside 1..n² for n = {n}")));
    }
    if !(eps > 0.0) || !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("need ε > 0 and 0 < δ <= 1"));
    }
    if is_almost_split_pregraph(p, eps).is_some() {
        return Ok(LeafClass::AlmostSplit);
    }
    let ee = p.fixed.edge_count();
    let em = p.mixed.edge_count();
    // the inequality on e(M) is monotone in ℓ, so the largest admissible ℓ decides
    let ell = (1..).take_while(|&l| choose2(l) <= ee).last().unwrap_or(1);
    let cap = (Rational::one() - from_decimal(delta).expect("finite δ")) * int((ell * n) as u64);
    if int(em as u64) <= cap {
        return Ok(LeafClass::RatioLeaf(ell));
    }
    if ee as u64 > m {
        return Ok(LeafClass::EOverflow);
    }
    if (em as f64) < m_underflow_threshold(n, m) {
        return Ok(LeafClass::MUnderflow);
    }
    Ok(LeafClass::NotLeaf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn mixed_only(m: LabeledGraph) -> Pregraph {
        let n = m.n();
        Pregraph::new(m, LabeledGraph::empty(n)).unwrap()
    }

    const C4: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (0, 3)];

    #[test]
    fn good_copy_examples() {
        assert_eq!(good_c4_enumerate(&mixed_only(LabeledGraph::complete(4))).len(), 3);
        assert_eq!(good_c4_enumerate(&mixed_only(g(4, &C4))).len(), 1);
        let p = Pregraph::new(g(4, &C4), g(4, &[(0, 2)])).unwrap();
        assert!(good_c4_enumerate(&p).is_empty());
    }

    #[test]
    fn constraint_hypergraph_examples() {
        let hs = build_constraint_hypergraphs(&mixed_only(LabeledGraph::complete(4)));
        assert_eq!(hs.h.each_ref().map(|h| h.edge_count()), [0, 0, 3]);
        let hs = build_constraint_hypergraphs(&mixed_only(g(4, &C4)));
        assert_eq!(hs.h.each_ref().map(|h| h.edge_count()), [1, 0, 0]);
        let mut with_diag = C4.to_vec();
        with_diag.push((0, 2));
        let hs = build_constraint_hypergraphs(&mixed_only(g(4, &with_diag)));
        assert_eq!(hs.h.each_ref().map(|h| h.edge_count()), [0, 1, 0]);
    }

    #[test]
    fn saturation_examples() {
        let empty = UniformHypergraph::empty(6, 1, 4).unwrap();
        assert!(!is_saturated(&[], &[0, 1], &empty, 3, 6).unwrap());
        assert!(!is_saturated(&[2], &[], &empty, 3, 6).unwrap());
        // ℓ = 3, n = 6: ⌊27/6⌋ = 4
        let c = Constraint::new([], [0, 1, 2, 3]).unwrap();
        let h = UniformHypergraph::from_edges(6, 0, 4, [(c, 4)]).unwrap();
        assert!(is_saturated(&[], &[0], &h, 3, 6).unwrap());
        let c = Constraint::new([], [0, 1, 2, 3]).unwrap();
        let h = UniformHypergraph::from_edges(6, 0, 4, [(c, 2)]).unwrap();
        assert!(!is_saturated(&[], &[0, 1], &h, 3, 6).unwrap());
        assert!(is_saturated(&[0], &[1], &h, 3, 6).is_err());
    }

    #[test]
    fn preprocessing_moves_heavy_diagonal_to_fixed() {
        let p = mixed_only(LabeledGraph::complete(5));
        let hs = build_constraint_hypergraphs(&p);
        // every diagonal lies in H_2 with (1,0)-degree 2 (two 4-sets through a pair, one embedding each)
        let ell = 1;
        let pre = preprocess_saturation(&p, &hs, ell);
        assert!(pre.fixed().edge_count() > 0);
        assert_eq!(pre.fixed().edge_count() + pre.mixed().edge_count() + pre.neutral().edge_count(), 10);
        assert_eq!(preprocess_saturation(&pre, &hs, ell), pre);
        let none = preprocess_saturation(&p, &build_constraint_hypergraphs(&mixed_only(LabeledGraph::empty(5))), 3);
        assert_eq!(none, p);
    }

    #[test]
    fn permissible_builder_examples() {
        let out = build_permissible(&mixed_only(LabeledGraph::empty(6)), 2, 0.5).unwrap();
        assert_eq!(out.success, None);
        assert!(out.hypergraphs.h.iter().all(|h| h.is_empty()));

        let out = build_permissible(&mixed_only(LabeledGraph::complete(4)), 2, 1.0 / 16.0).unwrap();
        assert_eq!(out.success, Some(2));
        assert_eq!(out.insertions, 1);
        let (i, h) = out.chosen().unwrap();
        assert_eq!(i, 2);
        assert!(is_permissible(h, 2, 4));
    }

    #[test]
    fn caro_wei_examples() {
        use crate::exact::rat;
        assert_eq!(caro_wei_bound(&LabeledGraph::empty(5)), int(5));
        assert_eq!(caro_wei_bound(&LabeledGraph::complete(5)), int(1));
        let c5 = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert_eq!(caro_wei_bound(&c5), rat(5, 3));
        let order: Vec<usize> = (0..5).collect();
        // with everything kept only the last vertex of the order survives
        let i = random_order_independent_set(&c5, &[1.0; 5], &order, 1).unwrap();
        assert_eq!(i, vec![4]);
        assert!(random_order_independent_set(&c5, &[0.0; 5], &order, 1).unwrap().is_empty());
        let all = random_order_independent_set(&LabeledGraph::empty(5), &[1.0; 5], &order, 9).unwrap();
        assert_eq!(all, order);
    }

    #[test]
    fn clique_cost_examples() {
        let mut e = LabeledGraph::complete(4);
        let mut big = LabeledGraph::empty(7);
        for (u, v) in e.edges() {
            big.add_edge(u, v);
        }
        assert_eq!(close_to_clique_cost(&big, 4).unwrap().value, 0);
        assert_eq!(close_to_clique_cost(&LabeledGraph::empty(7), 4).unwrap().value, 6);
        e.remove_edge(0, 1);
        assert_eq!(close_to_clique_cost(&e, 4).unwrap().value, 1);
    }

    #[test]
    fn almost_split_examples() {
        let n = 8;
        let mut e = LabeledGraph::empty(n);
        for (u, v) in (0..3).tuple_combinations() {
            e.add_edge(u, v);
        }
        let p = Pregraph::new(LabeledGraph::empty(n), e).unwrap();
        for eps in [1e-6, 0.01, 0.5] {
            let w = is_almost_split_pregraph(&p, eps).unwrap();
            assert!(almost_split_holds(&p, &w.u, eps));
        }
        let dense = mixed_only(LabeledGraph::complete(n));
        assert!(is_almost_split_pregraph(&dense, 0.001).is_none());
    }

    #[test]
    fn leaf_examples() {
        let n = 10;
        let full = mixed_only(LabeledGraph::complete(n));
        assert_eq!(is_leaf_pregraph(&full, 20, 0.01, 0.25).unwrap(), LeafClass::NotLeaf);
        let mut e = LabeledGraph::empty(n);
        for (u, v) in (0..4).tuple_combinations() {
            e.add_edge(u, v);
        }
        let mut m = LabeledGraph::complete(n);
        for (u, v) in e.edges() {
            m.remove_edge(u, v);
        }
        let p = Pregraph::new(m, e).unwrap();
        // K4 in E, the rest mixed: almost split at ε = 0.01, ratio leaf at δ = 0.01
        assert_eq!(is_leaf_pregraph(&p, 5, 0.01, 0.25).unwrap(), LeafClass::AlmostSplit);
        assert_eq!(is_leaf_pregraph(&p, 5, 1e-6, 0.01).unwrap(), LeafClass::RatioLeaf(4));
        assert_eq!(is_leaf_pregraph(&p, 5, 1e-6, 0.5).unwrap(), LeafClass::EOverflow);
        assert_eq!(is_leaf_pregraph(&p, 6, 1e-6, 0.5).unwrap(), LeafClass::NotLeaf);
        let none = Pregraph::new(LabeledGraph::empty(n), LabeledGraph::empty(n)).unwrap();
        assert!(matches!(
            is_leaf_pregraph(&none, 20, 0.01, 0.25).unwrap(),
            LeafClass::AlmostSplit | LeafClass::RatioLeaf(_) | LeafClass::MUnderflow
        ));
        assert!(is_leaf_pregraph(&full, 100, 0.01, 0.25).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let p = Pregraph::new(g(5, &C4), g(5, &[(0, 4), (2, 4)])).unwrap();
        let back = Pregraph::from_text(&p.to_text()).unwrap();
        assert_eq!(back, p);
        assert!(Pregraph::from_text("n 3\nM 0-1\nE 0-1\n").is_err());
    }
}
