//! Constraints, `(k0, k1)`-uniform multi-hypergraphs and exact degree queries.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::exact::{int, Rational};

pub type VertexId = u32;

/// Forbidden pattern `(A0, A1)`: an assignment violates it when it is 0 on all
/// of `A0` and 1 on all of `A1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    zeros: Vec<VertexId>,
    ones: Vec<VertexId>,
}

impl Constraint {
    /// Sorts and deduplicates both sides; rejects overlapping sides.
    pub fn new(
        zeros: impl IntoIterator<Item = VertexId>,
        ones: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self> {
        let mut zeros: Vec<_> = zeros.into_iter().collect();
        let mut ones: Vec<_> = ones.into_iter().collect();
        zeros.sort_unstable();
        zeros.dedup();
        ones.sort_unstable();
        ones.dedup();
        if !disjoint(&zeros, &ones) {
            return Err(Error::invalid(format!("constraint sides overlap: {zeros:?} / {ones:?}")));
        }
        Ok(Constraint { zeros, ones })
    }

    /// Builds from sides already known to be sorted, deduplicated and disjoint.
    pub(crate) fn from_sorted(zeros: Vec<VertexId>, ones: Vec<VertexId>) -> Self {
        debug_assert!(zeros.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(ones.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(disjoint(&zeros, &ones));
        Constraint { zeros, ones }
    }

    pub fn zeros(&self) -> &[VertexId] {
        &self.zeros
    }

    pub fn ones(&self) -> &[VertexId] {
        &self.ones
    }

    /// `A_c`.
    pub fn side(&self, c: bool) -> &[VertexId] {
        if c {
            &self.ones
        } else {
            &self.zeros
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.zeros.len(), self.ones.len())
    }

    /// Whether `T0 ⊆ A0` and `T1 ⊆ A1` (both sorted).
    pub fn contains(&self, t0: &[VertexId], t1: &[VertexId]) -> bool {
        is_sorted_subset(t0, &self.zeros) && is_sorted_subset(t1, &self.ones)
    }

    pub fn is_violated_by(&self, h: &Assignment) -> bool {
        self.zeros.iter().all(|&v| !h.get(v)) && self.ones.iter().all(|&v| h.get(v))
    }

    /// The constraint with `v` removed from `A_c`.
    pub fn without(&self, v: VertexId, c: bool) -> Constraint {
        let strip = |side: &[VertexId]| side.iter().copied().filter(|&u| u != v).collect();
        if c {
            Constraint::from_sorted(self.zeros.clone(), strip(&self.ones))
        } else {
            Constraint::from_sorted(strip(&self.zeros), self.ones.clone())
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.zeros.iter().chain(&self.ones).copied()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.zeros, self.ones)
    }
}

fn disjoint(a: &[VertexId], b: &[VertexId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn is_sorted_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// A total 0/1 assignment `h : V -> {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
    ones_count: usize,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment {
            bits: vec![false; n],
            ones_count: 0,
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        let ones_count = bits.iter().filter(|&&b| b).count();
        Assignment { bits, ones_count }
    }

    /// Bit `v` of `mask` is `h(v)`; `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_bits((0..n).map(|v| mask >> v & 1 == 1).collect())
    }

    pub fn from_ones(n: usize, ones: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut bits = vec![false; n];
        for v in ones {
            *bits
                .get_mut(v as usize)
                .ok_or_else(|| Error::invalid(format!("vertex {v} outside ground set of size {n}")))? = true;
        }
        Ok(Self::from_bits(bits))
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> bool {
        self.bits[v as usize]
    }

    pub fn set(&mut self, v: VertexId, value: bool) {
        let slot = &mut self.bits[v as usize];
        if *slot != value {
            *slot = value;
            if value {
                self.ones_count += 1;
            } else {
                self.ones_count -= 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones_count(&self) -> usize {
        self.ones_count
    }

    pub fn ones(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.bits.len() as VertexId).filter(|&v| self.get(v))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// A `(k0, k1)`-uniform multiset of constraints over `{0, .., n-1}`.
///
/// Edges are kept in canonical (lexicographic) order with merged multiplicities,
/// so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniformHypergraph {
    n: usize,
    k0: usize,
    k1: usize,
    edges: Vec<(Constraint, u64)>,
    total: u64,
    incidence: Vec<Vec<u32>>,
}

impl fmt::Debug for UniformHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UniformHypergraph")
            .field("n", &self.n)
            .field("k", &(self.k0, self.k1))
            .field("e", &self.total)
            .field("edges", &self.edges)
            .finish()
    }
}

impl UniformHypergraph {
    pub fn empty(n: usize, k0: usize, k1: usize) -> Result<Self> {
        Self::from_edges(n, k0, k1, std::iter::empty())
    }

    /// `edges` constraints drawn independently and uniformly among the
    /// `(k0, k1)` shapes on `n` vertices; repeats raise multiplicities.
    pub fn random(n: usize, k0: usize, k1: usize, edges: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        if k0 + k1 > n {
            return Err(Error::invalid(format!("k0 + k1 = {} exceeds n = {n}", k0 + k1)));
        }
        let all: Vec<VertexId> = (0..n as VertexId).collect();
        let mut picks = Vec::with_capacity(edges);
        for _ in 0..edges {
            let chosen: Vec<VertexId> = all.choose_multiple(rng, k0 + k1).copied().collect();
            let c = Constraint::new(chosen[..k0].iter().copied(), chosen[k0..].iter().copied()).expect("distinct vertices");
            picks.push((c, 1));
        }
        Self::from_edges(n, k0, k1, picks)
    }

    /// Validates shapes and vertex ranges, merging repeated constraints.
    pub fn from_edges(
        n: usize,
        k0: usize,
        k1: usize,
        edges: impl IntoIterator<Item = (Constraint, u64)>,
    ) -> Result<Self> {
        if (k0, k1) == (0, 0) {
            return Err(Error::invalid("(0,0)-uniform hypergraphs are not constructible"));
        }
        let mut merged = BTreeMap::new();
        for (c, mult) in edges {
            if c.shape() != (k0, k1) {
                return Err(Error::invalid(format!("constraint {c} is not ({k0},{k1})-uniform")));
            }
            if let Some(v) = c.vertices().find(|&v| v as usize >= n) {
                return Err(Error::invalid(format!("vertex {v} outside ground set of size {n}")));
            }
            if mult > 0 {
                *merged.entry(c).or_insert(0u64) += mult;
            }
        }
        Ok(Self::from_merged(n, k0, k1, merged))
    }

    /// The `(0,0)`-uniform hypergraph holding the empty constraint `mult` times.
    /// No assignment avoids it, which is how the engine detects contradictions.
    pub(crate) fn degenerate(n: usize, mult: u64) -> Self {
        let mut merged = BTreeMap::new();
        if mult > 0 {
            merged.insert(Constraint::from_sorted(vec![], vec![]), mult);
        }
        Self::from_merged(n, 0, 0, merged)
    }

    pub(crate) fn from_merged(n: usize, k0: usize, k1: usize, merged: BTreeMap<Constraint, u64>) -> Self {
        let edges: Vec<_> = merged.into_iter().collect();
        let total = edges.iter().map(|(_, m)| m).sum();
        let mut incidence = vec![Vec::new(); n];
        for (i, (c, _)) in edges.iter().enumerate() {
            for v in c.vertices() {
                incidence[v as usize].push(i as u32);
            }
        }
        UniformHypergraph {
            n,
            k0,
            k1,
            edges,
            total,
            incidence,
        }
    }

    /// `(0, k)`-uniform lift of a `k`-uniform set system.
    pub fn lift_monotone<I, S>(n: usize, k: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = VertexId>,
    {
        let edges = sets
            .into_iter()
            .map(|s| Constraint::new([], s).map(|c| (c, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(n, 0, k, edges)
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn uniformity(&self) -> (usize, usize) {
        (self.k0, self.k1)
    }

    /// `e(H)`, counting multiplicities.
    #[inline]
    pub fn edge_count(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Constraint, u64)] {
        &self.edges
    }

    /// Indices (into [`edges`](Self::edges)) of edges containing `v` on either side.
    pub fn incident(&self, v: VertexId) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// `h ∈ F(H)`: no edge is violated.
    pub fn is_satisfied_by(&self, h: &Assignment) -> bool {
        self.first_violated(h).is_none()
    }

    pub fn first_violated(&self, h: &Assignment) -> Option<&Constraint> {
        self.edges.iter().map(|(c, _)| c).find(|c| c.is_violated_by(h))
    }

    /// Number of edges (with multiplicity) with `T0 ⊆ A0` and `T1 ⊆ A1`.
    pub fn degree(&self, t0: &[VertexId], t1: &[VertexId]) -> Result<u64> {
        let t0 = sorted_unique(t0);
        let t1 = sorted_unique(t1);
        if !disjoint(&t0, &t1) {
            return Err(Error::invalid("degree query with overlapping T0 and T1"));
        }
        if let Some(&v) = t0.iter().chain(&t1).find(|&&v| v as usize >= self.n) {
            return Err(Error::invalid(format!("vertex {v} outside ground set")));
        }
        Ok(self.degree_sorted(&t0, &t1))
    }

    pub(crate) fn degree_sorted(&self, t0: &[VertexId], t1: &[VertexId]) -> u64 {
        match t0.first().or(t1.first()) {
            None => self.total,
            Some(&v) => self.incidence[v as usize]
                .iter()
                .map(|&i| &self.edges[i as usize])
                .filter(|(c, _)| c.contains(t0, t1))
                .map(|(_, m)| m)
                .sum(),
        }
    }

    /// Degrees of every `(T0, T1)` of shape `(l0, l1)` that occurs in some edge.
    pub fn degree_table(&self, l0: usize, l1: usize) -> HashMap<(Vec<VertexId>, Vec<VertexId>), u64> {
        let mut table = HashMap::new();
        for (c, mult) in &self.edges {
            for s0 in c.zeros.iter().copied().combinations(l0) {
                for s1 in c.ones.iter().copied().combinations(l1) {
                    *table.entry((s0.clone(), s1)).or_insert(0) += mult;
                }
            }
        }
        table
    }

    /// `Δ_{(l0, l1)}(H)`, accumulated from sub-tuples of stored edges.
    pub fn max_degree(&self, l0: usize, l1: usize) -> Result<u64> {
        if l0 > self.k0 || l1 > self.k1 || (l0, l1) == (0, 0) {
            return Err(Error::invalid(format!(
                "max_degree index ({l0},{l1}) outside range for ({},{})-uniform hypergraph",
                self.k0, self.k1
            )));
        }
        Ok(self.max_degree_unchecked(l0, l1))
    }

    pub(crate) fn max_degree_unchecked(&self, l0: usize, l1: usize) -> u64 {
        if (l0, l1) == (self.k0, self.k1) {
            return self.edges.iter().map(|(_, m)| *m).max().unwrap_or(0);
        }
        if (l0, l1) == (0, 0) {
            return self.total;
        }
        if self.n > 1 << 16 || l0 + l1 > 7 {
            return self.degree_table(l0, l1).into_values().max().unwrap_or(0);
        }
        // sub-tuples packed 16 bits per vertex; the shape is fixed, so no separator is needed
        let pack = |xs: &[VertexId], acc: u128| xs.iter().fold(acc, |a, &x| a << 16 | x as u128);
        let mut table: HashMap<u128, u64> = HashMap::with_capacity(self.edges.len());
        for (c, mult) in &self.edges {
            for s0 in c.zeros.iter().copied().combinations(l0) {
                let k0 = pack(&s0, 0);
                for s1 in c.ones.iter().copied().combinations(l1) {
                    *table.entry(pack(&s1, k0)).or_insert(0) += mult;
                }
            }
        }
        table.into_values().max().unwrap_or(0)
    }

    /// All admissible `(l0, l1)`: `0 <= l_j <= k_j`, not both zero.
    pub fn admissible_indices(&self) -> Vec<(usize, usize)> {
        admissible(self.k0, self.k1)
    }

    /// Checks the degree hypothesis of the container theorem for `(K, b, m, r)`.
    pub fn check_container_hypothesis(&self, k: &Rational, b: u64, m: u64, r: u64) -> Result<HypothesisReport> {
        if self.is_empty() {
            return Err(Error::invalid("container hypothesis needs a non-empty hypergraph"));
        }
        if b == 0 || m == 0 || r == 0 {
            return Err(Error::invalid("b, m and r must be at least 1"));
        }
        let top = self.k0 + self.k1;
        let powers = |x: u64| -> Vec<BigInt> {
            std::iter::successors(Some(BigInt::from(1)), |p| Some(p * x)).take(top + 1).collect()
        };
        let (pb, pm, pv) = (powers(b), powers(m), powers(self.n as u64));
        let e = BigInt::from(self.total);
        let mut rows = Vec::new();
        let mut min_k = Rational::zero();
        for (l0, l1) in self.admissible_indices() {
            let delta = self.max_degree_unchecked(l0, l1);
            // b^{l0+l1-1} e / (m^{l0} v^{l1}), times m / r when l0 > 0
            let unit = if l0 > 0 {
                Rational::new(&pb[l0 + l1 - 1] * &e * m, &pm[l0] * &pv[l1] * r)
            } else {
                Rational::new(&pb[l0 + l1 - 1] * &e, &pm[l0] * &pv[l1])
            };
            let needed = int(delta) / &unit;
            if needed > min_k {
                min_k = needed.clone();
            }
            let bound = &unit * k;
            rows.push(HypothesisRow {
                l0,
                l1,
                max_degree: delta,
                pass: int(delta) <= bound,
                bound,
            });
        }
        Ok(HypothesisReport {
            k: k.clone(),
            rows,
            min_k,
        })
    }

    /// Writes the line format: header `k0 k1 n`, then `mult | a0... | a1...`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k0, self.k1, self.n);
        for (c, mult) in &self.edges {
            let _ = writeln!(
                out,
                "{mult} | {} | {}",
                c.zeros.iter().join(" "),
                c.ones.iter().join(" ")
            );
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [k0, k1, n] = nums[..] else {
            return Err(Error::parse(hl, "header must be `k0 k1 n`"));
        };
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(Error::parse(ln, "expected `mult | a0... | a1...`"));
            }
            let mult: u64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::parse(ln, "bad multiplicity"))?;
            let side = |s: &str| -> Result<Vec<VertexId>> {
                s.split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad vertex {t:?}"))))
                    .collect()
            };
            let c = Constraint::new(side(parts[1])?, side(parts[2])?).map_err(|e| Error::parse(ln, e))?;
            if mult == 0 {
                return Err(Error::parse(ln, "multiplicity must be positive"));
            }
            edges.push((c, mult));
        }
        Self::from_edges(n, k0, k1, edges)
    }
}

pub(crate) fn admissible(k0: usize, k1: usize) -> Vec<(usize, usize)> {
    (0..=k0)
        .cartesian_product(0..=k1)
        .filter(|&p| p != (0, 0))
        .collect()
}

fn sorted_unique(t: &[VertexId]) -> Vec<VertexId> {
    let mut t = t.to_vec();
    t.sort_unstable();
    t.dedup();
    t
}

/// One row of a hypothesis check.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisRow {
    pub l0: usize,
    pub l1: usize,
    pub max_degree: u64,
    /// `K b^{l0+l1-1} / (m^{l0} v^{l1}) e(H) (m/r)^{[l0>0]}`.
    pub bound: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub k: Rational,
    pub rows: Vec<HypothesisRow>,
    /// Smallest `K` for which every row passes.
    pub min_k: Rational,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &HypothesisRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

/// Count of `(S0, S1)` pairs with `|S0| <= k0 b` and `|S1| <= k1 b` over `v` vertices.
pub fn fingerprint_space(v: u64, k0: u64, k1: u64, b: u64) -> BigInt {
    let side = |k: u64| {
        if k == 0 {
            BigInt::one()
        } else {
            crate::exact::binomial_prefix_sum(v, k * b)
        }
    };
    side(k0) * side(k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{pow, rat};

    fn c(z: &[u32], o: &[u32]) -> Constraint {
        Constraint::new(z.iter().copied(), o.iter().copied()).unwrap()
    }

    /// All 4-cycles of `K_n` as `(0,4)` constraints over pair indices.
    fn k_n_c4s(n: usize) -> UniformHypergraph {
        crate::pregraph::c4_copy_hypergraph(&crate::graph::LabeledGraph::complete(n))
    }

    #[test]
    fn degree_examples() {
        let h = UniformHypergraph::empty(5, 1, 2).unwrap();
        assert_eq!(h.degree(&[0], &[1]).unwrap(), 0);

        let h = UniformHypergraph::from_edges(3, 1, 2, [(c(&[0], &[1, 2]), 1)]).unwrap();
        assert_eq!(h.degree(&[0], &[1]).unwrap(), 1);
        assert_eq!(h.degree(&[1], &[]).unwrap(), 0);

        let h = UniformHypergraph::from_edges(2, 1, 1, [(c(&[0], &[1]), 1), (c(&[0], &[1]), 1)]).unwrap();
        assert_eq!(h.degree(&[0], &[]).unwrap(), 2);
        assert_eq!(h.distinct_edges(), 1);
        assert!(h.degree(&[0], &[0]).is_err());
    }

    #[test]
    fn k6_cycle_degrees() {
        let h = k_n_c4s(6);
        assert_eq!(h.edge_count(), 45);
        assert_eq!(h.max_degree(0, 1).unwrap(), 12);
        assert_eq!(h.max_degree(0, 4).unwrap(), 1);
        assert!(h.max_degree(1, 0).is_err());
        assert!(h.max_degree(0, 0).is_err());
    }

    #[test]
    fn hypothesis_examples() {
        let single = UniformHypergraph::from_edges(1, 0, 1, [(c(&[], &[0]), 1)]).unwrap();
        let rep = single.check_container_hypothesis(&int(1), 1, 1, 1).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.min_k, int(1));
        // with b = m = r = v the singleton rows need K >= v / e
        let wide = UniformHypergraph::from_edges(4, 1, 1, [(c(&[0], &[1]), 1)]).unwrap();
        assert_eq!(wide.check_container_hypothesis(&int(1), 4, 4, 4).unwrap().min_k, int(4));

        let h = k_n_c4s(6);
        let rep = h.check_container_hypothesis(&int(1), 1, 15, 1).unwrap();
        assert!(!rep.passes());
        assert!(rep.failing().any(|r| (r.l0, r.l1) == (0, 2)));
        let fixed = h.check_container_hypothesis(&rep.min_k, 1, 15, 1).unwrap();
        assert!(fixed.passes());

        assert!(UniformHypergraph::empty(3, 0, 1)
            .unwrap()
            .check_container_hypothesis(&int(1), 1, 1, 1)
            .is_err());
    }

    #[test]
    fn monotone_condition_matches_lift() {
        // Δ_l <= (b/v)^{l-1} e/r  is the (0,k) row with K = v/r
        let h = k_n_c4s(5);
        let (v, b, r) = (10u64, 2u64, 3u64);
        let rep = h.check_container_hypothesis(&rat(v as i64, r as i64), b, v, r).unwrap();
        for row in &rep.rows {
            let l = row.l1 as i64;
            let mono = pow(&rat(b as i64, v as i64), l - 1) * int(h.edge_count()) / int(r);
            assert_eq!(row.bound, mono);
        }
    }

    #[test]
    fn text_roundtrip() {
        let h = k_n_c4s(5);
        let back = UniformHypergraph::from_text(&h.to_text()).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_text(), h.to_text());
        assert!(UniformHypergraph::from_text("1 1 3\n1 | 0 | 0\n").is_err());
        assert!(UniformHypergraph::from_text("1 1\n").is_err());
    }

    #[test]
    fn sum_of_degrees_identity() {
        let h = k_n_c4s(6);
        let total: u64 = h.degree_table(0, 2).values().sum();
        assert_eq!(total, 6 * h.edge_count());
    }
}
