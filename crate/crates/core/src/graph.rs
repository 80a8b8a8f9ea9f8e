//! Simple labelled graphs on `{0, .., n-1}`, pair indexing for `E(K_n)` and
//! the graph6 ASCII encoding.

use std::fmt;

use crate::error::{Error, Result};

/// Number of unordered pairs of an `n`-set.
#[inline]
pub const fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Colex index of the pair `{u, v}`: pairs are ordered `01, 02, 12, 03, 13, 23, ..`.
///
/// This is also the bit order of the graph6 upper-triangle encoding.
#[inline]
pub fn pair_index(u: usize, v: usize) -> usize {
    debug_assert_ne!(u, v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(idx: usize) -> (usize, usize) {
    // largest b with b(b-1)/2 <= idx
    let mut b = (((8 * idx + 1) as f64).sqrt() as usize + 1) / 2;
    while b * (b - 1) / 2 > idx {
        b -= 1;
    }
    while (b + 1) * b / 2 <= idx {
        b += 1;
    }
    (idx - b * (b - 1) / 2, b)
}

/// A labelled simple graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: usize,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        LabeledGraph {
            n,
            words,
            adj: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            for u in 0..v {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::invalid(format!("bad edge {u}-{v} for n = {n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a mask over the colex pair order (`n <= 11`).
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::empty(n);
        let mut rest = mask;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = pair_from_index(idx);
            g.add_edge(u, v);
        }
        g
    }

    /// Mask over the colex pair order; only meaningful for `n <= 11`.
    pub fn pair_mask(&self) -> u64 {
        assert!(choose2(self.n) <= 64, "pair mask needs C(n,2) <= 64");
        self.edges().fold(0u64, |acc, (u, v)| acc | 1 << pair_index(u, v))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Neighbourhood of `v` as a bitmask; requires `n <= 64`.
    #[inline]
    pub fn adjacency_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.row(v)[0]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.has_edge(u, v) {
            return false;
        }
        let w = self.words;
        self.adj[u * w + v / 64] |= 1 << (v % 64);
        self.adj[v * w + u / 64] |= 1 << (u % 64);
        self.edges += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let w = self.words;
        self.adj[u * w + v / 64] &= !(1 << (v % 64));
        self.adj[v * w + u / 64] &= !(1 << (u % 64));
        self.edges -= 1;
        true
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Edges `(u, v)` with `u < v`, in colex order of `v` then `u`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.n).flat_map(move |v| (0..v).filter(move |&u| self.has_edge(u, v)).map(move |u| (u, v)))
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &[usize]) -> usize {
        let mut count = 0;
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if self.has_edge(u, v) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Encodes the graph in graph6 format (without the optional `>>graph6<<` header).
    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        encode_graph6_size(self.n, &mut out);
        let mut acc = 0u8;
        let mut nbits = 0;
        for v in 1..self.n {
            for u in 0..v {
                acc = acc << 1 | self.has_edge(u, v) as u8;
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 output is ASCII")
    }

    /// Decodes a single graph6 line. A leading `>>graph6<<` header is accepted.
    pub fn from_graph6(text: &str) -> Result<Self> {
        let text = text.trim_end_matches(['\n', '\r']);
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(Error::parse(1, "graph6 byte outside 63..=126"));
        }
        let (n, body) = decode_graph6_size(bytes)?;
        let needed = choose2(n).div_ceil(6);
        if body.len() != needed {
            return Err(Error::parse(
                1,
                format!("graph6 body has {} bytes, expected {needed}", body.len()),
            ));
        }
        let mut g = Self::empty(n);
        let mut bit = 0usize;
        for v in 1..n {
            for u in 0..v {
                let byte = body[bit / 6] - 63;
                if byte >> (5 - bit % 6) & 1 == 1 {
                    g.add_edge(u, v);
                }
                bit += 1;
            }
        }
        Ok(g)
    }
}

fn encode_graph6_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

fn decode_graph6_size(bytes: &[u8]) -> Result<(usize, &[u8])> {
    let take = |k: usize, from: usize| -> Result<usize> {
        let chunk = bytes
            .get(from..from + k)
            .ok_or_else(|| Error::parse(1, "truncated graph6 size field"))?;
        Ok(chunk.iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize))
    };
    match bytes {
        [] => Err(Error::parse(1, "empty graph6 string")),
        [126, 126, ..] => Ok((take(6, 2)?, &bytes[8..])),
        [126, ..] => Ok((take(3, 1)?, &bytes[4..])),
        [b, ..] => Ok(((b - 63) as usize, &bytes[1..])),
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph(n={}, ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_roundtrip() {
        let mut idx = 0;
        for v in 1..40 {
            for u in 0..v {
                assert_eq!(pair_index(u, v), idx);
                assert_eq!(pair_from_index(idx), (u, v));
                idx += 1;
            }
        }
    }

    #[test]
    fn graph6_known_strings() {
        // K4 and the 4-cycle 0-1-2-3-0, checked against nauty's `showg` conventions
        assert_eq!(LabeledGraph::complete(4).to_graph6(), "C~");
        let c4 = LabeledGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(c4.to_graph6(), "Cl");
        assert_eq!(LabeledGraph::from_graph6("Cr").unwrap().edges().collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(LabeledGraph::empty(0).to_graph6(), "?");
        let petersen = LabeledGraph::from_graph6("IheA@GUAo").unwrap();
        assert_eq!(petersen.n(), 10);
        assert_eq!(petersen.edge_count(), 15);
        assert!((0..10).all(|v| petersen.degree(v) == 3));
    }

    #[test]
    fn graph6_long_size_field() {
        let mut g = LabeledGraph::empty(100);
        g.add_edge(3, 97);
        g.add_edge(0, 1);
        let s = g.to_graph6();
        assert!(s.starts_with('~'));
        assert_eq!(LabeledGraph::from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_bad_length() {
        assert!(LabeledGraph::from_graph6("C~~").is_err());
        assert!(LabeledGraph::from_graph6("").is_err());
    }
}
