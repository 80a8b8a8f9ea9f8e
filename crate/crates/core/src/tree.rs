//! The container tree over pregraphs: hypergraph selection, expansion by
//! containers, leaf classification, coverage checks and `φ(m)` evaluation.

use std::fmt::Write as _;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::container::{Container, ContainerEngine, ContainerParams};
use crate::error::{Error, Result};
use crate::exact::{from_decimal, from_f64, int, ln_binomial, pow2, Rational};
use crate::graph::{choose2, pair_from_index};
use crate::hypergraph::{Assignment, UniformHypergraph};
use crate::oracle;
use crate::pregraph::{build_permissible, has_dense_subset, is_almost_split_pregraph, is_leaf_pregraph, LeafClass, Pregraph};

/// Parameters of the tree. Derived quantities follow `K = 5/β`,
/// `b = ⌊m / (ln ln n · (ln n)²)⌋`, `r = ⌊m / (2¹³ ln n)⌋`, `c = 2⁻⁴² / K`.
#[derive(Clone, Debug)]
pub struct TreeParams {
    pub n: usize,
    pub m: u64,
    pub eps: f64,
    pub delta: f64,
    pub beta: f64,
    pub lambda: f64,
    /// Constant in the lower limit `ℓ >= C √n` of the selection cases.
    pub ell_constant: f64,
    pub k: Rational,
    pub b: u64,
    pub r: u64,
    pub shrink: Rational,
    /// Run the container step even when the degree hypothesis fails.
    pub force: bool,
    /// Floors and regime conditions that bound at construction.
    pub warnings: Vec<String>,
}

impl TreeParams {
    pub fn new(n: usize, m: u64, eps: f64, delta: f64, beta: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("the tree needs n >= 3 so that ln ln n is defined"));
        }
        if m == 0 || m > choose2(n) as u64 {
            return Err(Error::invalid(format!("m = {m} outside 1..=C(n,2) for n = {n}")));
        }
        if !(eps > 0.0) || !(delta > 0.0 && delta <= 1.0) || !(beta > 0.0) {
            return Err(Error::invalid("need ε > 0, 0 < δ <= 1 and β > 0"));
        }
        let ln_n = (n as f64).ln();
        let k = Rational::from_integer(5.into()) / from_decimal(beta).expect("finite β");
        let mut warnings = Vec::new();
        let mut floor_at_one = |name: &str, raw: f64| {
            let v = raw.floor();
            if v < 1.0 {
                warnings.push(format!("{name} = {raw:.4} floors to 0; using 1"));
                1
            } else {
                v as u64
            }
        };
        let b = floor_at_one("b", m as f64 / (ln_n.ln() * ln_n * ln_n));
        let r = floor_at_one("r", m as f64 / (8192.0 * ln_n));
        let shrink = pow2(-42) / &k;
        let lambda = crate::split_counts::DEFAULT_LAMBDA;
        if m as f64 > lambda * (n * n) as f64 {
            warnings.push(format!("m = {m} exceeds λ n² = {:.3}", lambda * (n * n) as f64));
        }
        Ok(TreeParams {
            n,
            m,
            eps,
            delta,
            beta,
            lambda,
            ell_constant: 1.0,
            k,
            b,
            r,
            shrink,
            force: true,
            warnings,
        })
    }

    /// `⌈2 ln n / c + m / (c r)⌉`, saturating.
    pub fn depth_cap(&self) -> u64 {
        let inv_c = Rational::one() / &self.shrink;
        let ln2n = from_f64(2.0 * (self.n as f64).ln()).expect("finite");
        let cap = &inv_c * ln2n + inv_c * Rational::new(self.m.into(), self.r.into());
        crate::exact::ceil(&cap).to_u64().unwrap_or(u64::MAX)
    }

    /// Smallest admissible `ℓ`: `max(⌈C√n⌉, ⌈√r⌉, 1)`.
    pub fn ell_floor(&self) -> usize {
        let c = (self.ell_constant * (self.n as f64).sqrt()).ceil() as usize;
        let r = (1..).find(|&l: &u64| l * l >= self.r).unwrap_or(1) as usize;
        c.max(r).max(1)
    }
}

/// Which case of the selection produced the hypergraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SelectionCase {
    /// `e(M) >= 4ℓn` with `ℓ` maximal.
    ManyMixed,
    /// Some `ℓ`-set spans almost a clique in `E`.
    ConcentratedFixed,
    /// `ℓ` minimal with `e(M) <= (1-δ)ℓn`.
    MinimalEll,
}

/// A hypergraph returned by [`choose_hypergraph`].
#[derive(Clone, Debug)]
pub struct Selection {
    pub ell: usize,
    pub i: usize,
    pub case: SelectionCase,
    /// Hypergraph on `0..ground.len()`.
    pub h: UniformHypergraph,
    /// Colex pair index of each hypergraph vertex.
    pub ground: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum SelectionOutcome {
    Chosen(Selection),
    NotApplicable(String),
}

/// `v <= 5ℓn`, `e >= βℓ⁴`, `Δ01 <= ℓ³/n`, `Δ02 <= ℓ`, and `Δ10 <= ℓ²` when `i > 0`.
pub fn selection_caps_hold(h: &UniformHypergraph, ell: usize, n: usize, beta: f64) -> bool {
    let (i, _) = h.uniformity();
    let l = ell as u64;
    let v_ok = h.n_vertices() <= 5 * ell * n;
    let e_ok = int(h.edge_count()) >= from_decimal(beta).expect("finite β") * int(l.pow(4));
    let d = |a, b| h.max_degree(a, b).unwrap_or(0);
    let d01 = d(0, 1) as u128 * n as u128 <= (l as u128).pow(3);
    let d02 = d(0, 2) <= l;
    let d10 = i == 0 || d(1, 0) <= l * l;
    v_ok && e_ok && d01 && d02 && d10
}

/// Runs the three selection cases in order, delegating each to the permissible
/// builder, and returns the first hypergraph that meets every cap.
pub fn choose_hypergraph(p: &Pregraph, params: &TreeParams) -> Result<SelectionOutcome> {
    if is_leaf_pregraph(p, params.m, params.eps, params.delta)? != LeafClass::NotLeaf {
        return Err(Error::invalid("choose_hypergraph called on a leaf pregraph"));
    }
    let n = p.n();
    let em = p.mixed().edge_count();
    let ee = p.fixed().edge_count();
    let lo = params.ell_floor();
    let mut candidates: Vec<(usize, SelectionCase)> = Vec::new();
    let mut reasons = Vec::new();
    if lo > n {
        return Ok(SelectionOutcome::NotApplicable(format!(
            "ℓ must be at least {lo} (ℓ >= C√n and ℓ² >= r = {}) but cannot exceed n = {n}",
            params.r
        )));
    }

    let ell1 = em / (4 * n);
    if ell1 >= lo && ee <= choose2(ell1) {
        candidates.push((ell1.min(n), SelectionCase::ManyMixed));
    }
    for ell in lo..=n {
        if ee <= choose2(ell) && has_dense_subset(p.fixed(), ell, params.eps)?.is_some() {
            candidates.push((ell, SelectionCase::ConcentratedFixed));
            break;
        }
    }
    let one_minus = Rational::one() - from_decimal(params.delta).expect("finite δ");
    let ell3 = (1..=n).find(|&l| int(em as u64) <= &one_minus * int((l * n) as u64));
    match ell3 {
        Some(l) => candidates.push((l.max(lo), SelectionCase::MinimalEll)),
        None => reasons.push("no ℓ <= n with e(M) <= (1-δ)ℓn".to_string()),
    }

    for (ell, case) in candidates {
        if ((ell * ell) as u64) < params.r {
            reasons.push(format!("{case:?}: ℓ = {ell} has ℓ² < r"));
            continue;
        }
        let out = build_permissible(p, ell as u64, params.beta)?;
        match out.chosen() {
            Some((i, h)) if selection_caps_hold(h, ell, n, params.beta) => {
                return Ok(SelectionOutcome::Chosen(Selection {
                    ell,
                    i,
                    case,
                    h: h.clone(),
                    ground: out.hypergraphs.ground.clone(),
                }));
            }
            Some((i, _)) => reasons.push(format!("{case:?}: ℓ = {ell}, H_{i} breaks a cap")),
            None => reasons.push(format!(
                "{case:?}: ℓ = {ell}, good copies exhausted after {} insertions",
                out.insertions
            )),
        }
    }
    if reasons.is_empty() {
        reasons.push("no selection case applies".into());
    }
    Ok(SelectionOutcome::NotApplicable(reasons.join("; ")))
}

/// Why a node became a leaf without meeting the leaf definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FallbackReason {
    NotApplicable(String),
    Hypothesis(String),
    NoProgress,
    DepthCap,
}

impl FallbackReason {
    pub fn tag(&self) -> &'static str {
        match self {
            FallbackReason::NotApplicable(_) => "not_applicable",
            FallbackReason::Hypothesis(_) => "hypothesis",
            FallbackReason::NoProgress => "no_progress",
            FallbackReason::DepthCap => "depth_cap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeStatus {
    Internal,
    Leaf(LeafClass),
    Fallback(FallbackReason),
}

impl NodeStatus {
    pub fn is_leaf(&self) -> bool {
        !matches!(self, NodeStatus::Internal)
    }
}

/// Data recorded for the container step at an internal node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub ell: usize,
    pub i: usize,
    pub case: SelectionCase,
    pub hyper_vertices: usize,
    pub hyper_edges: u64,
    pub hypothesis_passed: bool,
    /// Whether normalisation of `(b, m)` changed them at this node.
    pub normalization_bound: bool,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: u64,
    pub pregraph: Pregraph,
    pub status: NodeStatus,
    pub expansion: Option<Expansion>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ContainerTree {
    pub params: TreeParams,
    /// Nodes in depth-first preorder; `nodes[0]` is the root.
    pub nodes: Vec<TreeNode>,
}

struct Subtree {
    pregraph: Pregraph,
    status: NodeStatus,
    expansion: Option<Expansion>,
    children: Vec<Subtree>,
}

/// Turns a container over the ground pairs into a sub-pregraph of `p`.
fn child_pregraph(p: &Pregraph, ground: &[usize], c: &Container) -> Pregraph {
    let mut q = p.clone();
    for v in c.cylinder.fixed(false) {
        let (a, b) = pair_from_index(ground[v as usize]);
        q.drop_edge(a, b);
    }
    for v in c.cylinder.fixed(true) {
        let (a, b) = pair_from_index(ground[v as usize]);
        q.fix_edge(a, b);
    }
    q
}

/// `M(Q) <= (1-c) M(P)` or `E(Q) >= E(P) + c r`.
pub fn makes_progress(parent: &Pregraph, child: &Pregraph, params: &TreeParams) -> bool {
    let c = &params.shrink;
    let m_ok = int(child.mixed().edge_count() as u64) <= (Rational::one() - c) * int(parent.mixed().edge_count() as u64);
    let e_ok = int(child.fixed().edge_count() as u64) >= int(parent.fixed().edge_count() as u64) + c * int(params.r);
    m_ok || e_ok
}

/// Largest `n` for which children are derived from the members of `F_{n,m}` directly.
pub const MEMBER_DRIVEN_MAX_N: usize = 7;

struct Ctx<'a> {
    params: &'a TreeParams,
    cap: u64,
}

/// `Q ⊆ R` as sets of graphs.
fn pregraph_within(q: &Pregraph, r: &Pregraph) -> bool {
    let (qm, qe) = q.masks();
    let (rm, re) = r.masks();
    re & !qe == 0 && (qm | qe) & !(rm | re) == 0
}

/// Drops children that hold no graph with `m` edges, then folds each child
/// that lies inside a sibling into that sibling (with its routed members).
fn prune_children(kids: Vec<(Pregraph, Vec<u64>)>, m: u64) -> Vec<(Pregraph, Vec<u64>)> {
    let mut kids: Vec<(Pregraph, Vec<u64>)> = kids
        .into_iter()
        .filter(|(q, _)| {
            let e = q.fixed().edge_count() as u64;
            e <= m && e + q.mixed().edge_count() as u64 >= m
        })
        .collect();
    if kids.first().is_none_or(|(q, _)| q.n() > 11) {
        return kids;
    }
    let mut alive = vec![true; kids.len()];
    for i in 0..kids.len() {
        let host = (0..kids.len()).find(|&j| j != i && alive[j] && pregraph_within(&kids[i].0, &kids[j].0));
        if let Some(j) = host {
            alive[i] = false;
            let moved = std::mem::take(&mut kids[i].1);
            kids[j].1.extend(moved);
        }
    }
    kids.into_iter()
        .zip(alive)
        .filter_map(|(mut k, a)| {
            a.then(|| {
                k.1.sort_unstable();
                k
            })
        })
        .collect()
}

/// `routed` lists the members of `F_{n,m}` this node is responsible for, when
/// they are known; children then only need to cover those.
fn expand(p: Pregraph, routed: Option<Vec<u64>>, depth: u64, ctx: &Ctx) -> Result<Subtree> {
    let params = ctx.params;
    let leaf = |status| Subtree {
        pregraph: p.clone(),
        status,
        expansion: None,
        children: Vec::new(),
    };
    let class = is_leaf_pregraph(&p, params.m, params.eps, params.delta)?;
    if class != LeafClass::NotLeaf {
        return Ok(leaf(NodeStatus::Leaf(class)));
    }
    if depth >= ctx.cap {
        return Ok(leaf(NodeStatus::Fallback(FallbackReason::DepthCap)));
    }
    let sel = match choose_hypergraph(&p, params)? {
        SelectionOutcome::Chosen(s) => s,
        SelectionOutcome::NotApplicable(why) => {
            return Ok(leaf(NodeStatus::Fallback(FallbackReason::NotApplicable(why))));
        }
    };
    let cp = ContainerParams {
        k: params.k.clone(),
        b: params.b,
        m: params.m,
        r: params.r,
        force: params.force,
    };
    let engine = match ContainerEngine::new(sel.h.clone(), &cp) {
        Ok(e) => e,
        Err(Error::Hypothesis { min_k, .. }) => {
            return Ok(leaf(NodeStatus::Fallback(FallbackReason::Hypothesis(format!("needs K >= {min_k}")))));
        }
        Err(e) => return Err(e),
    };
    let expansion = Expansion {
        ell: sel.ell,
        i: sel.i,
        case: sel.case,
        hyper_vertices: sel.h.n_vertices(),
        hyper_edges: sel.h.edge_count(),
        hypothesis_passed: engine.report().passes(),
        normalization_bound: engine.normalization_bound(),
    };
    let kids: Vec<(Pregraph, Vec<u64>)> = match routed {
        Some(members) => {
            let hs: Vec<Assignment> = members
                .iter()
                .map(|&g| Assignment::from_bits(sel.ground.iter().map(|&pair| g >> pair & 1 == 1).collect()))
                .collect();
            let by_child = engine
                .containers_of(&hs)?
                .into_iter()
                .map(|(c, idx)| (child_pregraph(&p, &sel.ground, &c), idx.into_iter().map(|i| members[i]).collect::<Vec<u64>>()));
            let mut merged: Vec<(Pregraph, Vec<u64>)> = Vec::new();
            for (q, gs) in by_child {
                match merged.iter_mut().find(|(r, _)| *r == q) {
                    Some(slot) => slot.1.extend(gs),
                    None => merged.push((q, gs)),
                }
            }
            merged
        }
        None => {
            // graphs in F_{n,m} ∩ P have exactly m - e(E) edges in M
            let mut seen = std::collections::HashSet::new();
            engine
                .enumerate(params.m as usize - p.fixed().edge_count())
                .iter()
                .map(|c| child_pregraph(&p, &sel.ground, c))
                .filter(|q| seen.insert(q.clone()))
                .map(|q| (q, Vec::new()))
                .collect()
        }
    };
    let with_members = kids.first().is_some_and(|k| !k.1.is_empty());
    let kids = prune_children(kids, params.m);
    let children = kids
        .into_par_iter()
        .map(|(q, gs)| {
            if makes_progress(&p, &q, params) {
                expand(q, with_members.then_some(gs), depth + 1, ctx)
            } else {
                Ok(Subtree {
                    pregraph: q,
                    status: NodeStatus::Fallback(FallbackReason::NoProgress),
                    expansion: None,
                    children: Vec::new(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Subtree {
        pregraph: p,
        status: NodeStatus::Internal,
        expansion: Some(expansion),
        children,
    })
}

fn flatten(t: Subtree, parent: Option<usize>, depth: u64, out: &mut Vec<TreeNode>) -> usize {
    let id = out.len();
    out.push(TreeNode {
        id,
        parent,
        depth,
        pregraph: t.pregraph,
        status: t.status,
        expansion: t.expansion,
        children: Vec::new(),
    });
    for c in t.children {
        let cid = flatten(c, Some(id), depth + 1, out);
        out[id].children.push(cid);
    }
    id
}

/// Builds the tree from the complete pregraph. Children are ordered by the
/// fingerprint of the container that produced them, so the output does not
/// depend on thread scheduling.
pub fn build_tree(params: &TreeParams) -> Result<ContainerTree> {
    let members = if params.n <= MEMBER_DRIVEN_MAX_N {
        let mut by_m = oracle::fnm_c4_masks(params.n)?;
        Some(std::mem::take(&mut by_m[params.m as usize]))
    } else {
        None
    };
    let ctx = Ctx {
        params,
        cap: params.depth_cap(),
    };
    let root = expand(Pregraph::complete(params.n), members, 0, &ctx)?;
    let mut nodes = Vec::new();
    flatten(root, None, 0, &mut nodes);
    Ok(ContainerTree {
        params: params.clone(),
        nodes,
    })
}

/// Which discard case a non-almost-split leaf falls under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DiscardCase {
    /// `e(E) > m` or `e(M)` below the underflow threshold.
    Sparse,
    /// Some `ℓ` has `e(E) >= C(ℓ,2)` and `e(M) <= (1-δ)ℓn`.
    Ratio(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafClassification {
    pub almost_split: Vec<usize>,
    pub discarded: Vec<(usize, DiscardCase)>,
    pub fallback: Vec<usize>,
}

impl ContainerTree {
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|x| x.status.is_leaf())
    }

    pub fn height(&self) -> u64 {
        self.nodes.iter().map(|x| x.depth).max().unwrap_or(0)
    }

    /// Partitions the leaves: fallback leaves, then `ε`-almost split ones, then
    /// the rest tagged by discard case.
    pub fn classify_leaves(&self, eps: f64) -> Result<LeafClassification> {
        let mut out = LeafClassification::default();
        for leaf in self.leaves() {
            if matches!(leaf.status, NodeStatus::Fallback(_)) {
                out.fallback.push(leaf.id);
            } else if is_almost_split_pregraph(&leaf.pregraph, eps).is_some() {
                out.almost_split.push(leaf.id);
            } else {
                let case = match is_leaf_pregraph(&leaf.pregraph, self.params.m, eps, self.params.delta)? {
                    LeafClass::RatioLeaf(l) => DiscardCase::Ratio(l),
                    _ => DiscardCase::Sparse,
                };
                out.discarded.push((leaf.id, case));
            }
        }
        Ok(out)
    }

    /// `ln C(e(M), m - e(E))`, an upper bound on the graphs of `F_{n,m}` in a node.
    pub fn log_graph_count(&self, id: usize) -> f64 {
        let p = &self.nodes[id].pregraph;
        let ee = p.fixed().edge_count() as u64;
        if ee > self.params.m {
            return f64::NEG_INFINITY;
        }
        ln_binomial(p.mixed().edge_count() as f64, (self.params.m - ee) as f64)
    }

    /// Lines `node_id parent_id status |M| |E| classification`, optionally
    /// followed by each node's pregraph indented by two spaces.
    pub fn to_text(&self, with_pregraphs: bool) -> String {
        let mut out = String::from("# node_id parent_id status |M| |E| classification\n");
        for x in &self.nodes {
            let (status, class) = match &x.status {
                NodeStatus::Internal => ("internal", "-".to_string()),
                NodeStatus::Leaf(c) => ("leaf", c.name()),
                NodeStatus::Fallback(r) => ("fallback", r.tag().to_string()),
            };
            let parent = x.parent.map_or("-".into(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{} {} {} {} {} {}",
                x.id,
                parent,
                status,
                x.pregraph.mixed().edge_count(),
                x.pregraph.fixed().edge_count(),
                class
            );
            if with_pregraphs {
                for line in x.pregraph.to_text().lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
        out
    }

    pub fn summary(&self) -> Result<TreeSummary> {
        let cls = self.classify_leaves(self.params.eps)?;
        let mut leaves = Vec::new();
        for leaf in self.leaves() {
            let class = match &leaf.status {
                NodeStatus::Leaf(c) => c.name(),
                NodeStatus::Fallback(r) => format!("fallback:{}", r.tag()),
                NodeStatus::Internal => unreachable!(),
            };
            let log_count = self.log_graph_count(leaf.id);
            leaves.push(LeafSummary {
                id: leaf.id,
                class,
                log_count: log_count.is_finite().then_some(log_count),
            });
        }
        Ok(TreeSummary {
            n: self.params.n,
            m: self.params.m,
            b: self.params.b,
            r: self.params.r,
            k: self.params.k.to_string(),
            nodes: self.nodes.len(),
            height: self.height(),
            almost_split: cls.almost_split.len(),
            discarded: cls.discarded.len(),
            fallback: cls.fallback.len(),
            warnings: self.params.warnings.clone(),
            leaves,
        })
    }

    /// Checks every given graph mask against the leaves (`n <= 11`).
    pub fn coverage(&self, masks: &[u64]) -> CoverageReport {
        let leaves: Vec<(u64, u64)> = self.leaves().map(|x| x.pregraph.masks()).collect();
        let escapes: Vec<u64> = masks
            .par_iter()
            .copied()
            .filter(|&g| !leaves.iter().any(|&(m, e)| g & e == e && g & !(m | e) == 0))
            .collect();
        CoverageReport {
            total: masks.len(),
            covered: masks.len() - escapes.len(),
            escapes,
        }
    }

    /// Coverage of all of `F_{n,m}(C4)` by exhaustive enumeration, `n <= 7`.
    pub fn coverage_exhaustive(&self) -> Result<CoverageReport> {
        let groups = oracle::fnm_c4_masks(self.params.n)?;
        Ok(self.coverage(&groups[self.params.m as usize]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub total: usize,
    pub covered: usize,
    pub escapes: Vec<u64>,
}

impl CoverageReport {
    pub fn is_total(&self) -> bool {
        self.escapes.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafSummary {
    pub id: usize,
    pub class: String,
    /// Natural log of `C(e(M), m - e(E))`; absent when the leaf holds no graph.
    pub log_count: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeSummary {
    pub n: usize,
    pub m: u64,
    pub b: u64,
    pub r: u64,
    pub k: String,
    pub nodes: usize,
    pub height: u64,
    pub almost_split: usize,
    pub discarded: usize,
    pub fallback: usize,
    pub warnings: Vec<String>,
    pub leaves: Vec<LeafSummary>,
}

/// How `|F_{n,m}(C4)|` enters `φ(m) = |F_{n,m}(C4)| (p/(1-p))^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiMode {
    /// Exhaustive count, `n <= 8`.
    Exact,
    /// `(c n p / √(m ln(n²/m)))^m`.
    Lower { c: f64 },
    /// `(C n p / √(m ln(n²/m)))^m`.
    Upper { c: f64 },
    /// `(e n² p / (2m(1-p)))^m`.
    TrivialUpper,
    /// `((e-γ) n² p / (2m(1-p)))^m`, meaningful only for sparse `m`.
    Deletion { gamma: f64 },
}

/// Constant of the lower bound, fitted on the exact counts for `4 <= n <= 8`
/// and rounded down.
pub const PHI_FITTED_LOWER_C: f64 = 0.6;
/// Constant of the container upper bound, fitted the same way and rounded up.
pub const PHI_FITTED_UPPER_C: f64 = 14.3;

/// `ln φ(m)`.
pub fn phi_log(n: usize, m: u64, p: f64, mode: PhiMode) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p must lie in (0, 1)"));
    }
    let odds = (p / (1.0 - p)).ln();
    let mf = m as f64;
    let nf = n as f64;
    if m == 0 && !matches!(mode, PhiMode::Exact) {
        return Ok(0.0);
    }
    let bound_regime = || {
        if m as usize > choose2(n) {
            Err(Error::invalid(format!("m = {m} exceeds C({n},2)")))
        } else {
            Ok((mf * (nf * nf / mf).ln()).sqrt())
        }
    };
    match mode {
        PhiMode::Exact => {
            let count = oracle::count_fnm_c4(n, m as usize)?;
            Ok((count as f64).ln() + mf * odds)
        }
        PhiMode::Lower { c } => Ok(mf * (c * nf * p / bound_regime()?).ln()),
        PhiMode::Upper { c } => Ok(mf * (c * nf * p / bound_regime()?).ln()),
        PhiMode::TrivialUpper => {
            bound_regime()?;
            Ok(mf * (std::f64::consts::E * nf * nf * p / (2.0 * mf * (1.0 - p))).ln())
        }
        PhiMode::Deletion { gamma } => {
            bound_regime()?;
            Ok(mf * ((std::f64::consts::E - gamma) * nf * nf * p / (2.0 * mf * (1.0 - p))).ln())
        }
    }
}

/// Grid used to fit and check the `φ` constants.
pub fn phi_grid() -> Vec<(usize, u64, f64)> {
    let mut out = Vec::new();
    for n in 4..=8usize {
        for m in 1..=choose2(n) as u64 {
            for p in [0.01, 0.1, 0.25, 0.5] {
                out.push((n, m, p));
            }
        }
    }
    out
}

/// Tightest `(c, C)` making the bounds bracket the exact values on the grid.
pub fn fit_phi_constants() -> Result<(f64, f64)> {
    let tables: Vec<Vec<u64>> = (4..=8)
        .map(|n| {
            if n <= 7 {
                oracle::fnm_table_by_mask_scan(n)
            } else {
                oracle::fnm_table_by_extension(n)
            }
        })
        .collect::<Result<_>>()?;
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for (n, m, p) in phi_grid() {
        let count = tables[n - 4][m as usize] as f64;
        let (nf, mf) = (n as f64, m as f64);
        let s = (mf * (nf * nf / mf).ln()).sqrt();
        // exact = ln count + m ln p - m ln(1-p) against m ln(c n p / s)
        let c = ((count.ln() - mf * (1.0 - p).ln()) / mf).exp() * s / nf;
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;

    #[test]
    fn params_at_n7() {
        let p = TreeParams::new(7, 10, 0.01, 0.25, 0.05).unwrap();
        assert_eq!(p.k, int(100));
        assert_eq!(p.b, 3);
        assert_eq!(p.r, 1);
        assert!(p.warnings.iter().any(|w| w.starts_with("r =")));
        assert!(p.depth_cap() > 1 << 40);
        assert_eq!(p.ell_floor(), 3);
        assert!(TreeParams::new(7, 0, 0.01, 0.25, 0.05).is_err());
        assert!(TreeParams::new(2, 1, 0.01, 0.25, 0.05).is_err());
    }

    #[test]
    fn tiny_pregraph_is_not_applicable() {
        let mut params = TreeParams::new(4, 6, 0.01, 0.25, 0.05).unwrap();
        params.r = 100;
        params.eps = 1e-9;
        let p = Pregraph::complete(4);
        assert_eq!(is_leaf_pregraph(&p, 6, 1e-9, 0.25).unwrap(), LeafClass::NotLeaf);
        assert!(matches!(choose_hypergraph(&p, &params).unwrap(), SelectionOutcome::NotApplicable(_)));
    }

    #[test]
    fn leaf_input_is_rejected() {
        let params = TreeParams::new(7, 10, 0.01, 0.25, 0.05).unwrap();
        let e = LabeledGraph::complete(7);
        let p = Pregraph::new(LabeledGraph::empty(7), e).unwrap();
        assert!(choose_hypergraph(&p, &params).is_err());
    }

    #[test]
    fn almost_split_root_is_single_leaf() {
        let params = TreeParams::new(7, 10, 0.5, 0.25, 0.05).unwrap();
        let t = build_tree(&params).unwrap();
        assert_eq!(t.nodes.len(), 1);
        let cls = t.classify_leaves(0.5).unwrap();
        assert_eq!(cls.almost_split, vec![0]);
    }

    #[test]
    fn small_tree_covers_and_progresses() {
        let params = TreeParams::new(7, 8, 0.01, 0.25, 0.05).unwrap();
        let t = build_tree(&params).unwrap();
        assert!(t.nodes.len() > 1);
        assert!(t.coverage_exhaustive().unwrap().is_total());
        for x in &t.nodes {
            if let Some(p) = x.parent {
                let (pm, pe) = t.nodes[p].pregraph.masks();
                let (m, e) = x.pregraph.masks();
                assert_eq!(e & pe, pe);
                assert_eq!(m & !pm, 0);
                assert_eq!((m | e) & !(pm | pe), 0);
                assert!(
                    makes_progress(&t.nodes[p].pregraph, &x.pregraph, &params)
                        || x.status == NodeStatus::Fallback(FallbackReason::NoProgress)
                );
            }
        }
    }

    #[test]
    fn phi_exact_and_limits() {
        let v = phi_log(6, 5, 0.25, PhiMode::Exact).unwrap();
        let count = oracle::count_fnm_c4(6, 5).unwrap() as f64;
        assert!((v - (count.ln() + 5.0 * (0.25f64 / 0.75).ln())).abs() < 1e-9);
        let a = phi_log(6, 5, 1e-3, PhiMode::Exact).unwrap();
        let b = phi_log(6, 5, 1e-9, PhiMode::Exact).unwrap();
        assert!(b < a);
        assert!(phi_log(6, 5, 0.0, PhiMode::Exact).is_err());
    }
}
