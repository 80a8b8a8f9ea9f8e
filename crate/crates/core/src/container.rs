//! The asymmetric container algorithm.
//!
//! A container is built in at most `k0 + k1` rounds. Each round questions the
//! input assignment about one vertex at a time ("is `h(v) = c`?"). Rounds are
//! exposed as resumable state machines so the same code path serves both
//! [`ContainerEngine::build`] for a concrete `h` and
//! [`ContainerEngine::enumerate`], which explores every consistent answer
//! sequence.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, pow, pow2, Rational};
use crate::hypergraph::{admissible, Assignment, Constraint, HypothesisReport, UniformHypergraph, VertexId};

/// Applies `m <- v` if `m > v`, `b <- v` if `b > v`, then `m <- b` if `b > m`.
pub fn normalize_parameters(b: u64, m: u64, v: u64) -> (u64, u64) {
    let m = m.min(v);
    let b = b.min(v);
    (b, m.max(b))
}

/// The uniformity set `U = {(1,0), .., (k0,0), (k0,1), .., (k0,k1)}`.
pub fn uniformity_set(k0: usize, k1: usize) -> Vec<(usize, usize)> {
    (1..=k0).map(|i| (i, 0)).chain((1..=k1).map(|i| (k0, i))).collect()
}

/// The bit `c` compatible with `(i0, i1)`: 1 exactly when `i1 > 0`.
pub fn compatible_bit(i: (usize, usize)) -> bool {
    i.1 > 0
}

/// Uniformity after one round from `(i0, i1)`.
pub fn next_uniformity(i: (usize, usize)) -> (usize, usize) {
    if i.1 > 0 {
        (i.0, i.1 - 1)
    } else {
        (i.0 - 1, 0)
    }
}

/// Degree caps `Δ^{(i0,i1)}_{(l0,l1)}` derived from the base degrees of `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSchedule {
    k0: usize,
    k1: usize,
    b: u64,
    m: u64,
    v: u64,
    base: Vec<u64>,
}

impl DeltaSchedule {
    /// Base table indexed by `l0 * (k1 + 1) + l1`; entry `(0,0)` is ignored.
    pub fn from_table(k0: usize, k1: usize, b: u64, m: u64, v: u64, base: Vec<u64>) -> Result<Self> {
        if (k0, k1) == (0, 0) {
            return Err(Error::invalid("schedule needs k0 + k1 >= 1"));
        }
        if base.len() != (k0 + 1) * (k1 + 1) {
            return Err(Error::invalid("base table has the wrong size"));
        }
        if b == 0 || m == 0 || v == 0 {
            return Err(Error::invalid("b, m, v must be positive"));
        }
        Ok(DeltaSchedule { k0, k1, b, m, v, base })
    }

    pub fn from_hypergraph(h: &UniformHypergraph, b: u64, m: u64) -> Result<Self> {
        let (k0, k1) = h.uniformity();
        let mut base = vec![0; (k0 + 1) * (k1 + 1)];
        for (l0, l1) in admissible(k0, k1) {
            base[l0 * (k1 + 1) + l1] = h.max_degree_unchecked(l0, l1);
        }
        Self::from_table(k0, k1, b, m, h.n_vertices() as u64, base)
    }

    pub fn uniformity(&self) -> (usize, usize) {
        (self.k0, self.k1)
    }

    pub fn base(&self, l0: usize, l1: usize) -> u64 {
        self.base[l0 * (self.k1 + 1) + l1]
    }

    fn check_index(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Result<()> {
        if !uniformity_set(self.k0, self.k1).contains(&(i0, i1)) {
            return Err(Error::invalid(format!("({i0},{i1}) is not in the uniformity set")));
        }
        if l0 > i0 || l1 > i1 || (l0, l1) == (0, 0) {
            return Err(Error::invalid(format!("degree index ({l0},{l1}) outside ({i0},{i1})")));
        }
        Ok(())
    }

    fn b_over_v(&self) -> Rational {
        Rational::new(self.b.into(), self.v.into())
    }

    fn b_over_m(&self) -> Rational {
        Rational::new(self.b.into(), self.m.into())
    }

    /// Value by the defining recursion.
    pub fn recursive(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Result<Rational> {
        self.check_index(i0, i1, l0, l1)?;
        Ok(self.rec(i0, i1, l0, l1))
    }

    fn rec(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Rational {
        let two = int(2);
        if (i0, i1) == (self.k0, self.k1) {
            int(self.base(l0, l1))
        } else if i0 == self.k0 {
            let a = &two * self.rec(i0, i1 + 1, l0, l1 + 1);
            let b = self.b_over_v() * self.rec(i0, i1 + 1, l0, l1);
            a.max(b)
        } else {
            let a = &two * self.rec(i0 + 1, 0, l0 + 1, 0);
            let b = self.b_over_m() * self.rec(i0 + 1, 0, l0, 0);
            a.max(b)
        }
    }

    /// Value by the explicit maximum over `0 <= d_j <= k_j - i_j`.
    pub fn closed_form(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Result<Rational> {
        self.check_index(i0, i1, l0, l1)?;
        let (bv, bm) = (self.b_over_v(), self.b_over_m());
        let mut best = Rational::zero();
        for d0 in 0..=self.k0 - i0 {
            for d1 in 0..=self.k1 - i1 {
                let val = pow2((d0 + d1) as i64)
                    * pow(&bv, (self.k1 - i1 - d1) as i64)
                    * pow(&bm, (self.k0 - i0 - d0) as i64)
                    * int(self.base(l0 + d0, l1 + d1));
                if val > best {
                    best = val;
                }
            }
        }
        Ok(best)
    }

    pub fn value(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Result<Rational> {
        self.closed_form(i0, i1, l0, l1)
    }

    /// Every `Δ^{(i)}_{(l)}` of uniformity `i`, as the closed form.
    ///
    /// Works over the common denominator `v^{k1} m^{k0}`, so the maximum is
    /// taken over integers and only one reduction happens per value.
    pub fn values_at(&self, i: (usize, usize)) -> Vec<((usize, usize), Rational)> {
        if i == (0, 0) {
            return Vec::new();
        }
        let top = self.k0 + self.k1;
        let powers = |x: u64| -> Vec<BigInt> {
            std::iter::successors(Some(BigInt::from(1)), |p| Some(p * x)).take(top + 1).collect()
        };
        let (pb, pv, pm, p2) = (powers(self.b), powers(self.v), powers(self.m), powers(2));
        let denom = &pv[self.k1] * &pm[self.k0];
        admissible(i.0, i.1)
            .into_iter()
            .map(|(l0, l1)| {
                let mut best = BigInt::zero();
                for d0 in 0..=self.k0 - i.0 {
                    for d1 in 0..=self.k1 - i.1 {
                        let base = self.base(l0 + d0, l1 + d1);
                        if base == 0 {
                            continue;
                        }
                        let (a, c) = (self.k1 - i.1 - d1, self.k0 - i.0 - d0);
                        let val = &p2[d0 + d1] * &pb[a + c] * &pv[self.k1 - a] * &pm[self.k0 - c] * base;
                        if val > best {
                            best = val;
                        }
                    }
                }
                ((l0, l1), Rational::new(best, denom.clone()))
            })
            .collect()
    }

    /// Saturation thresholds `⌈Δ^{(i)}_{(l)} / 2⌉` for every shape of uniformity `i`.
    fn thresholds(&self, i: (usize, usize)) -> Vec<((usize, usize), u64)> {
        thresholds_from(&self.values_at(i))
    }
}

fn thresholds_from(values: &[((usize, usize), Rational)]) -> Vec<((usize, usize), u64)> {
    values
        .iter()
        .map(|(l, d)| {
            let half = (d / int(2)).ceil().to_integer();
            (*l, half.to_u64().unwrap_or(u64::MAX))
        })
        .collect()
}

/// A partial assignment `V -> {0, 1, *}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    labels: Vec<Option<bool>>,
}

impl Cylinder {
    pub fn free(n: usize) -> Self {
        Cylinder { labels: vec![None; n] }
    }

    pub fn label(&self, v: VertexId) -> Option<bool> {
        self.labels[v as usize]
    }

    pub fn set(&mut self, v: VertexId, value: bool) {
        self.labels[v as usize] = Some(value);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertices labelled `value`.
    pub fn fixed(&self, value: bool) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len() as VertexId).filter(move |&v| self.label(v) == Some(value))
    }

    pub fn count(&self, value: bool) -> usize {
        self.fixed(value).count()
    }

    /// Whether `h` agrees with every non-`*` label.
    pub fn contains(&self, h: &Assignment) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(v, l)| l.is_none_or(|x| h.get(v as VertexId) == x))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let labels = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(Error::parse(1, format!("bad cylinder symbol {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Cylinder { labels })
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            f.write_str(match l {
                Some(false) => "0",
                Some(true) => "1",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// The witness pair `(S0, S1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub s0: BTreeSet<VertexId>,
    pub s1: BTreeSet<VertexId>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}|{{{}}}", self.s0.iter().join(","), self.s1.iter().join(","))
    }
}

/// One line of a round trace: `j v_j answer |A| |G*|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub j: usize,
    pub vertex: VertexId,
    pub yes: bool,
    pub alive: u64,
    pub g_star: u64,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ans = if self.yes { "YES" } else { "NO" };
        write!(f, "{} {} {} {} {}", self.j, self.vertex, ans, self.alive, self.g_star)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundResult {
    pub g_star: UniformHypergraph,
    pub steps: usize,
    pub v_seq: Vec<VertexId>,
    pub yes: Vec<usize>,
    pub no: Vec<usize>,
    pub trace: Vec<TraceLine>,
}

type Tuple = (Vec<VertexId>, Vec<VertexId>);

/// One round of the algorithm, paused whenever it needs an answer.
#[derive(Clone)]
pub struct RoundState {
    g: Arc<UniformHypergraph>,
    c: bool,
    next: (usize, usize),
    budget: usize,
    alive: Vec<bool>,
    alive_mult: u64,
    score: Vec<u64>,
    thresholds: Arc<Vec<((usize, usize), u64)>>,
    g_star: BTreeMap<Constraint, u64>,
    g_star_total: u64,
    g_star_deg: HashMap<Tuple, u64>,
    saturated: HashSet<Tuple>,
    v_seq: Vec<VertexId>,
    yes: Vec<usize>,
    no: Vec<usize>,
    pending: Option<VertexId>,
    finished: bool,
    trace: Vec<TraceLine>,
}

impl RoundState {
    /// Starts a round on `g` (whose uniformity must lie in the schedule's `U`)
    /// asking about bit `c` with YES budget `b`.
    pub fn new(g: Arc<UniformHypergraph>, c: bool, b: u64, sched: &DeltaSchedule) -> Result<Self> {
        let i = g.uniformity();
        if !uniformity_set(sched.k0, sched.k1).contains(&i) {
            return Err(Error::invalid(format!("uniformity {i:?} is not in the schedule's set")));
        }
        if compatible_bit(i) != c {
            return Err(Error::invalid(format!("bit {} is not compatible with {i:?}", c as u8)));
        }
        let next = next_uniformity(i);
        Ok(Self::start(g, c, b, Arc::new(sched.thresholds(next)), next))
    }

    fn start(
        g: Arc<UniformHypergraph>,
        c: bool,
        b: u64,
        thresholds: Arc<Vec<((usize, usize), u64)>>,
        next: (usize, usize),
    ) -> Self {
        let n = g.n_vertices();
        let mut score = vec![0; n];
        for (e, mult) in g.edges() {
            for &v in e.side(c) {
                score[v as usize] += mult;
            }
        }
        RoundState {
            alive: vec![true; g.distinct_edges()],
            alive_mult: g.edge_count(),
            g,
            c,
            next,
            budget: b.min(usize::MAX as u64) as usize,
            score,
            thresholds,
            g_star: BTreeMap::new(),
            g_star_total: 0,
            g_star_deg: HashMap::new(),
            saturated: HashSet::new(),
            v_seq: Vec::new(),
            yes: Vec::new(),
            no: Vec::new(),
            pending: None,
            finished: false,
            trace: Vec::new(),
        }
    }

    pub fn bit(&self) -> bool {
        self.c
    }

    /// The vertex `v_j` to ask about next, or `None` once the round has stopped.
    pub fn question(&mut self) -> Option<VertexId> {
        if self.finished {
            return None;
        }
        if self.pending.is_none() {
            if self.yes.len() >= self.budget || self.alive_mult == 0 {
                self.finished = true;
                return None;
            }
            // c-maximum vertex, ties to the smallest id
            let (v, _) = self
                .score
                .iter()
                .enumerate()
                .fold((0, 0), |best, (v, &s)| if s > best.1 { (v, s) } else { best });
            self.pending = Some(v as VertexId);
        }
        self.pending
    }

    /// Records the answer to the pending question and performs the cleanup step.
    pub fn answer(&mut self, yes: bool) {
        let v = self.pending.take().expect("answer without a pending question");
        let j = self.v_seq.len();
        self.v_seq.push(v);
        let c = self.c;
        let touching: Vec<u32> = self
            .g
            .incident(v)
            .iter()
            .copied()
            .filter(|&i| self.alive[i as usize] && self.g.edges()[i as usize].0.side(c).contains(&v))
            .collect();
        let mut fresh = Vec::new();
        if yes {
            self.yes.push(j);
            for &i in &touching {
                let (e, mult) = &self.g.edges()[i as usize];
                let derived = e.without(v, c);
                self.add_to_g_star(derived, *mult, &mut fresh);
            }
        } else {
            self.no.push(j);
        }
        for i in touching {
            self.kill(i);
        }
        for (t0, t1) in fresh {
            let g = Arc::clone(&self.g);
            let anchor = t0.first().or(t1.first()).copied().expect("non-empty tuple");
            for &i in g.incident(anchor) {
                if self.alive[i as usize] && g.edges()[i as usize].0.contains(&t0, &t1) {
                    self.kill(i);
                }
            }
        }
        self.trace.push(TraceLine {
            j,
            vertex: v,
            yes,
            alive: self.alive_mult,
            g_star: self.g_star_total,
        });
    }

    fn add_to_g_star(&mut self, e: Constraint, mult: u64, fresh: &mut Vec<Tuple>) {
        for &((l0, l1), threshold) in self.thresholds.iter() {
            for s0 in e.zeros().iter().copied().combinations(l0) {
                for s1 in e.ones().iter().copied().combinations(l1) {
                    let key = (s0.clone(), s1);
                    let d = self.g_star_deg.entry(key.clone()).or_insert(0);
                    *d += mult;
                    if *d >= threshold && self.saturated.insert(key.clone()) {
                        fresh.push(key);
                    }
                }
            }
        }
        self.g_star_total += mult;
        *self.g_star.entry(e).or_insert(0) += mult;
    }

    fn kill(&mut self, i: u32) {
        if !std::mem::replace(&mut self.alive[i as usize], false) {
            return;
        }
        let (e, mult) = &self.g.edges()[i as usize];
        self.alive_mult -= mult;
        for &u in e.side(self.c) {
            self.score[u as usize] -= mult;
        }
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn g_star_edges(&self) -> u64 {
        self.g_star_total
    }

    pub fn result(&self) -> RoundResult {
        let n = self.g.n_vertices();
        let g_star = if self.next == (0, 0) {
            UniformHypergraph::degenerate(n, self.g_star_total)
        } else {
            UniformHypergraph::from_merged(n, self.next.0, self.next.1, self.g_star.clone())
        };
        RoundResult {
            g_star,
            steps: self.v_seq.len(),
            v_seq: self.v_seq.clone(),
            yes: self.yes.clone(),
            no: self.no.clone(),
            trace: self.trace.clone(),
        }
    }
}

/// Runs a full round against `h`.
pub fn run_round(
    g: &UniformHypergraph,
    c: bool,
    h: &Assignment,
    b: u64,
    sched: &DeltaSchedule,
) -> Result<RoundResult> {
    if h.len() != g.n_vertices() {
        return Err(Error::invalid("assignment size differs from the ground set"));
    }
    let mut round = RoundState::new(Arc::new(g.clone()), c, b, sched)?;
    if let Some(bad) = g.first_violated(h) {
        return Err(Error::precondition(format!("h violates {bad}")));
    }
    while let Some(v) = round.question() {
        round.answer(h.get(v) == c);
    }
    Ok(round.result())
}

/// The tuples `(T0, T1)` of uniformity-`i` hypergraph `g` whose degree is at least
/// half of `Δ^{(i)}`.
pub fn saturated_pairs(g: &UniformHypergraph, sched: &DeltaSchedule) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = Vec::new();
    for ((l0, l1), threshold) in sched.thresholds(g.uniformity()) {
        out.extend(
            g.degree_table(l0, l1)
                .into_iter()
                .filter(|&(_, d)| d >= threshold)
                .map(|(t, _)| t),
        );
    }
    out.sort();
    out
}

/// Inputs of the container theorem. `k` is the constant `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContainerParams {
    pub k: Rational,
    pub b: u64,
    pub m: u64,
    pub r: u64,
    /// Run even when the degree hypothesis fails. Coverage and fingerprint
    /// consistency still hold; the size guarantee may not.
    pub force: bool,
}

/// A container together with the data that determines it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Container {
    pub fingerprint: Fingerprint,
    pub cylinder: Cylinder,
    /// Round `s` in which construction stopped.
    pub stop_round: usize,
    /// Bit asked about in that round.
    pub bit: bool,
}

struct EngineInner {
    h: Arc<UniformHypergraph>,
    sched: DeltaSchedule,
    b: u64,
    m: u64,
    r: u64,
    k: Rational,
    report: HypothesisReport,
    normalized: bool,
    /// `β_s · e(H)` for `s = 0 ..= k0 + k1`.
    beta_e: Vec<Rational>,
    /// Per round, the caps `Δ` of the uniformity that round produces.
    caps: Vec<Vec<((usize, usize), Rational)>>,
    thresholds: Vec<Arc<Vec<((usize, usize), u64)>>>,
}

/// Container construction for a fixed hypergraph and parameter set.
#[derive(Clone)]
pub struct ContainerEngine {
    inner: Arc<EngineInner>,
}

impl fmt::Debug for ContainerEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContainerEngine")
            .field("uniformity", &self.inner.h.uniformity())
            .field("b", &self.inner.b)
            .field("m", &self.inner.m)
            .field("r", &self.inner.r)
            .finish()
    }
}

impl ContainerEngine {
    /// Normalises `(b, m)`, checks the hypothesis and precomputes the schedule.
    ///
    /// Fails with [`Error::Hypothesis`] unless the check passes or `force` is set.
    pub fn new(h: UniformHypergraph, params: &ContainerParams) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::invalid("container construction needs a non-empty hypergraph"));
        }
        if params.b == 0 || params.m == 0 || params.r == 0 {
            return Err(Error::invalid("b, m and r must be at least 1"));
        }
        if params.k <= Rational::zero() {
            return Err(Error::invalid("K must be positive"));
        }
        let v = h.n_vertices() as u64;
        let (b, m) = normalize_parameters(params.b, params.m, v);
        let report = h.check_container_hypothesis(&params.k, b, m, params.r)?;
        if !report.passes() && !params.force {
            return Err(Error::Hypothesis {
                given: params.k.to_string(),
                min_k: report.min_k.to_string(),
            });
        }
        let (k0, k1) = h.uniformity();
        let sched = DeltaSchedule::from_hypergraph(&h, b, m)?;
        let e = int(h.edge_count());
        let bv = Rational::new(b.into(), v.into());
        let bm = Rational::new(b.into(), m.into());
        let beta_e = (0..=k0 + k1)
            .map(|s| {
                pow2(-((s * (k0 + k1 + 1)) as i64))
                    * pow(&bv, s.min(k1) as i64)
                    * pow(&bm, s.saturating_sub(k1) as i64)
                    * &e
            })
            .collect();
        let mut caps = Vec::new();
        let mut i = (k0, k1);
        for _ in 0..k0 + k1 {
            i = next_uniformity(i);
            caps.push(sched.values_at(i));
        }
        let thresholds = caps.iter().map(|c| Arc::new(thresholds_from(c))).collect();
        Ok(ContainerEngine {
            inner: Arc::new(EngineInner {
                h: Arc::new(h),
                sched,
                b,
                m,
                r: params.r,
                k: params.k.clone(),
                report,
                normalized: (b, m) != (params.b, params.m),
                beta_e,
                caps,
                thresholds,
            }),
        })
    }

    pub fn hypergraph(&self) -> &UniformHypergraph {
        &self.inner.h
    }

    pub fn schedule(&self) -> &DeltaSchedule {
        &self.inner.sched
    }

    pub fn report(&self) -> &HypothesisReport {
        &self.inner.report
    }

    /// Normalised `(b, m)`.
    pub fn normalized_bm(&self) -> (u64, u64) {
        (self.inner.b, self.inner.m)
    }

    /// Whether normalisation changed `b` or `m`.
    pub fn normalization_bound(&self) -> bool {
        self.inner.normalized
    }

    /// `δ = 2^{-(k0+k1)(k0+k1+1)} / K`.
    pub fn delta(&self) -> Rational {
        let (k0, k1) = self.inner.h.uniformity();
        let k = (k0 + k1) as i64;
        pow2(-k * (k + 1)) / &self.inner.k
    }

    /// Checks property (b) for a produced cylinder.
    pub fn satisfies_size_bound(&self, cyl: &Cylinder) -> bool {
        let (k0, k1) = self.inner.h.uniformity();
        let delta = self.delta();
        let zeros_ok = k1 > 0 && int(cyl.count(false) as u64) >= &delta * int(self.inner.h.n_vertices() as u64);
        let ones_ok = k0 > 0 && int(cyl.count(true) as u64) >= &delta * int(self.inner.r);
        zeros_ok || ones_ok
    }

    /// A fresh construction paused at its first question.
    pub fn start(&self) -> ContainerBuilder {
        let h = Arc::clone(&self.inner.h);
        let i = h.uniformity();
        let c = compatible_bit(i);
        ContainerBuilder {
            engine: self.clone(),
            round: RoundState::start(h, c, self.inner.b, Arc::clone(&self.inner.thresholds[0]), next_uniformity(i)),
            s: 0,
            uniformity: i,
            fingerprint: Fingerprint::default(),
            outcome: None,
            trace: Vec::new(),
        }
    }

    /// Builds the container of `h`, which must lie in `F(H)` with at most `m` ones.
    pub fn build(&self, h: &Assignment) -> Result<Container> {
        self.build_traced(h).map(|(c, _)| c)
    }

    /// As [`build`](Self::build), also returning per-round trace lines.
    pub fn build_traced(&self, h: &Assignment) -> Result<(Container, Vec<Vec<TraceLine>>)> {
        let hg = &self.inner.h;
        if h.len() != hg.n_vertices() {
            return Err(Error::invalid("assignment size differs from the ground set"));
        }
        if h.ones_count() as u64 > self.inner.m {
            return Err(Error::precondition(format!(
                "h has {} ones, more than m = {}",
                h.ones_count(),
                self.inner.m
            )));
        }
        if let Some(bad) = hg.first_violated(h) {
            return Err(Error::precondition(format!("h violates {bad}")));
        }
        let mut builder = self.start();
        loop {
            match builder.step() {
                Step::Ask { vertex, bit } => builder.answer(h.get(vertex) == bit),
                Step::Done(c) => return Ok((c, builder.trace)),
                Step::Contradiction => {
                    unreachable!("(0,0)-uniform remainder is impossible for h in F(H)")
                }
            }
        }
    }

    /// Containers of several assignments at once, each paired with the indices
    /// of the inputs that produced it, in fingerprint order.
    ///
    /// Equivalent to calling [`build`](Self::build) on every input, but shared
    /// answer prefixes are processed once.
    pub fn containers_of(&self, hs: &[Assignment]) -> Result<Vec<(Container, Vec<usize>)>> {
        for h in hs {
            if h.len() != self.inner.h.n_vertices() {
                return Err(Error::invalid("assignment size differs from the ground set"));
            }
            if h.ones_count() as u64 > self.inner.m {
                return Err(Error::precondition(format!("h has {} ones, more than m = {}", h.ones_count(), self.inner.m)));
            }
            if let Some(bad) = self.inner.h.first_violated(h) {
                return Err(Error::precondition(format!("h violates {bad}")));
            }
        }
        let mut out: BTreeMap<Fingerprint, (Container, Vec<usize>)> = BTreeMap::new();
        if hs.is_empty() {
            return Ok(Vec::new());
        }
        let mut stack = vec![(self.start(), (0..hs.len()).collect_vec())];
        while let Some((mut b, group)) = stack.pop() {
            loop {
                match b.step() {
                    Step::Done(c) => {
                        out.entry(c.fingerprint.clone()).or_insert_with(|| (c, Vec::new())).1.extend(group);
                        break;
                    }
                    Step::Contradiction => unreachable!("(0,0)-uniform remainder is impossible for h in F(H)"),
                    Step::Ask { vertex, bit } => {
                        let (yes, no): (Vec<usize>, Vec<usize>) = group.iter().partition(|&&i| hs[i].get(vertex) == bit);
                        match (yes.is_empty(), no.is_empty()) {
                            (false, true) => b.answer(true),
                            (true, false) => b.answer(false),
                            _ => {
                                let mut nb = b.clone();
                                nb.answer(true);
                                stack.push((nb, yes));
                                b.answer(false);
                                stack.push((b, no));
                                break;
                            }
                        }
                    }
                }
            }
        }
        Ok(out
            .into_values()
            .map(|(c, mut idx)| {
                idx.sort_unstable();
                (c, idx)
            })
            .collect())
    }

    /// Every container reachable by an answer sequence consistent with some
    /// assignment that has at most `max_ones` ones and violates no edge of `H`.
    ///
    /// The result is sorted by fingerprint and contains the container of every
    /// `h ∈ F(H)` with `|h⁻¹(1)| <= max_ones`.
    pub fn enumerate(&self, max_ones: usize) -> Vec<Container> {
        let n = self.inner.h.n_vertices();
        let mut out = BTreeMap::new();
        let known = vec![None; n];
        self.dfs(self.start(), known, 0, max_ones, &mut out);
        out.into_values().collect()
    }

    fn dfs(
        &self,
        mut b: ContainerBuilder,
        mut known: Vec<Option<bool>>,
        mut ones: usize,
        max_ones: usize,
        out: &mut BTreeMap<Fingerprint, Container>,
    ) {
        loop {
            match b.step() {
                Step::Done(c) => {
                    out.insert(c.fingerprint.clone(), c);
                    return;
                }
                Step::Contradiction => return,
                Step::Ask { vertex, bit } => {
                    if let Some(val) = known[vertex as usize] {
                        b.answer(val == bit);
                        continue;
                    }
                    // branch: h(vertex) = bit (YES) or 1 - bit (NO)
                    for yes in [true, false] {
                        let val = if yes { bit } else { !bit };
                        let new_ones = ones + val as usize;
                        if new_ones > max_ones {
                            continue;
                        }
                        known[vertex as usize] = Some(val);
                        if self.violates(&known, vertex) {
                            known[vertex as usize] = None;
                            continue;
                        }
                        if yes {
                            let mut nb = b.clone();
                            nb.answer(true);
                            self.dfs(nb, known.clone(), new_ones, max_ones, out);
                            known[vertex as usize] = None;
                        } else {
                            b.answer(false);
                            ones = new_ones;
                            break;
                        }
                    }
                    if known[vertex as usize].is_none() {
                        return;
                    }
                }
            }
        }
    }

    fn violates(&self, known: &[Option<bool>], v: VertexId) -> bool {
        let h = &self.inner.h;
        h.incident(v).iter().any(|&i| {
            let e = &h.edges()[i as usize].0;
            e.zeros().iter().all(|&u| known[u as usize] == Some(false))
                && e.ones().iter().all(|&u| known[u as usize] == Some(true))
        })
    }
}

/// Next action of a paused construction.
#[derive(Clone, Debug)]
pub enum Step {
    /// "Is `h(vertex) = bit`?"
    Ask { vertex: VertexId, bit: bool },
    Done(Container),
    /// The answers so far force a `(0,0)`-uniform remainder: no assignment in
    /// `F(H)` is consistent with them.
    Contradiction,
}

/// A container construction in progress.
#[derive(Clone)]
pub struct ContainerBuilder {
    engine: ContainerEngine,
    round: RoundState,
    s: usize,
    uniformity: (usize, usize),
    fingerprint: Fingerprint,
    outcome: Option<Step>,
    trace: Vec<Vec<TraceLine>>,
}

impl ContainerBuilder {
    pub fn step(&mut self) -> Step {
        if let Some(done) = &self.outcome {
            return done.clone();
        }
        loop {
            if let Some(v) = self.round.question() {
                return Step::Ask {
                    vertex: v,
                    bit: self.round.c,
                };
            }
            let outcome = self.finish_round();
            if let Some(o) = outcome {
                self.outcome = Some(o.clone());
                return o;
            }
        }
    }

    pub fn answer(&mut self, yes: bool) {
        self.round.answer(yes);
    }

    fn finish_round(&mut self) -> Option<Step> {
        let inner = &self.engine.inner;
        let c = self.round.c;
        let side = if c { &mut self.fingerprint.s1 } else { &mut self.fingerprint.s0 };
        side.extend(self.round.yes.iter().map(|&j| self.round.v_seq[j]));
        self.trace.push(std::mem::take(&mut self.round.trace));
        let next = self.round.next;
        if int(self.round.g_star_total) < inner.beta_e[self.s + 1] {
            let mut cylinder = Cylinder::free(inner.h.n_vertices());
            for &j in &self.round.no {
                cylinder.set(self.round.v_seq[j], !c);
            }
            return Some(Step::Done(Container {
                fingerprint: self.fingerprint.clone(),
                cylinder,
                stop_round: self.s,
                bit: c,
            }));
        }
        if next == (0, 0) {
            return Some(Step::Contradiction);
        }
        let g_star = Arc::new(self.round.result().g_star);
        if cfg!(debug_assertions) {
            for ((l0, l1), cap) in &inner.caps[self.s] {
                debug_assert!(
                    int(g_star.max_degree_unchecked(*l0, *l1)) <= *cap,
                    "degree cap broken at {next:?}/({l0},{l1})"
                );
            }
        }
        self.s += 1;
        self.uniformity = next;
        self.round = RoundState::start(
            g_star,
            compatible_bit(next),
            inner.b,
            Arc::clone(&inner.thresholds[self.s]),
            next_uniformity(next),
        );
        None
    }
}

/// Output of the monotone wrapper: `g(I) ⊆ I ⊆ f(g(I))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneContainer {
    pub fingerprint: Vec<VertexId>,
    pub container: Vec<VertexId>,
}

/// Containers for independent sets of a `k`-uniform hypergraph given as its
/// `(0, k)` lift: delegates to [`ContainerEngine`] with `m = v(H)` and `K = v(H)/r`.
pub fn monotone_engine(lift: UniformHypergraph, b: u64, r: u64, force: bool) -> Result<ContainerEngine> {
    if lift.uniformity().0 != 0 {
        return Err(Error::invalid("monotone containers need a (0,k)-uniform lift"));
    }
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let v = lift.n_vertices() as u64;
    let params = ContainerParams {
        k: Rational::new(BigInt::from(v), BigInt::from(r)),
        b,
        m: v,
        r,
        force,
    };
    ContainerEngine::new(lift, &params)
}

pub fn monotone_containers(engine: &ContainerEngine, independent: &[VertexId]) -> Result<MonotoneContainer> {
    let n = engine.hypergraph().n_vertices();
    let h = Assignment::from_ones(n, independent.iter().copied())?;
    let c = engine.build(&h)?;
    Ok(monotone_from_container(&c))
}

pub fn monotone_from_container(c: &Container) -> MonotoneContainer {
    MonotoneContainer {
        fingerprint: c.fingerprint.s1.iter().copied().collect(),
        container: (0..c.cylinder.len() as VertexId)
            .filter(|&v| c.cylinder.label(v) != Some(false))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn c(z: &[u32], o: &[u32]) -> Constraint {
        Constraint::new(z.iter().copied(), o.iter().copied()).unwrap()
    }

    #[test]
    fn normalization_rules() {
        assert_eq!(normalize_parameters(3, 5, 10), (3, 5));
        assert_eq!(normalize_parameters(4, 20, 10), (4, 10));
        assert_eq!(normalize_parameters(8, 5, 10), (8, 8));
        assert_eq!(normalize_parameters(30, 50, 10), (10, 10));
        for b in 1..12 {
            for m in 1..12 {
                let (b1, m1) = normalize_parameters(b, m, 10);
                assert_eq!(normalize_parameters(b1, m1, 10), (b1, m1));
                assert!(b1 <= m1 && m1 <= 10);
            }
        }
    }

    #[test]
    fn schedule_base_and_recursion_step() {
        // k = (0,2): Δ^{(0,1)}_{(0,1)} = max{2 Δ_{(0,2)}, (b/v) Δ_{(0,1)}}
        let s = DeltaSchedule::from_table(0, 2, 3, 5, 10, vec![0, 7, 2]).unwrap();
        assert_eq!(s.recursive(0, 2, 0, 1).unwrap(), int(7));
        let expect = int(4).max(rat(3, 10) * int(7));
        assert_eq!(s.recursive(0, 1, 0, 1).unwrap(), expect);
        assert_eq!(s.closed_form(0, 1, 0, 1).unwrap(), expect);
        assert!(s.recursive(1, 0, 1, 0).is_err());
        assert!(s.recursive(0, 1, 0, 2).is_err());
    }

    #[test]
    fn round_on_empty_hypergraph() {
        let g = UniformHypergraph::empty(3, 0, 1).unwrap();
        let sched = DeltaSchedule::from_table(0, 1, 1, 1, 3, vec![0, 1]).unwrap();
        let r = run_round(&g, true, &Assignment::zeros(3), 1, &sched).unwrap();
        assert_eq!(r.steps, 0);
        assert!(r.yes.is_empty() && r.no.is_empty());
        assert!(r.g_star.is_empty());
    }

    #[test]
    fn round_hand_trace() {
        let g = UniformHypergraph::from_edges(2, 0, 1, [(c(&[], &[0]), 1), (c(&[], &[1]), 1)]).unwrap();
        let sched = DeltaSchedule::from_hypergraph(&g, 2, 2).unwrap();
        let r = run_round(&g, true, &Assignment::zeros(2), 2, &sched).unwrap();
        assert_eq!(r.v_seq, vec![0, 1]);
        assert_eq!(r.no, vec![0, 1]);
        assert!(r.yes.is_empty());
        assert_eq!(r.steps, 2);
        assert!(run_round(&g, false, &Assignment::zeros(2), 2, &sched).is_err());
        assert!(matches!(
            run_round(&g, true, &Assignment::from_mask(2, 0b11), 2, &sched),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn round_rejects_infeasible_input() {
        let g = UniformHypergraph::from_edges(2, 1, 0, [(c(&[0], &[]), 1)]).unwrap();
        let sched = DeltaSchedule::from_hypergraph(&g, 1, 1).unwrap();
        let err = run_round(&g, false, &Assignment::zeros(2), 1, &sched).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn saturation_threshold_is_inclusive() {
        // G* of uniformity (0,1) with base Δ = 4 at (0,1): saturated at degree 2
        let sched = DeltaSchedule::from_table(0, 1, 1, 1, 4, vec![0, 4]).unwrap();
        let one = UniformHypergraph::from_edges(4, 0, 1, [(c(&[], &[2]), 1)]).unwrap();
        assert!(saturated_pairs(&one, &sched).is_empty());
        let two = UniformHypergraph::from_edges(4, 0, 1, [(c(&[], &[2]), 2)]).unwrap();
        assert_eq!(saturated_pairs(&two, &sched), vec![(vec![], vec![2])]);
        let empty = UniformHypergraph::empty(4, 0, 1).unwrap();
        assert!(saturated_pairs(&empty, &sched).is_empty());
    }

    fn triangle_hypergraph(n: u32) -> UniformHypergraph {
        let pair = |a: u32, b: u32| crate::graph::pair_index(a as usize, b as usize) as u32;
        let tris = (0..n)
            .tuple_combinations()
            .map(|(a, b, c)| vec![pair(a, b), pair(a, c), pair(b, c)]);
        UniformHypergraph::lift_monotone(crate::graph::choose2(n as usize), 3, tris).unwrap()
    }

    #[test]
    fn containers_cover_and_are_fingerprint_determined() {
        let h = triangle_hypergraph(5);
        let v = h.n_vertices() as u64;
        let engine = monotone_engine(h.clone(), 2, 2, true).unwrap();
        let mut by_fp: HashMap<Fingerprint, Cylinder> = HashMap::new();
        for mask in 0u64..1 << v {
            let a = Assignment::from_mask(v as usize, mask);
            if !h.is_satisfied_by(&a) {
                continue;
            }
            let con = engine.build(&a).unwrap();
            assert!(con.cylinder.contains(&a));
            assert!(con.fingerprint.s1.iter().all(|&x| a.get(x)));
            assert!(con.fingerprint.s0.is_empty());
            if let Some(prev) = by_fp.insert(con.fingerprint.clone(), con.cylinder.clone()) {
                assert_eq!(prev, con.cylinder);
            }
        }
        let listed = engine.enumerate(v as usize);
        for con in &listed {
            if let Some(cyl) = by_fp.get(&con.fingerprint) {
                assert_eq!(cyl, &con.cylinder);
            }
        }
        assert!(by_fp.keys().all(|fp| listed.iter().any(|c| &c.fingerprint == fp)));
    }

    #[test]
    fn empty_independent_set() {
        let h = triangle_hypergraph(5);
        let engine = monotone_engine(h, 2, 2, true).unwrap();
        let out = monotone_containers(&engine, &[]).unwrap();
        assert!(out.fingerprint.is_empty());
        assert!(out.container.len() < 10);
    }

    #[test]
    fn hypothesis_failure_reports_min_k() {
        let h = triangle_hypergraph(5);
        let params = ContainerParams {
            k: int(1),
            b: 1,
            m: 10,
            r: 1,
            force: false,
        };
        match ContainerEngine::new(h, &params) {
            Err(Error::Hypothesis { min_k, .. }) => assert!(!min_k.is_empty()),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }
}
