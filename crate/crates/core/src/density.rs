//! Exact density oracles: 2-densities, Spencer densities, root augmentation
//! and path/cycle duplication. Everything here is exact rational arithmetic;
//! the brute-force oracles signal rather than approximate past their bounds.

use num_rational::Rational64;
use thiserror::Error;

use crate::graph::{Graph, GraphError, OrderedGraph};

pub type Rat = Rational64;

/// Default vertex-count cap for the m2 subset brute force.
pub const M2_BRUTE_FORCE_BOUND: usize = 16;
/// Default vertex-count cap for Spencer-density brute force.
pub const SPENCER_BRUTE_FORCE_BOUND: usize = 18;
/// Node budget for the minimum-witness search inside `findroots`.
const WITNESS_SEARCH_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("instance too large for the exponential oracle: {size} vertices, bound {bound}")]
    InstanceTooLarge { size: usize, bound: usize },
    #[error("pattern has no non-root vertices")]
    AllRoots,
    #[error("initial segment is not a prefix of the order")]
    InitialSegmentNotPrefix,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("Q is not an induced subgraph: extra edge {0}-{1}")]
    QNotInduced(usize, usize),
    #[error("Q is not an induced path or cycle")]
    QNotPathOrCycle,
    #[error("witness search budget exceeded")]
    WitnessSearchBudget,
}

/// A pattern graph with a distinguished root set.
#[derive(Debug, Clone)]
pub struct RootedPattern {
    pub h: Graph,
    pub roots: Vec<usize>,
}

impl RootedPattern {
    pub fn new(h: Graph, mut roots: Vec<usize>) -> Result<Self, DensityError> {
        roots.sort_unstable();
        roots.dedup();
        for &r in &roots {
            if r >= h.n() {
                return Err(DensityError::Graph(GraphError::VertexOutOfRange(r, h.n())));
            }
        }
        Ok(RootedPattern { h, roots })
    }

    pub fn non_roots(&self) -> Vec<usize> {
        let mut is_root = vec![false; self.h.n()];
        for &r in &self.roots {
            is_root[r] = true;
        }
        (0..self.h.n()).filter(|&v| !is_root[v]).collect()
    }
}

/// An exact density value together with a subset achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub value: Rat,
    pub witness: Vec<usize>,
}

/// d2 of a graph: (e-1)/(v-2) when v >= 3 and e >= 1, and 1/2 for K2 and
/// edgeless graphs.
pub fn d2(h: &Graph) -> Rat {
    d2_value(h.n(), h.edge_count())
}

fn d2_value(v: usize, e: usize) -> Rat {
    if e >= 1 && v >= 3 {
        Rat::new(e as i64 - 1, v as i64 - 2)
    } else {
        Rat::new(1, 2)
    }
}

pub fn m2(h: &Graph) -> Result<DensityReport, DensityError> {
    m2_bounded(h, M2_BRUTE_FORCE_BOUND)
}

/// Max of d2 over all induced subgraphs, by exhaustive subset enumeration.
/// Edge-deleted subgraphs never beat induced ones for d2, so vertex subsets
/// suffice. Ties keep the first subset in bitmask order.
pub fn m2_bounded(h: &Graph, bound: usize) -> Result<DensityReport, DensityError> {
    let n = h.n();
    if n > bound {
        return Err(DensityError::InstanceTooLarge { size: n, bound });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| h.neighbours(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut best = DensityReport { value: d2_value(0, 0), witness: Vec::new() };
    for s in 1u32..(1 << n) {
        let v = s.count_ones() as usize;
        let mut deg_sum = 0;
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            deg_sum += (masks[i] & s).count_ones() as usize;
        }
        let e = deg_sum / 2;
        let value = d2_value(v, e);
        if value > best.value {
            best = DensityReport { value, witness: mask_to_vec(s) };
        }
    }
    Ok(best)
}

fn mask_to_vec(mut s: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while s != 0 {
        out.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    out
}

pub fn spencer_density(rp: &RootedPattern) -> Result<DensityReport, DensityError> {
    spencer_density_bounded(rp, SPENCER_BRUTE_FORCE_BOUND)
}

/// Max over nonempty X in V(H) minus roots of (e(X) + e(X,R)) / |X|,
/// by exhaustive enumeration of subsets of the non-root vertices.
pub fn spencer_density_bounded(
    rp: &RootedPattern,
    bound: usize,
) -> Result<DensityReport, DensityError> {
    let n = rp.h.n();
    if n > bound {
        return Err(DensityError::InstanceTooLarge { size: n, bound });
    }
    let free = rp.non_roots();
    if free.is_empty() {
        return Err(DensityError::AllRoots);
    }
    let k = free.len();
    let mut is_root = vec![false; n];
    for &r in &rp.roots {
        is_root[r] = true;
    }
    // Per free vertex: adjacency mask over free indices, and edges to roots.
    let index_of: std::collections::HashMap<usize, usize> =
        free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut masks = vec![0u32; k];
    let mut root_deg = vec![0usize; k];
    for (i, &v) in free.iter().enumerate() {
        for &w in rp.h.neighbours(v) {
            if is_root[w] {
                root_deg[i] += 1;
            } else {
                masks[i] |= 1 << index_of[&w];
            }
        }
    }
    let mut best: Option<DensityReport> = None;
    for s in 1u32..(1 << k) {
        let size = s.count_ones() as i64;
        let mut deg_sum = 0usize;
        let mut to_roots = 0usize;
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            deg_sum += (masks[i] & s).count_ones() as usize;
            to_roots += root_deg[i];
        }
        let value = Rat::new((deg_sum / 2 + to_roots) as i64, size);
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(DensityReport {
                value,
                witness: mask_to_vec(s).into_iter().map(|i| free[i]).collect(),
            });
        }
    }
    Ok(best.expect("free set is nonempty"))
}

/// Verdict of the (D, mu)-Spencer test.
#[derive(Debug, Clone)]
pub struct SpencerCheck {
    pub holds: bool,
    pub density: Rat,
    /// The maximising set when the test fails.
    pub witness: Option<Vec<usize>>,
}

pub fn is_d_mu_spencer(
    rp: &RootedPattern,
    d: usize,
    mu: Rat,
) -> Result<SpencerCheck, DensityError> {
    is_d_mu_spencer_bounded(rp, d, mu, SPENCER_BRUTE_FORCE_BOUND)
}

pub fn is_d_mu_spencer_bounded(
    rp: &RootedPattern,
    d: usize,
    mu: Rat,
    bound: usize,
) -> Result<SpencerCheck, DensityError> {
    let report = spencer_density_bounded(rp, bound)?;
    let threshold = Rat::from_integer(d as i64) + mu;
    if report.value <= threshold {
        Ok(SpencerCheck { holds: true, density: report.value, witness: None })
    } else {
        Ok(SpencerCheck { holds: false, density: report.value, witness: Some(report.witness) })
    }
}

/// Exact (D, mu)-Spencer violation test at any instance size. Returns the
/// minimum-cardinality witness (ties broken lexicographically), or None when
/// (h, roots) is (D, mu)-Spencer.
///
/// A minimum witness X satisfies deg_X(v) + |N(v) cap R| > D + mu for every
/// v in X and induces a connected subgraph, so the search peels the rooted
/// core first, decides existence by a min-cut selection problem, and only
/// then enumerates connected subsets of the core by increasing size.
pub fn spencer_violation_witness(
    h: &Graph,
    roots: &[usize],
    d: usize,
    mu: Rat,
) -> Result<Option<Vec<usize>>, DensityError> {
    let threshold = Rat::from_integer(d as i64) + mu;
    let n = h.n();
    let mut is_root = vec![false; n];
    for &r in roots {
        is_root[r] = true;
    }
    let root_deg: Vec<usize> = (0..n)
        .map(|v| h.neighbours(v).iter().filter(|&&w| is_root[w]).count())
        .collect();

    // Rooted core: repeatedly drop free vertices with deg + root_deg <= threshold.
    let mut in_core: Vec<bool> = (0..n).map(|v| !is_root[v]).collect();
    let mut core_deg: Vec<usize> = (0..n)
        .map(|v| h.neighbours(v).iter().filter(|&&w| in_core[w]).count())
        .collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| in_core[v]).collect();
    while let Some(v) = queue.pop() {
        if !in_core[v] {
            continue;
        }
        if Rat::from_integer((core_deg[v] + root_deg[v]) as i64) <= threshold {
            in_core[v] = false;
            for &w in h.neighbours(v) {
                if in_core[w] {
                    core_deg[w] -= 1;
                    queue.push(w);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| in_core[v]).collect();
    if core.is_empty() {
        return Ok(None);
    }

    if !witness_exists_mincut(h, &core, &root_deg, threshold) {
        return Ok(None);
    }

    // A witness exists; find the smallest, searching connected subsets of the
    // core by increasing size.
    let mut budget = WITNESS_SEARCH_BUDGET;
    for size in 1..=core.len() {
        let mut best: Option<Vec<usize>> = None;
        enumerate_connected_subsets(h, &in_core, size, &mut budget, &mut |subset| {
            if is_witness(h, subset, &root_deg, threshold)
                && best.as_ref().is_none_or(|b| subset < b.as_slice())
            {
                best = Some(subset.to_vec());
            }
        })?;
        if let Some(witness) = best {
            return Ok(Some(witness));
        }
    }
    unreachable!("min-cut said a witness exists inside the core");
}

fn is_witness(h: &Graph, subset: &[usize], root_deg: &[usize], threshold: Rat) -> bool {
    let inner = h.edges_within(subset);
    let to_roots: usize = subset.iter().map(|&v| root_deg[v]).sum();
    Rat::from_integer((inner + to_roots) as i64)
        > threshold * Rat::from_integer(subset.len() as i64)
}

/// Enumerates every subset of the allowed vertices of the given size that
/// induces a connected subgraph, each exactly once, in sorted form.
fn enumerate_connected_subsets(
    h: &Graph,
    allowed: &[bool],
    size: usize,
    budget: &mut u64,
    f: &mut impl FnMut(&[usize]),
) -> Result<(), DensityError> {
    let n = h.n();
    let mut subset = Vec::with_capacity(size);
    let mut blocked = vec![false; n];
    for anchor in 0..n {
        if !allowed[anchor] {
            continue;
        }
        subset.push(anchor);
        if size == 1 {
            f(&subset);
        } else {
            let ext: Vec<usize> = h
                .neighbours(anchor)
                .iter()
                .copied()
                .filter(|&w| w > anchor && allowed[w])
                .collect();
            for &w in &ext {
                blocked[w] = true;
            }
            extend_connected(h, allowed, anchor, size, &mut subset, &ext, &mut blocked, budget, f)?;
            for &w in &ext {
                blocked[w] = false;
            }
        }
        subset.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extend_connected(
    h: &Graph,
    allowed: &[bool],
    anchor: usize,
    size: usize,
    subset: &mut Vec<usize>,
    ext: &[usize],
    blocked: &mut Vec<bool>,
    budget: &mut u64,
    f: &mut impl FnMut(&[usize]),
) -> Result<(), DensityError> {
    if *budget == 0 {
        return Err(DensityError::WitnessSearchBudget);
    }
    *budget -= 1;
    let mut remaining = ext.to_vec();
    while let Some(w) = remaining.pop() {
        subset.push(w);
        if subset.len() == size {
            let mut sorted = subset.clone();
            sorted.sort_unstable();
            f(&sorted);
        } else {
            let fresh: Vec<usize> = h
                .neighbours(w)
                .iter()
                .copied()
                .filter(|&u| u > anchor && allowed[u] && !blocked[u] && !subset.contains(&u))
                .collect();
            for &u in &fresh {
                blocked[u] = true;
            }
            let mut next_ext = remaining.clone();
            next_ext.extend_from_slice(&fresh);
            extend_connected(h, allowed, anchor, size, subset, &next_ext, blocked, budget, f)?;
            for &u in &fresh {
                blocked[u] = false;
            }
        }
        subset.pop();
    }
    Ok(())
}

/// Decides whether some nonempty X inside `core` has
/// e(X) + sum of root degrees > threshold * |X|, via a min-cut selection
/// problem with exact integer capacities.
fn witness_exists_mincut(h: &Graph, core: &[usize], root_deg: &[usize], threshold: Rat) -> bool {
    let a = *threshold.numer();
    let b = *threshold.denom();
    debug_assert!(b > 0);
    let index_of: std::collections::HashMap<usize, usize> =
        core.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut core_edges = Vec::new();
    for (i, &v) in core.iter().enumerate() {
        for &w in h.neighbours(v) {
            if let Some(&j) = index_of.get(&w) {
                if i < j {
                    core_edges.push((i, j));
                }
            }
        }
    }
    // Selection problem: edge nodes weigh +b, vertex v weighs b*root_deg(v) - a,
    // selecting an edge requires its endpoints. Max closure > 0 iff a witness
    // exists.
    let node_count = 2 + core.len() + core_edges.len();
    let source = 0;
    let sink = 1;
    let vertex_node = |i: usize| 2 + i;
    let edge_node = |e: usize| 2 + core.len() + e;
    let mut flow = Dinic::new(node_count);
    let mut positive_total: i64 = 0;
    for (i, &v) in core.iter().enumerate() {
        let weight = b * root_deg[v] as i64 - a;
        if weight > 0 {
            positive_total += weight;
            flow.add_edge(source, vertex_node(i), weight);
        } else if weight < 0 {
            flow.add_edge(vertex_node(i), sink, -weight);
        }
    }
    for (e, &(i, j)) in core_edges.iter().enumerate() {
        positive_total += b;
        flow.add_edge(source, edge_node(e), b);
        flow.add_edge(edge_node(e), vertex_node(i), i64::MAX / 4);
        flow.add_edge(edge_node(e), vertex_node(j), i64::MAX / 4);
    }
    if positive_total == 0 {
        return false;
    }
    let cut = flow.max_flow(source, sink);
    positive_total - cut > 0
}

/// Dinic's max-flow on a small directed network.
struct Dinic {
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { to: Vec::new(), cap: Vec::new(), head: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.head[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.head[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, pushed.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX / 4);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

/// One augmentation step of the root-finding loop.
#[derive(Debug, Clone)]
pub struct FindrootsStep {
    pub added: Vec<usize>,
    pub size_after: usize,
}

#[derive(Debug, Clone)]
pub struct FindrootsOutcome {
    pub t_prime: Vec<usize>,
    pub trajectory: Vec<FindrootsStep>,
}

/// Augments T to a superset T' such that (H, I cup T') is (D, mu)-Spencer,
/// every vertex of T' reaches T inside H[T'], and |T'| <= D^2 |T|^2 / mu.
/// Witnesses are chosen minimum-size then lexicographic, so the output is
/// deterministic.
pub fn findroots(
    og: &OrderedGraph,
    initial: &[usize],
    t: &[usize],
    d: usize,
    mu: Rat,
) -> Result<FindrootsOutcome, DensityError> {
    og.check_degeneracy_order(d)?;
    let mut prefix: Vec<usize> = initial.to_vec();
    prefix.sort_unstable_by_key(|&v| og.rank(v));
    for (pos, &v) in prefix.iter().enumerate() {
        if og.rank(v) != pos {
            return Err(DensityError::InitialSegmentNotPrefix);
        }
    }

    let mut t_current: Vec<usize> = t.to_vec();
    t_current.sort_unstable();
    t_current.dedup();
    let mut trajectory = Vec::new();
    loop {
        let mut roots: Vec<usize> = prefix.iter().chain(&t_current).copied().collect();
        roots.sort_unstable();
        roots.dedup();
        match spencer_violation_witness(og.graph(), &roots, d, mu)? {
            None => break,
            Some(witness) => {
                t_current.extend_from_slice(&witness);
                t_current.sort_unstable();
                t_current.dedup();
                trajectory.push(FindrootsStep { added: witness, size_after: t_current.len() });
            }
        }
    }
    Ok(FindrootsOutcome { t_prime: t_current, trajectory })
}

/// The shape of the duplicated subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Path,
    Cycle,
}

/// Classifies h[q] as an induced path or cycle, or reports why it is neither.
pub fn classify_induced_segment(h: &Graph, q: &[usize]) -> Result<SegmentKind, DensityError> {
    let mut sorted = q.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(DensityError::QNotPathOrCycle);
    }
    let sub = h.induced(&sorted)?;
    if !sub.graph.is_connected() {
        return Err(DensityError::QNotPathOrCycle);
    }
    let k = sub.graph.n();
    let degrees: Vec<usize> = (0..k).map(|v| sub.graph.degree(v)).collect();
    let ones = degrees.iter().filter(|&&d| d == 1).count();
    let twos = degrees.iter().filter(|&&d| d == 2).count();
    if k >= 3 && twos == k {
        Ok(SegmentKind::Cycle)
    } else if (k == 1 && degrees[0] == 0) || (ones == 2 && twos == k - 2) {
        Ok(SegmentKind::Path)
    } else {
        Err(DensityError::QNotPathOrCycle)
    }
}

#[derive(Debug, Clone)]
pub struct Duplication {
    pub graph: Graph,
    pub kind: SegmentKind,
    /// For each Q vertex (ascending), the label of its copy.
    pub copy_of: Vec<(usize, usize)>,
}

/// Duplicates an induced path or cycle Q: adds a disjoint copy Q' of h[Q]
/// and joins each copy y' to N_h(y) minus V(Q).
pub fn duplicate_along(h: &Graph, q: &[usize]) -> Result<Duplication, DensityError> {
    let kind = classify_induced_segment(h, q)?;
    let mut sorted = q.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut in_q = vec![false; h.n()];
    for &v in &sorted {
        in_q[v] = true;
    }
    let n_plus = h.n() + sorted.len();
    let copy_id: std::collections::HashMap<usize, usize> =
        sorted.iter().enumerate().map(|(i, &v)| (v, h.n() + i)).collect();
    let mut edges: Vec<(usize, usize)> = h.edges().collect();
    for (i, &y) in sorted.iter().enumerate() {
        let y_copy = h.n() + i;
        for &w in h.neighbours(y) {
            if in_q[w] {
                let w_copy = copy_id[&w];
                if y_copy < w_copy {
                    edges.push((y_copy, w_copy));
                }
            } else {
                edges.push((y_copy, w));
            }
        }
    }
    let graph = Graph::from_edges(n_plus, &edges)?;
    Ok(Duplication {
        graph,
        kind,
        copy_of: sorted.iter().enumerate().map(|(i, &v)| (v, h.n() + i)).collect(),
    })
}

/// The bound of the duplication lemma: max(m2(H), D) for cycles and
/// max(m2(H), D * len/(len-2)) for paths of at least 3 vertices.
pub fn duplication_bound(m2_h: Rat, d: usize, kind: SegmentKind, q_len: usize) -> Rat {
    let d = Rat::from_integer(d as i64);
    match kind {
        SegmentKind::Cycle => m2_h.max(d),
        SegmentKind::Path => {
            assert!(q_len >= 3, "path duplication bound needs at least 3 vertices");
            m2_h.max(d * Rat::new(q_len as i64, q_len as i64 - 2))
        }
    }
}
