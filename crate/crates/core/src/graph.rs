//! Simple undirected graphs with dense integer vertices, vertex orders and
//! the distance notions the embedding machinery is built on.

use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("order is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("order is not {0}-degenerate: vertex {1} has {2} left neighbours")]
    NotDegenerate(usize, usize, usize),
    #[error("left distance requires x ranked no later than y (x = {x}, y = {y})")]
    LeftDistanceOrder { y: usize, x: usize },
    #[error("power graph exponent must be at least 1")]
    ZeroPower,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Distance value with an explicit unreachable sentinel. `Infinite` compares
/// greater than every finite distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(usize),
    Infinite,
}

impl Dist {
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
/// Immutable once constructed; all operations borrow it read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list. Self-loops are rejected, duplicate
    /// edges collapse to one.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { n, adj, m: m / 2 })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Number of edges with both endpoints in `xs`.
    pub fn edges_within(&self, xs: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &x in xs {
            inside[x] = true;
        }
        let mut count = 0;
        for &x in xs {
            count += self.adj[x].iter().filter(|&&w| inside[w]).count();
        }
        count / 2
    }

    /// Number of edges with one endpoint in `xs` and the other in `ys`.
    /// The sets are expected to be disjoint.
    pub fn edges_between(&self, xs: &[usize], ys: &[usize]) -> usize {
        let mut in_y = vec![false; self.n];
        for &y in ys {
            in_y[y] = true;
        }
        xs.iter().map(|&x| self.adj[x].iter().filter(|&&w| in_y[w]).count()).sum()
    }

    /// Joint neighbourhood of `s` intersected with `within`, i.e. the
    /// vertices of `within` adjacent to every member of `s`.
    pub fn joint_neighbourhood(&self, s: &[usize], within: &[usize]) -> Vec<usize> {
        within
            .iter()
            .copied()
            .filter(|&w| s.iter().all(|&x| x != w && self.has_edge(x, w)))
            .collect()
    }

    /// BFS distance between two vertices.
    pub fn distance(&self, x: usize, y: usize) -> Dist {
        if x == y {
            return Dist::Finite(0);
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    if w == y {
                        return Dist::Finite(dist[w]);
                    }
                    queue.push_back(w);
                }
            }
        }
        Dist::Infinite
    }

    /// BFS distances from `x` to every vertex, capped at `limit` when given.
    pub fn distances_from(&self, x: usize, limit: Option<usize>) -> Vec<Dist> {
        let mut dist = vec![Dist::Infinite; self.n];
        dist[x] = Dist::Finite(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].finite().unwrap();
            if let Some(cap) = limit {
                if du == cap {
                    continue;
                }
            }
            for &w in &self.adj[u] {
                if dist[w] == Dist::Infinite {
                    dist[w] = Dist::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The `ell`-th power: edges between distinct vertices at distance 1..=ell.
    pub fn power(&self, ell: usize) -> Result<Graph, GraphError> {
        if ell == 0 {
            return Err(GraphError::ZeroPower);
        }
        let mut edges = Vec::new();
        for x in 0..self.n {
            let dist = self.distances_from(x, Some(ell));
            for (y, d) in dist.iter().enumerate() {
                if y > x {
                    if let Dist::Finite(fd) = d {
                        if *fd >= 1 {
                            edges.push((x, y));
                        }
                    }
                }
            }
        }
        Graph::from_edges(self.n, &edges)
    }

    /// Induced subgraph on `s`, together with the relabelling maps.
    pub fn induced(&self, s: &[usize]) -> Result<InducedSubgraph, GraphError> {
        let mut sorted: Vec<usize> = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
        }
        let mut from_parent = vec![usize::MAX; self.n];
        for (new, &old) in sorted.iter().enumerate() {
            from_parent[old] = new;
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in sorted.iter().enumerate() {
            for &old_w in &self.adj[old_u] {
                let new_w = from_parent[old_w];
                if new_w != usize::MAX && new_u < new_w {
                    edges.push((new_u, new_w));
                }
            }
        }
        let graph = Graph::from_edges(sorted.len(), &edges)?;
        Ok(InducedSubgraph { graph, to_parent: sorted, from_parent })
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Writes the edge-list text format: first line `n m`, then one `u v`
    /// line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<(), GraphError> {
        writeln!(out, "{} {}", self.n, self.m)?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Reads the edge-list format, tolerating a trailing `order:` line that
    /// [`OrderedGraph::read_edge_list`] understands.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let (graph, _) = read_edge_list_with_order(reader)?;
        Ok(graph)
    }
}

/// Induced subgraph plus the relabelling in both directions, so pattern
/// embeddings can be translated back into the host graph.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// New label to old label, sorted ascending.
    pub to_parent: Vec<usize>,
    /// Old label to new label, `usize::MAX` for vertices outside the subset.
    pub from_parent: Vec<usize>,
}

/// A graph together with a vertex order (`order[i]` is the vertex at rank
/// `i`). When the order is a D-degeneracy order every vertex has at most D
/// neighbours of smaller rank.
#[derive(Debug, Clone)]
pub struct OrderedGraph {
    graph: Graph,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl OrderedGraph {
    pub fn new(graph: Graph, order: Vec<usize>) -> Result<Self, GraphError> {
        if order.len() != graph.n() {
            return Err(GraphError::NotAPermutation);
        }
        let mut rank = vec![usize::MAX; graph.n()];
        for (i, &v) in order.iter().enumerate() {
            if v >= graph.n() || rank[v] != usize::MAX {
                return Err(GraphError::NotAPermutation);
            }
            rank[v] = i;
        }
        Ok(OrderedGraph { graph, order, rank })
    }

    /// The natural order 0, 1, ..., n-1.
    pub fn natural(graph: Graph) -> Self {
        let order: Vec<usize> = (0..graph.n()).collect();
        let rank = order.clone();
        OrderedGraph { graph, order, rank }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn vertex_at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// Neighbours of `x` of strictly smaller rank.
    pub fn left_neighbours(&self, x: usize) -> Vec<usize> {
        self.graph
            .neighbours(x)
            .iter()
            .copied()
            .filter(|&w| self.rank[w] < self.rank[x])
            .collect()
    }

    pub fn left_degree(&self, x: usize) -> usize {
        self.left_neighbours(x).len()
    }

    pub fn max_left_degree(&self) -> usize {
        (0..self.n()).map(|v| self.left_degree(v)).max().unwrap_or(0)
    }

    pub fn is_degeneracy_order(&self, d: usize) -> bool {
        self.max_left_degree() <= d
    }

    pub fn check_degeneracy_order(&self, d: usize) -> Result<(), GraphError> {
        for v in 0..self.n() {
            let ld = self.left_degree(v);
            if ld > d {
                return Err(GraphError::NotDegenerate(d, v, ld));
            }
        }
        Ok(())
    }

    /// Length of a shortest path from `y` to `x` that strictly descends in
    /// rank at every step, or `Infinite` if none exists. Requires `x`
    /// ranked no later than `y`.
    pub fn left_distance(&self, y: usize, x: usize) -> Result<Dist, GraphError> {
        if self.rank[x] > self.rank[y] {
            return Err(GraphError::LeftDistanceOrder { y, x });
        }
        Ok(self.left_distances_from(y, None)[x])
    }

    /// Left distances from `y` to every vertex, capped at `limit` when given.
    /// Entries for vertices ranked after `y` stay `Infinite`.
    pub fn left_distances_from(&self, y: usize, limit: Option<usize>) -> Vec<Dist> {
        let mut dist = vec![Dist::Infinite; self.n()];
        dist[y] = Dist::Finite(0);
        let mut queue = VecDeque::from([y]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].finite().unwrap();
            if let Some(cap) = limit {
                if du == cap {
                    continue;
                }
            }
            for &w in self.graph.neighbours(u) {
                if self.rank[w] < self.rank[u] && dist[w] == Dist::Infinite {
                    dist[w] = Dist::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Writes the edge-list format with a trailing `order:` line.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<(), GraphError> {
        self.graph.write_edge_list(&mut out)?;
        let order: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        writeln!(out, "order: {}", order.join(" "))?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let (graph, order) = read_edge_list_with_order(reader)?;
        match order {
            Some(order) => OrderedGraph::new(graph, order),
            None => Ok(OrderedGraph::natural(graph)),
        }
    }
}

fn read_edge_list_with_order<R: BufRead>(
    reader: R,
) -> Result<(Graph, Option<Vec<usize>>), GraphError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| GraphError::Parse("missing header line".into()))??;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .ok_or_else(|| GraphError::Parse("header needs `n m`".into()))?
        .parse()
        .map_err(|e| GraphError::Parse(format!("bad n: {e}")))?;
    let m: usize = parts
        .next()
        .ok_or_else(|| GraphError::Parse("header needs `n m`".into()))?
        .parse()
        .map_err(|e| GraphError::Parse(format!("bad m: {e}")))?;
    let mut edges = Vec::with_capacity(m);
    let mut order = None;
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("order:") {
            let parsed: Result<Vec<usize>, _> =
                rest.split_whitespace().map(str::parse).collect();
            order = Some(parsed.map_err(|e| GraphError::Parse(format!("bad order: {e}")))?);
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line}")))?
            .parse()
            .map_err(|e| GraphError::Parse(format!("bad edge endpoint: {e}")))?;
        let v: usize = it
            .next()
            .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line}")))?
            .parse()
            .map_err(|e| GraphError::Parse(format!("bad edge endpoint: {e}")))?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse(format!(
            "header promised {m} edges, found {}",
            edges.len()
        )));
    }
    Ok((Graph::from_edges(n, &edges)?, order))
}

/// A shortest cycle of the graph, or None for forests. Shortest cycles are
/// always induced.
pub fn shortest_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Option<Vec<usize>> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = &best {
                if dist[u] + 1 >= b.len() {
                    break;
                }
            }
            for &w in g.neighbours(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && parent[w] != u {
                    // Cross edge closes a cycle through the BFS-tree paths.
                    let cycle = cycle_through(&parent, &dist, u, w);
                    if best.as_ref().map(|b| cycle.len() < b.len()).unwrap_or(true) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

fn cycle_through(parent: &[usize], dist: &[usize], u: usize, w: usize) -> Vec<usize> {
    // Walk both endpoints up to their lowest common ancestor.
    let mut pu = vec![u];
    let mut pw = vec![w];
    let (mut a, mut b) = (u, w);
    while dist[a] > dist[b] {
        a = parent[a];
        pu.push(a);
    }
    while dist[b] > dist[a] {
        b = parent[b];
        pw.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        pu.push(a);
        pw.push(b);
    }
    // pu ends at the LCA; pw's copy of it is dropped.
    pw.pop();
    pw.reverse();
    pu.extend(pw);
    pu
}

/// Smallest-degree-first peeling with lowest-index tie-breaking. Returns the
/// degeneracy order (reverse removal order) and the degeneracy itself.
pub fn degeneracy_order(g: &Graph) -> (OrderedGraph, usize) {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("some vertex remains");
        degeneracy = degeneracy.max(degree[v]);
        removed[v] = true;
        removal.push(v);
        for &w in g.neighbours(v) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    removal.reverse();
    let og = OrderedGraph::new(g.clone(), removal).expect("removal order is a permutation");
    (og, degeneracy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_degeneracy() {
        let g = Graph::complete(4);
        let (og, d) = degeneracy_order(&g);
        assert_eq!(d, 3);
        assert!(og.is_degeneracy_order(3));
    }

    #[test]
    fn path_degeneracy() {
        let g = Graph::path(5);
        let (og, d) = degeneracy_order(&g);
        assert_eq!(d, 1);
        assert!(og.is_degeneracy_order(1));
    }

    #[test]
    fn c5_degeneracy_matches_brute_force() {
        let g = Graph::cycle(5);
        let (_, d) = degeneracy_order(&g);
        assert_eq!(d, 2);
        // Brute force: minimum over all 120 orders of the max left degree.
        let mut best = usize::MAX;
        let mut perm: Vec<usize> = (0..5).collect();
        permute(&mut perm, 0, &mut |p| {
            let og = OrderedGraph::new(g.clone(), p.to_vec()).unwrap();
            best = best.min(og.max_left_degree());
        });
        assert_eq!(best, d);
    }

    fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, f);
            items.swap(k, i);
        }
    }

    #[test]
    fn left_distance_on_path() {
        let g = Graph::path(5);
        let og = OrderedGraph::natural(g);
        assert_eq!(og.left_distance(4, 2).unwrap(), Dist::Finite(2));
        assert_eq!(og.left_distance(4, 4).unwrap(), Dist::Finite(0));
        assert!(og.left_distance(2, 4).is_err());
    }

    #[test]
    fn left_distance_star_centre_last() {
        // Star on 5 vertices, centre 4 ranked last in the natural order.
        let edges: Vec<_> = (0..4).map(|v| (v, 4)).collect();
        let g = Graph::from_edges(5, &edges).unwrap();
        let og = OrderedGraph::natural(g);
        assert_eq!(og.left_distance(4, 1).unwrap(), Dist::Finite(1));
        // Leaves are mutually unreachable by descending paths.
        assert_eq!(og.left_distance(3, 1).unwrap(), Dist::Infinite);
    }

    #[test]
    fn power_graph_p4() {
        let g = Graph::path(4);
        let p2 = g.power(2).unwrap();
        let edges: Vec<_> = p2.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let p1 = g.power(1).unwrap();
        assert_eq!(p1, g);
    }

    #[test]
    fn power_graph_matches_distances() {
        // Edge set of g^ell equals pairs at distance 1..=ell, small random-ish graphs.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 6)],
        )
        .unwrap();
        for ell in 1..=4 {
            let p = g.power(ell).unwrap();
            for x in 0..7 {
                for y in (x + 1)..7 {
                    let d = g.distance(x, y);
                    let expect = matches!(d, Dist::Finite(fd) if fd >= 1 && fd <= ell);
                    assert_eq!(p.has_edge(x, y), expect, "x={x} y={y} ell={ell}");
                }
            }
        }
    }

    #[test]
    fn disconnected_distance_infinite() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 3), Dist::Infinite);
    }

    #[test]
    fn induced_and_counters() {
        let g = Graph::complete(4);
        let sub = g.induced(&[1, 3]).unwrap();
        assert_eq!(sub.graph.edge_count(), 1);
        assert_eq!(sub.to_parent, vec![1, 3]);

        // K_{3,3} with sides {0,1,2} and {3,4,5}.
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        let kb = Graph::from_edges(6, &edges).unwrap();
        assert_eq!(kb.edges_between(&[0, 1, 2], &[3, 4, 5]), 9);

        let c5 = Graph::cycle(5);
        // Joint neighbourhood of {0,2} in C_5 is exactly {1}.
        assert_eq!(c5.joint_neighbourhood(&[0, 2], &[0, 1, 2, 3, 4]), vec![1]);
    }

    #[test]
    fn edge_counter_partition_identity() {
        let g = Graph::from_edges(
            8,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 7)],
        )
        .unwrap();
        let x = vec![0, 2, 4, 6];
        let rest = vec![1, 3, 5, 7];
        assert_eq!(
            g.edges_within(&x) + g.edges_between(&x, &rest) + g.edges_within(&rest),
            g.edge_count()
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = Graph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(g, back);

        let og = OrderedGraph::new(g, vec![4, 3, 2, 1, 0]).unwrap();
        let mut buf = Vec::new();
        og.write_edge_list(&mut buf).unwrap();
        let back = OrderedGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.order(), &[4, 3, 2, 1, 0]);
    }

    #[test]
    fn empty_graph_degeneracy() {
        let g = Graph::empty(0);
        let (og, d) = degeneracy_order(&g);
        assert_eq!(d, 0);
        assert_eq!(og.n(), 0);
    }

    #[test]
    fn shortest_cycle_basics() {
        assert!(shortest_cycle(&Graph::path(6)).is_none());
        let c = shortest_cycle(&Graph::cycle(5)).unwrap();
        assert_eq!(c.len(), 5);
        // C5 plus a chord 0-2 has girth 3.
        let mut edges: Vec<_> = Graph::cycle(5).edges().collect();
        edges.push((0, 2));
        let g = Graph::from_edges(5, &edges).unwrap();
        let c = shortest_cycle(&g).unwrap();
        assert_eq!(c.len(), 3);
        // The reported cycle is genuinely a cycle.
        for i in 0..c.len() {
            assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
        }
        let mut dedup = c.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), c.len());
    }
}
