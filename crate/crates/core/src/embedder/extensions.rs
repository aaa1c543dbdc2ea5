//! Extension enumeration: homomorphisms of a lookahead pattern consistent
//! with the current partial embedding, partite and colour-respecting on the
//! root part, unrestricted in the ambient host elsewhere, classified as
//! promising/completable or not via their root restriction.

use super::lookahead::{LookaheadContext, LookaheadTarget};
use super::EmbedderError;
use crate::bitset::Bitset;
use crate::graph::OrderedGraph;

/// Shared read-only view of the host for one embedding run.
#[derive(Clone, Copy)]
pub struct HostView<'a> {
    pub n: usize,
    /// Ambient host adjacency.
    pub gamma_adj: &'a [Bitset],
    /// Chosen-colour subgraph adjacency.
    pub g_adj: &'a [Bitset],
    /// Part masks, indexed by part id.
    pub parts: &'a [Bitset],
    /// Common part size (the N/K of the thresholds).
    pub part_size: usize,
}

/// Promising test: the joint colour neighbourhood of the anchors inside the
/// target part must reach half its expected size.
pub fn is_promising(
    host: &HostView,
    anchors: &[usize],
    y_part: usize,
    d: f64,
    p: f64,
) -> bool {
    let mut mask = host.parts[y_part].clone();
    for &a in anchors {
        mask.intersect_with(&host.g_adj[a]);
    }
    let threshold = 0.5 * (d * p).powi(anchors.len() as i32) * host.part_size as f64;
    (mask.count() as f64) >= threshold
}

/// Completable test: the segment Q extends the given root images into the
/// allowed region (outside Z and all parts), colour edges throughout.
pub fn is_completable(
    host: &HostView,
    f: &OrderedGraph,
    q: &[usize],
    image: &[usize],
    allowed: &Bitset,
) -> bool {
    complete_segment(host, f, q, image, allowed).is_some()
}

/// Searches for an embedding of Q into the allowed region consistent with
/// the images of its already-embedded neighbours; returns the placement.
pub fn complete_segment(
    host: &HostView,
    f: &OrderedGraph,
    q: &[usize],
    image: &[usize],
    allowed: &Bitset,
) -> Option<Vec<(usize, usize)>> {
    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(q.len());
    if segment_recurse(host, f, q, image, allowed, 0, &mut placed) {
        Some(placed)
    } else {
        None
    }
}

fn segment_recurse(
    host: &HostView,
    f: &OrderedGraph,
    q: &[usize],
    image: &[usize],
    allowed: &Bitset,
    depth: usize,
    placed: &mut Vec<(usize, usize)>,
) -> bool {
    if depth == q.len() {
        return true;
    }
    let qv = q[depth];
    let mut candidates = allowed.clone();
    for &w in f.graph().neighbours(qv) {
        let h = if let Some(&(_, h)) = placed.iter().find(|&&(pv, _)| pv == w) {
            Some(h)
        } else if image[w] != usize::MAX {
            Some(image[w])
        } else {
            None
        };
        if let Some(h) = h {
            candidates.intersect_with(&host.g_adj[h]);
        }
    }
    for &(_, h) in placed.iter() {
        candidates.remove(h);
    }
    for v in candidates.iter().collect::<Vec<_>>() {
        placed.push((qv, v));
        if segment_recurse(host, f, q, image, allowed, depth + 1, placed) {
            return true;
        }
        placed.pop();
    }
    false
}

/// How the root restriction of an extension is classified.
pub enum Classifier<'a> {
    Promising { d: f64, p: f64 },
    Completable { allowed: &'a Bitset },
}

/// Exact (total, bad) counts of extensions of the current embedding for the
/// given lookahead context. "Bad" means the root restriction is unpromising
/// (resp. uncompletable). `early_exit_bad` stops once the bad count exceeds
/// the given value, returning a lower bound that already settles the
/// threshold comparison.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_extensions(
    host: &HostView,
    f: &OrderedGraph,
    phi: &[usize],
    ctx: &LookaheadContext,
    image: &[usize],
    classifier: &Classifier,
    budget: &mut u64,
    early_exit_bad: Option<u64>,
) -> Result<(u64, u64), EmbedderError> {
    let in_h0: Vec<bool> = {
        let mut mask = vec![false; f.n()];
        for &v in &ctx.h0_prime {
            mask[v] = true;
        }
        mask
    };
    let mut free_h0: Vec<usize> =
        ctx.h0_prime.iter().copied().filter(|&v| image[v] == usize::MAX).collect();
    let mut free_rest: Vec<usize> = ctx
        .h1_prime
        .iter()
        .copied()
        .filter(|&v| image[v] == usize::MAX && !in_h0[v])
        .collect();
    // Anchored-first static order inside each group.
    let order_group = |group: &mut Vec<usize>, placed: &mut Vec<bool>| {
        let mut ordered = Vec::with_capacity(group.len());
        while !group.is_empty() {
            let (idx, &best) = group
                .iter()
                .enumerate()
                .max_by_key(|(_, &u)| {
                    let anchored = ctx
                        .h1_graph
                        .graph
                        .neighbours(ctx.h1_graph.from_parent[u])
                        .iter()
                        .filter(|&&lw| placed[ctx.h1_graph.to_parent[lw]])
                        .count();
                    (anchored, std::cmp::Reverse(u))
                })
                .expect("group nonempty");
            ordered.push(best);
            placed[best] = true;
            group.remove(idx);
        }
        ordered
    };
    let mut placed: Vec<bool> = (0..f.n()).map(|v| image[v] != usize::MAX).collect();
    let ordered_h0 = order_group(&mut free_h0, &mut placed);
    let ordered_rest = order_group(&mut free_rest, &mut placed);
    let mut order = ordered_h0;
    let h0_depth = order.len();
    order.extend(ordered_rest);

    let mut used = Bitset::new(host.n);
    for &v in &ctx.h1_prime {
        if image[v] != usize::MAX {
            used.insert(image[v]);
        }
    }
    let mut work = image.to_vec();

    // The classification anchors: for a vertex target, the images of the
    // left neighbourhood of y; for a segment, the whole root restriction.
    let anchors: Vec<usize> = match &ctx.target {
        LookaheadTarget::Vertex(y) => f.left_neighbours(*y),
        LookaheadTarget::Segment(_) => Vec::new(),
    };
    let y_part = match &ctx.target {
        LookaheadTarget::Vertex(y) => phi[*y],
        LookaheadTarget::Segment(_) => 0,
    };

    let mut state = EnumState {
        host,
        f,
        phi,
        ctx,
        in_h0: &in_h0,
        order: &order,
        h0_depth,
        classifier,
        anchors: &anchors,
        y_part,
        budget,
        early_exit_bad,
        total: 0,
        bad: 0,
    };
    state.recurse(0, &mut work, &mut used, None)?;
    Ok((state.total, state.bad))
}

struct EnumState<'a, 'b> {
    host: &'a HostView<'a>,
    f: &'a OrderedGraph,
    phi: &'a [usize],
    ctx: &'a LookaheadContext,
    in_h0: &'a [bool],
    order: &'a [usize],
    h0_depth: usize,
    classifier: &'a Classifier<'b>,
    anchors: &'a [usize],
    y_part: usize,
    budget: &'a mut u64,
    early_exit_bad: Option<u64>,
    total: u64,
    bad: u64,
}

impl EnumState<'_, '_> {
    fn classify_bad(&self, image: &[usize]) -> bool {
        match self.classifier {
            Classifier::Promising { d, p } => {
                let anchor_hosts: Vec<usize> =
                    self.anchors.iter().map(|&a| image[a]).collect();
                !is_promising(self.host, &anchor_hosts, self.y_part, *d, *p)
            }
            Classifier::Completable { allowed } => {
                let q = match &self.ctx.target {
                    LookaheadTarget::Segment(q) => q.clone(),
                    LookaheadTarget::Vertex(_) => Vec::new(),
                };
                !is_completable(self.host, self.f, &q, image, allowed)
            }
        }
    }

    fn candidates(&self, u: usize, image: &[usize], used: &Bitset) -> Bitset {
        let mut mask = if self.in_h0[u] {
            self.host.parts[self.phi[u]].clone()
        } else {
            Bitset::full(self.host.n)
        };
        let lu = self.ctx.h1_graph.from_parent[u];
        for &lw in self.ctx.h1_graph.graph.neighbours(lu) {
            let w = self.ctx.h1_graph.to_parent[lw];
            if image[w] != usize::MAX {
                if self.in_h0[u] && self.in_h0[w] {
                    mask.intersect_with(&self.host.g_adj[image[w]]);
                } else {
                    mask.intersect_with(&self.host.gamma_adj[image[w]]);
                }
            }
        }
        mask.subtract(used);
        mask
    }

    fn recurse(
        &mut self,
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Bitset,
        bad_flag: Option<bool>,
    ) -> Result<(), EmbedderError> {
        if *self.budget == 0 {
            return Err(EmbedderError::ExtensionBudget);
        }
        *self.budget -= 1;
        if let (Some(limit), true) = (self.early_exit_bad, bad_flag.unwrap_or(false)) {
            if self.bad > limit {
                return Ok(());
            }
        }
        // Root restriction complete: classify once.
        let bad_flag = if depth == self.h0_depth && bad_flag.is_none() {
            Some(self.classify_bad(image))
        } else {
            bad_flag
        };
        if depth == self.order.len() {
            let is_bad = bad_flag.unwrap_or_else(|| self.classify_bad(image));
            self.total += 1;
            if is_bad {
                self.bad += 1;
            }
            return Ok(());
        }
        let u = self.order[depth];
        let candidates = self.candidates(u, image, used);
        // Pure counting tail: classification settled and the remaining
        // vertex is the last one.
        if depth + 1 == self.order.len() {
            if let Some(is_bad) = bad_flag {
                let leaves = candidates.count() as u64;
                *self.budget = self.budget.saturating_sub(leaves / 8);
                self.total += leaves;
                if is_bad {
                    self.bad += leaves;
                }
                return Ok(());
            }
        }
        for v in candidates.iter().collect::<Vec<_>>() {
            image[u] = v;
            used.insert(v);
            self.recurse(depth + 1, image, used, bad_flag)?;
            used.remove(v);
            image[u] = usize::MAX;
            if let (Some(limit), true) = (self.early_exit_bad, bad_flag.unwrap_or(false)) {
                if self.bad > limit {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::adjacency_bitsets;
    use crate::embedder::lookahead::build_lookahead;
    use crate::graph::Graph;
    use num_rational::Rational64;

    fn full_parts(n: usize, k: usize) -> Vec<Bitset> {
        // k parts chopping 0..n contiguously.
        let part = n / k;
        (0..k)
            .map(|i| {
                let lo = i * part;
                let hi = if i + 1 == k { n } else { lo + part };
                Bitset::from_slice(n, &(lo..hi).collect::<Vec<_>>())
            })
            .collect()
    }

    #[test]
    fn promising_on_complete_host() {
        let host_graph = Graph::complete(12);
        let adj = adjacency_bitsets(&host_graph);
        let parts = full_parts(12, 3);
        let host =
            HostView { n: 12, gamma_adj: &adj, g_adj: &adj, parts: &parts, part_size: 4 };
        assert!(is_promising(&host, &[0, 5], 2, 1.0, 1.0));
        // Degree-0 anchors: merely |V_y| >= part_size / 2.
        assert!(is_promising(&host, &[], 1, 1.0, 1.0));
    }

    #[test]
    fn unpromising_when_neighbourhood_planted_small() {
        // Host where vertex 0 has no edges into part 2.
        let mut edges = Vec::new();
        for u in 0..8usize {
            for v in (u + 1)..8 {
                if u != 0 || v < 6 {
                    edges.push((u, v));
                }
            }
        }
        let host_graph = Graph::from_edges(8, &edges).unwrap();
        let adj = adjacency_bitsets(&host_graph);
        let parts = full_parts(8, 4);
        let host = HostView { n: 8, gamma_adj: &adj, g_adj: &adj, parts: &parts, part_size: 2 };
        // Part 3 = {6, 7}: vertex 0 sees nothing there.
        assert!(!is_promising(&host, &[0], 3, 1.0, 1.0));
    }

    #[test]
    fn extension_counts_on_tiny_planted_host() {
        // F = path 0-1-2 (natural order), y = 2, ell1 = 1: H1'(2) = {1},
        // H0' = {1}. With an empty psi, extensions place vertex 1 anywhere
        // in its part; bad ones leave y's part starved.
        let f = crate::graph::OrderedGraph::natural(Graph::path(3));
        let ctx = build_lookahead(&f, 2, 1, Rational64::new(1, 2), 1, 4).unwrap();
        assert_eq!(ctx.h1_prime, vec![1]);
        assert_eq!(ctx.h0_prime, vec![1]);

        // Host: parts {0,1}, {2,3}, {4,5}; phi maps F vertex i to part i.
        // Vertex 2 from part 1 is adjacent to all of part 2, vertex 3 to none.
        let host_graph =
            Graph::from_edges(6, &[(2, 4), (2, 5), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let adj = adjacency_bitsets(&host_graph);
        let parts = full_parts(6, 3);
        let host = HostView { n: 6, gamma_adj: &adj, g_adj: &adj, parts: &parts, part_size: 2 };
        let phi = vec![0, 1, 2];
        let image = vec![usize::MAX; 3];
        let mut budget = 10_000;
        let (total, bad) = enumerate_extensions(
            &host,
            &f,
            &phi,
            &ctx,
            &image,
            &Classifier::Promising { d: 1.0, p: 1.0 },
            &mut budget,
            None,
        )
        .unwrap();
        // Two placements of vertex 1 (hosts 2 and 3); host 3 leaves part 2
        // empty for y, hence unpromising.
        assert_eq!(total, 2);
        assert_eq!(bad, 1);
    }

    #[test]
    fn fully_embedded_pattern_counts_one() {
        let f = crate::graph::OrderedGraph::natural(Graph::path(3));
        let ctx = build_lookahead(&f, 2, 1, Rational64::new(1, 2), 1, 4).unwrap();
        let host_graph = Graph::complete(6);
        let adj = adjacency_bitsets(&host_graph);
        let parts = full_parts(6, 3);
        let host = HostView { n: 6, gamma_adj: &adj, g_adj: &adj, parts: &parts, part_size: 2 };
        let phi = vec![0, 1, 2];
        let mut image = vec![usize::MAX; 3];
        image[1] = 2;
        let mut budget = 10_000;
        let (total, bad) = enumerate_extensions(
            &host,
            &f,
            &phi,
            &ctx,
            &image,
            &Classifier::Promising { d: 1.0, p: 1.0 },
            &mut budget,
            None,
        )
        .unwrap();
        assert_eq!(total, 1);
        assert_eq!(bad, 0);
    }

    #[test]
    fn completion_search_extremes() {
        let f = crate::graph::OrderedGraph::natural(Graph::path(4));
        let host_graph = Graph::complete(8);
        let adj = adjacency_bitsets(&host_graph);
        let parts = full_parts(8, 2);
        let host = HostView { n: 8, gamma_adj: &adj, g_adj: &adj, parts: &parts, part_size: 4 };
        let mut image = vec![usize::MAX; 4];
        image[0] = 0;
        image[1] = 1;
        let allowed = Bitset::from_slice(8, &[5, 6, 7]);
        // Q = {2, 3} completes greedily on a complete host.
        assert!(is_completable(&host, &f, &[2, 3], &image, &allowed));
        // Empty allowed region: nothing completes.
        let empty = Bitset::new(8);
        assert!(!is_completable(&host, &f, &[2, 3], &image, &empty));
        // Empty Q: vacuously completable.
        assert!(is_completable(&host, &f, &[], &image, &empty));
    }
}
