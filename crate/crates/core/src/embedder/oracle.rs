//! Candidate sets, cross-off sets and the homomorphism grower. The W-sets
//! produced here feed both the greedy trajectory runner and the injective
//! embedding construction.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::extensions::{enumerate_extensions, Classifier, HostView};
use super::lookahead::{LookaheadContext, LookaheadTarget};
use super::EmbedderError;
use crate::bitset::Bitset;
use crate::graph::OrderedGraph;
use crate::rng::{derive_seed, rng_from_seed};

/// Read-only inputs shared by every step of one embedding run.
pub struct EmbedderInputs<'a> {
    pub f: &'a OrderedGraph,
    pub host: HostView<'a>,
    /// F vertex to part index.
    pub phi: &'a [usize],
    /// One lookahead context per F vertex.
    pub contexts: &'a [LookaheadContext],
    /// Optional final-segment context with its completion region.
    pub segment: Option<(&'a LookaheadContext, &'a Bitset)>,
    /// For each x, the targets y with x in V(H1'(y)).
    pub lookahead_of: Vec<Vec<usize>>,
    pub kappa: f64,
    pub d: f64,
    pub p: f64,
    pub ext_budget: u64,
}

impl<'a> EmbedderInputs<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f: &'a OrderedGraph,
        host: HostView<'a>,
        phi: &'a [usize],
        contexts: &'a [LookaheadContext],
        segment: Option<(&'a LookaheadContext, &'a Bitset)>,
        kappa: f64,
        d: f64,
        p: f64,
        ext_budget: u64,
    ) -> Self {
        let mut lookahead_of = vec![Vec::new(); f.n()];
        for (y, ctx) in contexts.iter().enumerate() {
            for &x in &ctx.h1_prime {
                lookahead_of[x].push(y);
            }
        }
        EmbedderInputs {
            f,
            host,
            phi,
            contexts,
            segment,
            lookahead_of,
            kappa,
            d,
            p,
            ext_budget,
        }
    }
}

/// W': the common colour neighbourhood of the embedded left neighbours of x
/// inside x's part. With no left neighbours this is the whole part.
pub fn candidate_set(inputs: &EmbedderInputs, image: &[usize], x: usize) -> Bitset {
    let mut mask = inputs.host.parts[inputs.phi[x]].clone();
    for w in inputs.f.left_neighbours(x) {
        debug_assert!(image[w] != usize::MAX, "left neighbours are embedded first");
        mask.intersect_with(&inputs.host.g_adj[image[w]]);
    }
    mask
}

/// One cross-off record: how many candidates a single lookahead target
/// removed, with the thresholds in force.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossOffRecord {
    /// The target vertex, or None for the final segment.
    pub target: Option<usize>,
    pub removed: usize,
    pub threshold: f64,
    /// The claimed cap kappa N p^{leftdeg(x)} from the counting argument.
    pub claimed_cap: f64,
    pub boundary_step: bool,
}

#[derive(Debug, Clone)]
pub struct CrossOffOutcome {
    pub w: Bitset,
    pub w_prime_size: usize,
    pub records: Vec<CrossOffRecord>,
}

/// v(x,y) and e(x,y): vertices of H1'(y) after x in the order, and edges of
/// H1'(y) not entirely within the prefix closed at x.
fn remaining_counts(
    f: &OrderedGraph,
    ctx: &LookaheadContext,
    x: usize,
) -> (usize, usize) {
    let rank_x = f.rank(x);
    let v = ctx.h1_prime.iter().filter(|&&u| f.rank(u) > rank_x).count();
    let mut e = 0;
    for (lu, lw) in ctx.h1_graph.graph.edges() {
        let u = ctx.h1_graph.to_parent[lu];
        let w = ctx.h1_graph.to_parent[lw];
        if f.rank(u) > rank_x || f.rank(w) > rank_x {
            e += 1;
        }
    }
    (v, e)
}

/// W: W' minus, for every lookahead target, the candidates whose adoption
/// pushes the bad-extension count over the inductive threshold.
pub fn cross_off(
    inputs: &EmbedderInputs,
    image: &mut Vec<usize>,
    x: usize,
) -> Result<CrossOffOutcome, EmbedderError> {
    let w_prime = candidate_set(inputs, image, x);
    let w_prime_size = w_prime.count();
    let mut w = w_prime.clone();
    let mut records = Vec::new();
    let n = inputs.host.n as f64;
    let claimed_cap =
        inputs.kappa * n * inputs.p.powi(inputs.f.left_degree(x) as i32);

    let mut apply_target = |w: &mut Bitset,
                            ctx: &LookaheadContext,
                            classifier: &Classifier,
                            target: Option<usize>|
     -> Result<(), EmbedderError> {
        let (v_cnt, e_cnt) = remaining_counts(inputs.f, ctx, x);
        let threshold =
            inputs.kappa.powi(v_cnt as i32 + 1) * n.powi(v_cnt as i32) * inputs.p.powi(e_cnt as i32);
        let limit = threshold.floor().max(0.0) as u64;
        let mut removed = 0;
        let mut budget = inputs.ext_budget;
        for v in w_prime.iter().collect::<Vec<_>>() {
            if !w.contains(v) {
                continue;
            }
            image[x] = v;
            let (_, bad) = enumerate_extensions(
                &inputs.host,
                inputs.f,
                inputs.phi,
                ctx,
                image,
                classifier,
                &mut budget,
                Some(limit),
            )?;
            image[x] = usize::MAX;
            if bad as f64 > threshold {
                w.remove(v);
                removed += 1;
            }
        }
        let boundary_step = ctx.boundary.contains(&x);
        records.push(CrossOffRecord {
            target,
            removed,
            threshold,
            claimed_cap,
            boundary_step,
        });
        Ok(())
    };

    for &y in &inputs.lookahead_of[x] {
        let ctx = &inputs.contexts[y];
        debug_assert!(matches!(ctx.target, LookaheadTarget::Vertex(t) if t == y));
        apply_target(
            &mut w,
            ctx,
            &Classifier::Promising { d: inputs.d, p: inputs.p },
            Some(y),
        )?;
    }
    if let Some((ctx, allowed)) = inputs.segment {
        if ctx.h1_prime.contains(&x) {
            apply_target(&mut w, ctx, &Classifier::Completable { allowed }, None)?;
        }
    }
    Ok(CrossOffOutcome { w, w_prime_size, records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoicePolicy {
    /// Pseudo-random seeded choice within W.
    Seeded,
    /// Deterministic lowest-index choice.
    FirstIndex,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRecord {
    pub x: usize,
    pub w_prime_size: usize,
    pub w_size: usize,
    pub chosen: Option<usize>,
    pub cross_offs: Vec<CrossOffRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
    pub failed_at: Option<usize>,
    /// ind1 violations observed in audit mode (step, target).
    pub ind1_violations: Vec<(usize, usize)>,
}

/// Grows a phi-partite homomorphism vertex by vertex in the given order,
/// choosing from W at every step. In audit mode, ind1 is re-checked for
/// every target whose left neighbourhood just completed.
pub fn grow_homomorphism(
    inputs: &EmbedderInputs,
    policy: ChoicePolicy,
    seed: u64,
    audit: bool,
) -> Result<(Vec<usize>, Trajectory), EmbedderError> {
    let n = inputs.f.n();
    let mut image = vec![usize::MAX; n];
    let mut rng = rng_from_seed(derive_seed(seed, 0x67726f77, 0));
    let mut steps = Vec::with_capacity(n);
    let mut ind1_violations = Vec::new();
    for pos in 0..n {
        let x = inputs.f.order()[pos];
        let outcome = cross_off(inputs, &mut image, x)?;
        let w_size = outcome.w.count();
        if w_size == 0 {
            steps.push(StepRecord {
                x,
                w_prime_size: outcome.w_prime_size,
                w_size: 0,
                chosen: None,
                cross_offs: outcome.records,
            });
            return Ok((image, Trajectory { steps, failed_at: Some(x), ind1_violations }));
        }
        let members: Vec<usize> = outcome.w.iter().collect();
        let v = match policy {
            ChoicePolicy::Seeded => members[rng.gen_range(0..members.len())],
            ChoicePolicy::FirstIndex => members[0],
        };
        image[x] = v;
        steps.push(StepRecord {
            x,
            w_prime_size: outcome.w_prime_size,
            w_size,
            chosen: Some(v),
            cross_offs: outcome.records,
        });
        if audit {
            for b in 0..n {
                if image[b] != usize::MAX || inputs.f.rank(b) <= pos {
                    continue;
                }
                let left = inputs.f.left_neighbours(b);
                if left.is_empty() || left.iter().any(|&w| image[w] == usize::MAX) {
                    continue;
                }
                if left.iter().map(|&w| inputs.f.rank(w)).max() != Some(pos) {
                    continue;
                }
                let anchors: Vec<usize> = left.iter().map(|&w| image[w]).collect();
                if !super::extensions::is_promising(
                    &inputs.host,
                    &anchors,
                    inputs.phi[b],
                    inputs.d,
                    inputs.p,
                ) {
                    ind1_violations.push((x, b));
                }
            }
        }
    }
    Ok((image, Trajectory { steps, failed_at: None, ind1_violations }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::adjacency_bitsets;
    use crate::embedder::lookahead::build_lookahead;
    use crate::graph::Graph;
    use num_rational::Rational64;

    fn contiguous_parts(n: usize, k: usize) -> Vec<Bitset> {
        let size = n / k;
        (0..k)
            .map(|i| {
                let lo = i * size;
                let hi = if i + 1 == k { n } else { lo + size };
                Bitset::from_slice(n, &(lo..hi).collect::<Vec<_>>())
            })
            .collect()
    }

    #[test]
    fn candidate_set_no_left_neighbours_is_part() {
        let f = crate::graph::OrderedGraph::natural(Graph::path(3));
        let host_graph = Graph::complete(9);
        let gamma_adj = adjacency_bitsets(&host_graph);
        let parts = contiguous_parts(9, 3);
        let host = HostView { n: 9, gamma_adj: &gamma_adj, g_adj: &gamma_adj, parts: &parts, part_size: 3 };
        let phi = vec![0, 1, 2];
        let contexts: Vec<_> = (0..3)
            .map(|y| build_lookahead(&f, y, 1, Rational64::new(1, 2), 1, 5).unwrap())
            .collect();
        let inputs =
            EmbedderInputs::new(&f, host, &phi, &contexts, None, 0.1, 0.5, 1.0, 1_000_000);
        let image = vec![usize::MAX; 3];
        let w = candidate_set(&inputs, &image, 0);
        assert_eq!(w.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn grow_on_complete_host_succeeds() {
        let f = crate::graph::OrderedGraph::natural(Graph::path(4));
        let host_graph = Graph::complete(12);
        let gamma_adj = adjacency_bitsets(&host_graph);
        let parts = contiguous_parts(12, 4);
        let host = HostView { n: 12, gamma_adj: &gamma_adj, g_adj: &gamma_adj, parts: &parts, part_size: 3 };
        let phi = vec![0, 1, 2, 3];
        let contexts: Vec<_> = (0..4)
            .map(|y| build_lookahead(&f, y, 1, Rational64::new(1, 2), 2, 5).unwrap())
            .collect();
        let inputs =
            EmbedderInputs::new(&f, host, &phi, &contexts, None, 0.2, 1.0, 1.0, 1_000_000);
        let (image, traj) =
            grow_homomorphism(&inputs, ChoicePolicy::FirstIndex, 7, true).unwrap();
        assert!(traj.failed_at.is_none());
        assert!(traj.ind1_violations.is_empty());
        for (u, v) in f.graph().edges() {
            assert!(host_graph.has_edge(image[u], image[v]));
        }
    }

    #[test]
    fn grow_fails_cleanly_on_empty_colour() {
        // Colour graph with no edges between part 0 and part 1: the first
        // edge step must fail with a diagnosis.
        let f = crate::graph::OrderedGraph::natural(Graph::path(2));
        let host_graph = Graph::complete(8);
        let gamma_adj = adjacency_bitsets(&host_graph);
        let empty = Graph::empty(8);
        let g_adj = adjacency_bitsets(&empty);
        let parts = contiguous_parts(8, 2);
        let host = HostView { n: 8, gamma_adj: &gamma_adj, g_adj: &g_adj, parts: &parts, part_size: 4 };
        let phi = vec![0, 1];
        let contexts: Vec<_> = (0..2)
            .map(|y| build_lookahead(&f, y, 1, Rational64::new(1, 2), 1, 4).unwrap())
            .collect();
        let inputs =
            EmbedderInputs::new(&f, host, &phi, &contexts, None, 0.2, 0.5, 1.0, 1_000_000);
        let (_, traj) = grow_homomorphism(&inputs, ChoicePolicy::FirstIndex, 7, false).unwrap();
        // Vertex 0 has no left neighbours and embeds fine; vertex 1's
        // candidate set is empty in the colour graph. The cross-off at
        // step 0 may already starve W by foreseeing it.
        assert!(traj.failed_at.is_some());
    }

    #[test]
    fn cross_off_empty_when_no_bad_extensions() {
        let f = crate::graph::OrderedGraph::natural(Graph::path(3));
        let host_graph = Graph::complete(9);
        let gamma_adj = adjacency_bitsets(&host_graph);
        let parts = contiguous_parts(9, 3);
        let host = HostView { n: 9, gamma_adj: &gamma_adj, g_adj: &gamma_adj, parts: &parts, part_size: 3 };
        let phi = vec![0, 1, 2];
        let contexts: Vec<_> = (0..3)
            .map(|y| build_lookahead(&f, y, 1, Rational64::new(1, 2), 1, 5).unwrap())
            .collect();
        let inputs =
            EmbedderInputs::new(&f, host, &phi, &contexts, None, 0.2, 1.0, 1.0, 1_000_000);
        let mut image = vec![usize::MAX; 3];
        image[0] = 0;
        let outcome = cross_off(&inputs, &mut image, 1).unwrap();
        // On a complete host every extension is promising.
        assert!(outcome.records.iter().all(|r| r.removed == 0));
        assert_eq!(outcome.w.count(), 3);
    }
}
