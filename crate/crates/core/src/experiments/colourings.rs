//! Edge-colouring strategies. The theory quantifies over all colourings;
//! these strategies provide random and mildly adversarial pressure for the
//! empirical runs, labelled exploratory.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bitset::adjacency_bitsets;
use crate::colouring::EdgeColouring;
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColouringStrategy {
    /// Independent uniform colour per edge.
    Random,
    /// Vertices split into r groups; an edge's colour is the sum of its
    /// endpoint groups mod r, so colours follow group crossings.
    MajoritySplit,
    /// Greedy: each edge takes the colour minimising the common
    /// same-coloured neighbourhood of its endpoints, starving dense
    /// monochromatic spots.
    CliqueHider,
}

pub fn colour_edges(
    g: &Graph,
    strategy: ColouringStrategy,
    r: usize,
    seed: u64,
) -> Result<EdgeColouring, ExperimentError> {
    if r == 0 {
        return Err(ExperimentError::Infeasible("need at least one colour".into()));
    }
    let mut rng = rng_from_seed(derive_seed(seed, 0x636f_6c72, 0));
    let assignments: Vec<(usize, usize, usize)> = match strategy {
        ColouringStrategy::Random => {
            g.edges().map(|(u, v)| (u, v, rng.gen_range(0..r))).collect()
        }
        ColouringStrategy::MajoritySplit => {
            let group: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..r)).collect();
            g.edges().map(|(u, v)| (u, v, (group[u] + group[v]) % r)).collect()
        }
        ColouringStrategy::CliqueHider => {
            let adj = adjacency_bitsets(g);
            let mut colour_adj: Vec<Vec<crate::bitset::Bitset>> =
                vec![vec![crate::bitset::Bitset::new(g.n()); g.n()]; r];
            let mut out = Vec::with_capacity(g.edge_count());
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            // Seeded processing order so ties break differently per run.
            for i in (1..edges.len()).rev() {
                let j = rng.gen_range(0..=i);
                edges.swap(i, j);
            }
            for (u, v) in edges {
                let mut common = adj[u].clone();
                common.intersect_with(&adj[v]);
                let best = (0..r)
                    .min_by_key(|&c| {
                        let mut same = colour_adj[c][u].clone();
                        same.intersect_with(&colour_adj[c][v]);
                        same.intersect_with(&common);
                        (same.count(), c)
                    })
                    .expect("r >= 1");
                colour_adj[best][u].insert(v);
                colour_adj[best][v].insert(u);
                out.push((u, v, best));
            }
            out
        }
    };
    Ok(EdgeColouring::new(g, r, &assignments)?)
}
