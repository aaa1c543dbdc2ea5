//! Seeded target-graph generators for the tested graph classes, with the
//! class membership verified after generation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::graph::{degeneracy_order, Graph, OrderedGraph};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum TargetClass {
    /// Random member of the degeneracy-and-degree bounded class: sequential
    /// insertion where each new vertex picks at most D earlier neighbours
    /// subject to the degree cap.
    Degenerate { degeneracy: usize, max_degree: usize, n: usize },
    /// Random graph with a degree cap only.
    MaxDegree { max_degree: usize, n: usize },
    /// Random regular graph by the pairing model.
    Regular { degree: usize, n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    /// Disjoint union of other classes.
    Union { parts: Vec<TargetClass> },
}

/// Generates a seeded member of the class with its degeneracy order.
pub fn generate_target(class: &TargetClass, seed: u64) -> Result<OrderedGraph, ExperimentError> {
    let graph = generate_graph(class, seed)?;
    let (og, degen) = degeneracy_order(&graph);
    if let TargetClass::Degenerate { degeneracy, max_degree, .. } = class {
        if degen > *degeneracy {
            return Err(ExperimentError::Infeasible(format!(
                "generated degeneracy {degen} above the requested {degeneracy}"
            )));
        }
        if og.graph().max_degree() > *max_degree {
            return Err(ExperimentError::Infeasible("degree cap violated".into()));
        }
    }
    Ok(og)
}

fn generate_graph(class: &TargetClass, seed: u64) -> Result<Graph, ExperimentError> {
    match class {
        TargetClass::Degenerate { degeneracy, max_degree, n } => {
            if degeneracy > max_degree {
                return Err(ExperimentError::Infeasible("need D <= Delta".into()));
            }
            let mut rng = rng_from_seed(derive_seed(seed, 0x7467_6465, 0));
            let mut edges = Vec::new();
            let mut degree = vec![0usize; *n];
            for t in 1..*n {
                let cap = (*degeneracy).min(t);
                let want = rng.gen_range(0..=cap);
                let mut earlier: Vec<usize> =
                    (0..t).filter(|&u| degree[u] < *max_degree).collect();
                earlier.shuffle(&mut rng);
                for &u in earlier.iter().take(want) {
                    if degree[t] >= max_degree.saturating_sub(*degeneracy).max(*degeneracy) {
                        break;
                    }
                    edges.push((u, t));
                    degree[u] += 1;
                    degree[t] += 1;
                }
            }
            Ok(Graph::from_edges(*n, &edges)?)
        }
        TargetClass::MaxDegree { max_degree, n } => {
            let mut rng = rng_from_seed(derive_seed(seed, 0x7467_6d64, 0));
            let mut edges = Vec::new();
            let mut degree = vec![0usize; *n];
            let attempts = 3 * n * max_degree;
            for _ in 0..attempts {
                let u = rng.gen_range(0..*n);
                let v = rng.gen_range(0..*n);
                if u == v || degree[u] >= *max_degree || degree[v] >= *max_degree {
                    continue;
                }
                let e = (u.min(v), u.max(v));
                if !edges.contains(&e) {
                    edges.push(e);
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
            Ok(Graph::from_edges(*n, &edges)?)
        }
        TargetClass::Regular { degree, n } => random_regular(*degree, *n, seed),
        TargetClass::Path { n } => Ok(Graph::path(*n)),
        TargetClass::Cycle { n } => Ok(Graph::cycle(*n)),
        TargetClass::Complete { n } => Ok(Graph::complete(*n)),
        TargetClass::Union { parts } => {
            let graphs: Vec<Graph> = parts
                .iter()
                .enumerate()
                .map(|(i, part)| generate_graph(part, derive_seed(seed, 0x756e_696f, i as u64)))
                .collect::<Result<_, _>>()?;
            Ok(disjoint_union(&graphs))
        }
    }
}

/// Random regular graph via the pairing model, resampling on collisions.
pub fn random_regular(degree: usize, n: usize, seed: u64) -> Result<Graph, ExperimentError> {
    if degree >= n || (degree * n) % 2 != 0 {
        return Err(ExperimentError::Infeasible(format!(
            "no {degree}-regular graph on {n} vertices"
        )));
    }
    let mut rng = rng_from_seed(derive_seed(seed, 0x7265_6775, 0));
    'outer: for _ in 0..5000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(degree * n / 2);
        let mut seen = std::collections::HashSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                continue 'outer;
            }
            edges.push((u, v));
        }
        return Ok(Graph::from_edges(n, &edges)?);
    }
    Err(ExperimentError::Infeasible("pairing model kept colliding".into()))
}

/// Disjoint union with shifted labels.
pub fn disjoint_union(graphs: &[Graph]) -> Graph {
    let total: usize = graphs.iter().map(Graph::n).sum();
    let mut edges = Vec::new();
    let mut offset = 0;
    for g in graphs {
        for (u, v) in g.edges() {
            edges.push((u + offset, v + offset));
        }
        offset += g.n();
    }
    Graph::from_edges(total, &edges).expect("shifted labels stay valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_class_verified() {
        let class = TargetClass::Degenerate { degeneracy: 2, max_degree: 4, n: 50 };
        for seed in 0..5 {
            let og = generate_target(&class, seed).unwrap();
            assert!(og.is_degeneracy_order(2));
            assert!(og.graph().max_degree() <= 4);
        }
    }

    #[test]
    fn degenerate_one_is_forest_like() {
        let class = TargetClass::Degenerate { degeneracy: 1, max_degree: 2, n: 30 };
        let og = generate_target(&class, 3).unwrap();
        // 1-degenerate with degree cap 2: disjoint paths, no cycles.
        assert!(og.is_degeneracy_order(1));
        assert!(crate::graph::shortest_cycle(og.graph()).is_none());
    }

    #[test]
    fn regular_generator() {
        let g = random_regular(3, 20, 7).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert!(random_regular(3, 21, 7).is_err());
    }

    #[test]
    fn union_shifts_labels() {
        let class = TargetClass::Union {
            parts: vec![
                TargetClass::Complete { n: 4 },
                TargetClass::Regular { degree: 3, n: 20 },
                TargetClass::Path { n: 8 },
            ],
        };
        let og = generate_target(&class, 1).unwrap();
        assert_eq!(og.n(), 32);
        let comps = og.graph().connected_components();
        assert_eq!(comps.len(), 3);
    }

    #[test]
    fn generation_is_deterministic() {
        let class = TargetClass::Degenerate { degeneracy: 2, max_degree: 4, n: 40 };
        let a = generate_target(&class, 11).unwrap();
        let b = generate_target(&class, 11).unwrap();
        assert_eq!(a.graph(), b.graph());
    }
}
