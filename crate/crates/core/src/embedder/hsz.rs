//! Equitable distance partitions: an equitable colouring of the ell-th power
//! graph by greedy assignment plus rebalancing swaps, with a verification
//! pass. Heuristic construction, verified output.

use super::EmbedderError;
use crate::graph::Graph;
use crate::regularity::Partition;

/// The class count 2 Delta^ell used when none is supplied.
pub fn default_class_count(max_degree: usize, ell: usize) -> usize {
    2 * max_degree.pow(ell as u32)
}

/// Partitions V(F) into `classes` sets of sizes differing by at most one
/// such that vertices sharing a class have F-distance greater than `ell`.
pub fn hajnal_szemeredi_partition(
    f: &Graph,
    ell: usize,
    classes: usize,
    swap_budget: usize,
) -> Result<Partition, EmbedderError> {
    if classes == 0 {
        return Err(EmbedderError::BadConstants("need at least one class".into()));
    }
    let power = f.power(ell)?;
    let n = f.n();
    let mut class_of = vec![usize::MAX; n];
    let mut sizes = vec![0usize; classes];

    // Greedy: vertices by decreasing power degree, into the smallest
    // compatible class.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(power.degree(v)), v));
    for &v in &order {
        let mut blocked = vec![false; classes];
        for &w in power.neighbours(v) {
            if class_of[w] != usize::MAX {
                blocked[class_of[w]] = true;
            }
        }
        let target = (0..classes)
            .filter(|&c| !blocked[c])
            .min_by_key(|&c| (sizes[c], c));
        match target {
            Some(c) => {
                class_of[v] = c;
                sizes[c] += 1;
            }
            None => {
                return Err(EmbedderError::RebalanceBudget(format!(
                    "vertex {v} has power-neighbours in all {classes} classes"
                )))
            }
        }
    }

    // Rebalance: single moves first, then one-step relays.
    let mut budget = swap_budget;
    loop {
        let max_c = (0..classes).max_by_key(|&c| (sizes[c], c)).unwrap();
        let min_c = (0..classes).min_by_key(|&c| (sizes[c], c)).unwrap();
        if sizes[max_c] <= sizes[min_c] + 1 {
            break;
        }
        if budget == 0 {
            return Err(EmbedderError::RebalanceBudget(format!(
                "sizes still spread {:?} with no budget left",
                sizes
            )));
        }
        budget -= 1;
        let movable = |v: usize, to: usize, class_of: &[usize]| {
            power.neighbours(v).iter().all(|&w| class_of[w] != to)
        };
        let in_class =
            |c: usize, class_of: &[usize]| (0..n).filter(|&v| class_of[v] == c).collect::<Vec<_>>();
        let mut moved = false;
        for v in in_class(max_c, &class_of) {
            if movable(v, min_c, &class_of) {
                class_of[v] = min_c;
                sizes[max_c] -= 1;
                sizes[min_c] += 1;
                moved = true;
                break;
            }
        }
        if moved {
            continue;
        }
        // Relay: v from max_c to some middle class, then u from there to min_c.
        'relay: for mid in 0..classes {
            if mid == max_c || mid == min_c {
                continue;
            }
            for v in in_class(max_c, &class_of) {
                if !movable(v, mid, &class_of) {
                    continue;
                }
                for u in in_class(mid, &class_of) {
                    if u != v && movable(u, min_c, &class_of) {
                        class_of[v] = mid;
                        class_of[u] = min_c;
                        sizes[max_c] -= 1;
                        sizes[min_c] += 1;
                        moved = true;
                        break 'relay;
                    }
                }
            }
        }
        if !moved {
            return Err(EmbedderError::RebalanceBudget(format!(
                "no legal move between classes (sizes {:?})",
                sizes
            )));
        }
    }

    let mut blocks = vec![Vec::new(); classes];
    for v in 0..n {
        blocks[class_of[v]].push(v);
    }
    let partition =
        Partition::new(n, blocks).map_err(|e| EmbedderError::BadConstants(e.to_string()))?;
    verify_distance_partition(f, ell, &partition)?;
    Ok(partition)
}

/// The verification pass: equitability and pairwise distances above ell
/// within every class.
pub fn verify_distance_partition(
    f: &Graph,
    ell: usize,
    partition: &Partition,
) -> Result<(), EmbedderError> {
    if !partition.is_equitable() {
        return Err(EmbedderError::PartitionVerification("classes are not equitable".into()));
    }
    for block in partition.blocks() {
        for (idx, &x) in block.iter().enumerate() {
            let dist = f.distances_from(x, Some(ell));
            for &y in &block[idx + 1..] {
                if let crate::graph::Dist::Finite(d) = dist[y] {
                    if d <= ell {
                        return Err(EmbedderError::PartitionVerification(format!(
                            "vertices {x} and {y} share a class at distance {d} <= {ell}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_singletons() {
        let g = Graph::cycle(4);
        let p = hajnal_szemeredi_partition(&g, 1, 4, 100).unwrap();
        assert!(p.blocks().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn triangle_into_four_classes() {
        let g = Graph::complete(3);
        let p = hajnal_szemeredi_partition(&g, 1, 4, 100).unwrap();
        let mut sizes: Vec<usize> = p.blocks().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![0, 1, 1, 1]);
    }

    #[test]
    fn random_bounded_degree_verifies() {
        // Delta <= 3 graphs, ell = 2, default class count 2 * 3^2 = 18.
        for seed in 0..5u64 {
            let g = random_max_degree_graph(60, 3, seed);
            let classes = default_class_count(3, 2);
            let p = hajnal_szemeredi_partition(&g, 2, classes, 10_000).unwrap();
            verify_distance_partition(&g, 2, &p).unwrap();
        }
    }

    fn random_max_degree_graph(n: usize, delta: usize, seed: u64) -> Graph {
        let mut rng = crate::rng::rng_from_seed(crate::rng::derive_seed(seed, 0x6873_7a74, 0));
        let mut edges = Vec::new();
        let mut degree = vec![0usize; n];
        for _ in 0..(2 * n) {
            let u = rand::Rng::gen_range(&mut rng, 0..n);
            let v = rand::Rng::gen_range(&mut rng, 0..n);
            if u != v && degree[u] < delta && degree[v] < delta && !edges.contains(&(u.min(v), u.max(v)))
            {
                edges.push((u.min(v), u.max(v)));
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }
}
