//! Seeded G(N,p) sampling and the random-graph typicality properties as
//! testable predicates: neighbourhood and star properties, upper regularity,
//! and rooted extension counting against its expectation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{adjacency_bitsets, Bitset};
use crate::density::{is_d_mu_spencer_bounded, DensityError, Rat, RootedPattern};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("delta must lie in (0, 3/2), got {0}")]
    DeltaOutOfRange(f64),
    #[error("edge probability must lie in [0,1], got {0}")]
    BadProbability(f64),
    #[error("pattern too large for exhaustive extension counting: {0} free vertices")]
    PatternTooLarge(usize),
    #[error("pi must map exactly the root set injectively into the host")]
    BadRootMap,
    #[error("pattern is not ({d}, {mu})-Spencer (density {density})")]
    NotSpencer { d: usize, mu: Rat, density: Rat },
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// Cap on free pattern vertices for exhaustive extension counting.
pub const EXTENSION_FREE_VERTEX_BOUND: usize = 12;

/// A reproducible G(N,p) instance: same spec, same graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self, EnsembleError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EnsembleError::BadProbability(p));
        }
        Ok(EnsembleSpec { n, p, seed })
    }
}

/// Samples G(N,p): each of the N choose 2 edges independently with
/// probability p, in a fixed pair order driven by the seeded generator.
pub fn sample_gnp(spec: &EnsembleSpec) -> Graph {
    let mut rng = rng_from_seed(derive_seed(spec.seed, 0x6e67_7031, 0));
    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in (u + 1)..spec.n {
            if rng.gen_bool(spec.p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(spec.n, &edges).expect("sampled pairs are simple")
}

/// Chernoff bound value exp(-delta^2 mean / 3) for delta in (0, 3/2).
pub fn chernoff_tail(mean: f64, delta: f64) -> Result<f64, EnsembleError> {
    if !(0.0..1.5).contains(&delta) || delta == 0.0 {
        return Err(EnsembleError::DeltaOutOfRange(delta));
    }
    Ok((-delta * delta * mean / 3.0).exp())
}

/// Hypergeometric tail bound 2 exp(-delta^2 |S| l / (3n)).
pub fn hypergeom_tail(
    set_size: usize,
    draw: usize,
    n: usize,
    delta: f64,
) -> Result<f64, EnsembleError> {
    if !(0.0..1.5).contains(&delta) || delta == 0.0 {
        return Err(EnsembleError::DeltaOutOfRange(delta));
    }
    Ok(2.0 * (-delta * delta * (set_size as f64) * (draw as f64) / (3.0 * n as f64)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

/// A witness that failed a property check, with the observed value and the
/// interval it was required to land in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    /// One or more vertex groups, depending on the property.
    pub witness: Vec<Vec<usize>>,
    pub observed: f64,
    pub required: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub violations: Vec<Violation>,
    pub tested: usize,
    pub mode: CheckMode,
}

impl PropertyVerdict {
    fn from_parts(violations: Vec<Violation>, tested: usize, mode: CheckMode) -> Self {
        PropertyVerdict { holds: violations.is_empty(), violations, tested, mode }
    }
}

/// Knobs for the sampled property checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Exhaustive enumeration is used while the candidate count stays below this.
    pub exhaustive_budget: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { exhaustive_budget: 2_000_000, samples: 500, seed: 0 }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Joint neighbourhoods of all k-sets, k <= d, sized against (1 +- eps) p^k N.
pub fn check_neighbourhood_property(
    g: &Graph,
    d: usize,
    eps: f64,
    p: f64,
    config: &CheckConfig,
) -> PropertyVerdict {
    let n = g.n();
    let adj = adjacency_bitsets(g);
    let mut violations = Vec::new();
    let mut tested = 0;
    let mut mode = CheckMode::Exhaustive;
    let mut rng = rng_from_seed(derive_seed(config.seed, 0x6e65_6967, 0));
    for k in 1..=d.min(n) {
        let target = p.powi(k as i32) * n as f64;
        let lo = (1.0 - eps) * target;
        let hi = (1.0 + eps) * target;
        let mut check = |set: &[usize]| {
            let size = joint_neighbourhood_size(&adj, set, n);
            tested += 1;
            if (size as f64) < lo || (size as f64) > hi {
                violations.push(Violation {
                    witness: vec![set.to_vec()],
                    observed: size as f64,
                    required: (lo, hi),
                });
            }
        };
        if binomial(n, k) <= config.exhaustive_budget as u128 {
            let mut set = vec![0usize; k];
            enumerate_k_subsets(n, k, &mut set, 0, 0, &mut check);
        } else {
            mode = CheckMode::Sampled;
            for _ in 0..config.samples {
                let set = sample_distinct(&mut rng, n, k);
                check(&set);
            }
        }
    }
    PropertyVerdict::from_parts(violations, tested, mode)
}

fn joint_neighbourhood_size(adj: &[Bitset], set: &[usize], n: usize) -> usize {
    let mut acc = Bitset::full(n);
    for &x in set {
        acc.intersect_with(&adj[x]);
    }
    acc.count()
}

fn enumerate_k_subsets(
    n: usize,
    k: usize,
    set: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(set);
        return;
    }
    for v in start..n {
        set[depth] = v;
        enumerate_k_subsets(n, k, set, depth + 1, v + 1, f);
    }
}

fn sample_distinct<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut set = Vec::with_capacity(k);
    while set.len() < k {
        let v = rng.gen_range(0..n);
        if !set.contains(&v) {
            set.push(v);
        }
    }
    set.sort_unstable();
    set
}

/// Star property: unions of joint neighbourhoods over families of pairwise
/// disjoint k-sets, families sampled because the range is astronomical.
pub fn check_star_property(
    g: &Graph,
    d: usize,
    eps: f64,
    p: f64,
    config: &CheckConfig,
) -> PropertyVerdict {
    let n = g.n();
    let adj = adjacency_bitsets(g);
    let mut rng = rng_from_seed(derive_seed(config.seed, 0x7374_6172, 0));
    let mut violations = Vec::new();
    let mut tested = 0;
    for _ in 0..config.samples {
        let k = rng.gen_range(1..=d.min(n).max(1));
        let family_cap = (eps * p.powi(-(k as i32))).floor().max(1.0) as usize;
        let family_cap = family_cap.min(n / k).max(1);
        let family_size = rng.gen_range(1..=family_cap);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let family: Vec<Vec<usize>> = pool[..family_size * k]
            .chunks(k)
            .map(|c| {
                let mut c = c.to_vec();
                c.sort_unstable();
                c
            })
            .collect();
        let mut union = Bitset::new(n);
        for b in &family {
            let mut nb = Bitset::full(n);
            for &x in b {
                nb.intersect_with(&adj[x]);
            }
            union.union_with(&nb);
        }
        let observed = union.count() as f64;
        let target = p.powi(k as i32) * n as f64 * family_size as f64;
        let lo = (1.0 - eps) * target;
        let hi = (1.0 + eps) * target;
        tested += 1;
        if observed < lo || observed > hi {
            violations.push(Violation { witness: family, observed, required: (lo, hi) });
        }
    }
    PropertyVerdict::from_parts(violations, tested, CheckMode::Sampled)
}

/// Upper-regularity check over sampled disjoint pairs at or above the
/// threshold size; `check_lower` also enforces the companion lower bound.
pub fn check_upper_regular(
    g: &Graph,
    eta: f64,
    p: f64,
    check_lower: bool,
    config: &CheckConfig,
) -> PropertyVerdict {
    let n = g.n();
    let adj = adjacency_bitsets(g);
    let mut rng = rng_from_seed(derive_seed(config.seed, 0x7570_7267, 0));
    let min_size = ((eta * n as f64).ceil() as usize).max(1);
    let mut violations = Vec::new();
    let mut tested = 0;
    if 2 * min_size > n {
        // No qualifying pair exists; the property holds vacuously.
        return PropertyVerdict::from_parts(violations, 0, CheckMode::Sampled);
    }
    for _ in 0..config.samples {
        let sx = rng.gen_range(min_size..=(n / 2));
        let sy = rng.gen_range(min_size..=(n - sx).min(n / 2).max(min_size));
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let xs = &pool[..sx];
        let ys = &pool[sx..sx + sy];
        let ymask = Bitset::from_slice(n, ys);
        let e: usize = xs.iter().map(|&x| adj[x].intersection_count(&ymask)).sum();
        let base = p * sx as f64 * sy as f64;
        let hi = (1.0 + eta) * base;
        let lo = if check_lower { (1.0 - eta) * base } else { 0.0 };
        tested += 1;
        if (e as f64) > hi || (e as f64) < lo {
            violations.push(Violation {
                witness: vec![xs.to_vec(), ys.to_vec()],
                observed: e as f64,
                required: (lo, hi),
            });
        }
    }
    PropertyVerdict::from_parts(violations, tested, CheckMode::Sampled)
}

/// Exact count of H-extensions of pi in the host: injections of V(H) that
/// agree with pi on the roots and map every edge with at most one root
/// endpoint onto a host edge. Edges inside the root set are ignored.
pub fn count_extensions(
    host: &Graph,
    rp: &RootedPattern,
    pi: &[(usize, usize)],
) -> Result<u64, EnsembleError> {
    let adj = adjacency_bitsets(host);
    count_extensions_with_bitsets(host, &adj, rp, pi)
}

/// As [`count_extensions`] with host adjacency bitsets precomputed, for
/// callers counting many times on the same host.
pub fn count_extensions_with_bitsets(
    host: &Graph,
    adj: &[Bitset],
    rp: &RootedPattern,
    pi: &[(usize, usize)],
) -> Result<u64, EnsembleError> {
    let free = rp.non_roots();
    if free.len() > EXTENSION_FREE_VERTEX_BOUND {
        return Err(EnsembleError::PatternTooLarge(free.len()));
    }
    let mut image = vec![usize::MAX; rp.h.n()];
    let mut used = Bitset::new(host.n());
    {
        let mut seen_roots: Vec<usize> = Vec::new();
        for &(r, v) in pi {
            if !rp.roots.contains(&r) || v >= host.n() || image[r] != usize::MAX || used.contains(v)
            {
                return Err(EnsembleError::BadRootMap);
            }
            image[r] = v;
            used.insert(v);
            seen_roots.push(r);
        }
        if seen_roots.len() != rp.roots.len() {
            return Err(EnsembleError::BadRootMap);
        }
    }

    // Static order: most already-anchored neighbours first, lowest index ties.
    let mut order: Vec<usize> = Vec::with_capacity(free.len());
    {
        let mut placed: Vec<bool> = (0..rp.h.n()).map(|v| image[v] != usize::MAX).collect();
        let mut remaining: Vec<usize> = free.clone();
        while !remaining.is_empty() {
            let (idx, &best) = remaining
                .iter()
                .enumerate()
                .max_by_key(|(_, &u)| {
                    let anchored = rp.h.neighbours(u).iter().filter(|&&w| placed[w]).count();
                    (anchored, std::cmp::Reverse(u))
                })
                .expect("remaining nonempty");
            order.push(best);
            placed[best] = true;
            remaining.remove(idx);
        }
    }

    fn recurse(
        h: &Graph,
        adj: &[Bitset],
        host_n: usize,
        order: &[usize],
        depth: usize,
        image: &mut Vec<usize>,
        used: &mut Bitset,
    ) -> u64 {
        let u = order[depth];
        let mut candidates = Bitset::full(host_n);
        for &w in h.neighbours(u) {
            if image[w] != usize::MAX {
                candidates.intersect_with(&adj[image[w]]);
            }
        }
        candidates.subtract(used);
        if depth + 1 == order.len() {
            return candidates.count() as u64;
        }
        let mut total = 0;
        for v in candidates.iter().collect::<Vec<_>>() {
            image[u] = v;
            used.insert(v);
            total += recurse(h, adj, host_n, order, depth + 1, image, used);
            used.remove(v);
            image[u] = usize::MAX;
        }
        total
    }

    if order.is_empty() {
        return Ok(1);
    }
    Ok(recurse(&rp.h, adj, host.n(), &order, 0, &mut image, &mut used))
}

/// The first-moment prediction N^{|V minus R|} p^{e(V minus R) + e(V minus R, R)}.
pub fn expected_extensions(rp: &RootedPattern, n: usize, p: f64) -> f64 {
    let free = rp.non_roots();
    let e_free = rp.h.edges_within(&free);
    let e_cross = rp.h.edges_between(&free, &rp.roots);
    (n as f64).powi(free.len() as i32) * p.powi((e_free + e_cross) as i32)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub trials: usize,
    pub in_window: usize,
    pub in_window_fraction: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub expectation: f64,
    pub ratios: Vec<f64>,
}

/// Samples uniform root injections into a seeded G(N,p) and reports how the
/// exact extension counts sit against the expectation. When `spencer` is
/// given, the pattern is first verified to be (D, mu)-Spencer.
pub fn concentration_experiment(
    rp: &RootedPattern,
    spec: &EnsembleSpec,
    eps: f64,
    trials: usize,
    spencer: Option<(usize, Rat)>,
) -> Result<ConcentrationReport, EnsembleError> {
    if let Some((d, mu)) = spencer {
        if !rp.roots.is_empty() && rp.roots.len() < rp.h.n() {
            let check = is_d_mu_spencer_bounded(rp, d, mu, rp.h.n())?;
            if !check.holds {
                return Err(EnsembleError::NotSpencer { d, mu, density: check.density });
            }
        }
    }
    let host = sample_gnp(spec);
    let adj = adjacency_bitsets(&host);
    let expectation = expected_extensions(rp, spec.n, spec.p);
    let mut ratios = Vec::with_capacity(trials);
    let mut in_window = 0;
    for t in 0..trials {
        let mut rng = rng_from_seed(derive_seed(spec.seed, 0x7069_0000, t as u64));
        let targets = sample_distinct(&mut rng, spec.n, rp.roots.len());
        let pi: Vec<(usize, usize)> =
            rp.roots.iter().copied().zip(targets.iter().copied()).collect();
        let count = count_extensions_with_bitsets(&host, &adj, rp, &pi)?;
        let ratio = count as f64 / expectation;
        if (ratio - 1.0).abs() <= eps {
            in_window += 1;
        }
        ratios.push(ratio);
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConcentrationReport {
        trials,
        in_window,
        in_window_fraction: if trials == 0 { 1.0 } else { in_window as f64 / trials as f64 },
        min_ratio,
        max_ratio,
        expectation,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        let empty = sample_gnp(&EnsembleSpec::new(8, 0.0, 1).unwrap());
        assert_eq!(empty.edge_count(), 0);
        let full = sample_gnp(&EnsembleSpec::new(8, 1.0, 1).unwrap());
        assert_eq!(full.edge_count(), 28);
    }

    #[test]
    fn gnp_deterministic_per_seed() {
        let spec = EnsembleSpec::new(60, 0.2, 42).unwrap();
        let a = sample_gnp(&spec);
        let b = sample_gnp(&spec);
        assert_eq!(a, b);
        let c = sample_gnp(&EnsembleSpec::new(60, 0.2, 43).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        // Chernoff sizing: deviations beyond 5% of p * C(N,2) should be rare.
        let n = 1000;
        let p = 0.1;
        let mean = p * (n * (n - 1) / 2) as f64;
        let mut within = 0;
        for seed in 0..20 {
            let g = sample_gnp(&EnsembleSpec::new(n, p, seed).unwrap());
            if ((g.edge_count() as f64) - mean).abs() <= 0.05 * mean {
                within += 1;
            }
        }
        assert!(within >= 19, "only {within}/20 seeds within 5%");
    }

    #[test]
    fn tail_values() {
        let t = chernoff_tail(300.0, 0.1).unwrap();
        assert!((t - (-1.0f64).exp()).abs() < 1e-12);
        assert!(chernoff_tail(10.0, 0.0).is_err());
        assert!(chernoff_tail(10.0, 1.5).is_err());
        // Tiny delta drives the bound towards 1.
        assert!(chernoff_tail(10.0, 1e-9).unwrap() > 0.999_999);
        // Hypergeometric with draw = n reduces to 2 exp(-delta^2 |S| / 3).
        let h = hypergeom_tail(30, 50, 50, 0.5).unwrap();
        assert!((h - 2.0 * (-0.25 * 30.0 / 3.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn neighbourhood_property_extremes() {
        let n = 30;
        let full = Graph::complete(n);
        // |N(x)| = N-1, inside (1 +- eps) N once eps >= 1/N.
        let verdict = check_neighbourhood_property(&full, 1, 0.05, 1.0, &CheckConfig::default());
        assert!(verdict.holds);
        assert_eq!(verdict.tested, n);

        let empty = Graph::empty(n);
        let verdict = check_neighbourhood_property(&empty, 1, 0.9, 0.5, &CheckConfig::default());
        assert!(!verdict.holds);
        assert!(!verdict.violations.is_empty());
    }

    #[test]
    fn star_reduces_to_neighbourhood_for_single_sets() {
        // On K_N with p = 1 and k = 1 every family must land near N * |B|.
        let g = Graph::complete(40);
        let verdict = check_star_property(&g, 1, 0.2, 1.0, &CheckConfig::default());
        assert!(verdict.holds, "violations: {:?}", verdict.violations.first());
    }

    #[test]
    fn upper_regular_extremes() {
        let empty = Graph::empty(40);
        let verdict = check_upper_regular(&empty, 0.1, 0.3, false, &CheckConfig::default());
        assert!(verdict.holds);

        let full = Graph::complete(40);
        let verdict = check_upper_regular(&full, 0.2, 0.5, false, &CheckConfig::default());
        assert!(!verdict.holds);
    }

    #[test]
    fn extension_count_rooted_edge() {
        // Single edge rooted at one endpoint: count = deg of the image.
        let host = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let pattern = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let rp = RootedPattern::new(pattern, vec![0]).unwrap();
        assert_eq!(count_extensions(&host, &rp, &[(0, 0)]).unwrap(), 3);
        assert_eq!(count_extensions(&host, &rp, &[(0, 4)]).unwrap(), 1);
    }

    #[test]
    fn extension_count_triangle_two_roots() {
        // Triangle with two roots mapped to u, v counts common neighbours,
        // whether or not uv is a host edge.
        let host = Graph::from_edges(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4)]).unwrap();
        let pattern = Graph::complete(3);
        let rp = RootedPattern::new(pattern, vec![0, 1]).unwrap();
        assert!(!host.has_edge(0, 1));
        assert_eq!(count_extensions(&host, &rp, &[(0, 0), (1, 1)]).unwrap(), 2);
    }

    #[test]
    fn extension_count_all_roots() {
        let pattern = Graph::complete(3);
        let rp = RootedPattern::new(pattern, vec![0, 1, 2]).unwrap();
        let host = Graph::empty(4);
        // Edges inside R are ignored, so the count is exactly 1.
        assert_eq!(count_extensions(&host, &rp, &[(0, 0), (1, 1), (2, 2)]).unwrap(), 1);
        assert_eq!(expected_extensions(&rp, 4, 0.3), 1.0);
    }

    #[test]
    fn expected_extensions_isolated_vertex_multiplies_by_n() {
        let pattern = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let rp_base =
            RootedPattern::new(Graph::from_edges(2, &[(0, 1)]).unwrap(), vec![0]).unwrap();
        let rp_iso = RootedPattern::new(pattern, vec![0]).unwrap();
        let n = 100;
        let p = 0.2;
        let base = expected_extensions(&rp_base, n, p);
        let with_iso = expected_extensions(&rp_iso, n, p);
        assert!((with_iso / base - n as f64).abs() < 1e-9);
    }

    #[test]
    fn bad_pi_rejected() {
        let rp = RootedPattern::new(Graph::complete(3), vec![0, 1]).unwrap();
        let host = Graph::complete(4);
        assert!(matches!(
            count_extensions(&host, &rp, &[(0, 0)]),
            Err(EnsembleError::BadRootMap)
        ));
        assert!(matches!(
            count_extensions(&host, &rp, &[(0, 0), (1, 0)]),
            Err(EnsembleError::BadRootMap)
        ));
    }

    #[test]
    fn concentration_all_roots_ratio_one() {
        let rp = RootedPattern::new(Graph::complete(3), vec![0, 1, 2]).unwrap();
        let spec = EnsembleSpec::new(50, 0.5, 9).unwrap();
        let report = concentration_experiment(&rp, &spec, 0.01, 10, None).unwrap();
        assert_eq!(report.in_window, 10);
        assert_eq!(report.min_ratio, 1.0);
        assert_eq!(report.max_ratio, 1.0);
    }
}
