//! p-density of vertex-set pairs and (eps, d, p)-regularity testing, either
//! exhaustively over all qualifying sub-pairs or on sampled sub-pairs.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{big_int_rat, BigRat, RegularityError};
use crate::bitset::{adjacency_bitsets, Bitset};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssessMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct PairAssessment {
    pub density: BigRat,
    pub regular: bool,
    pub epsilon: BigRat,
    /// A sub-pair whose density leaves density +- epsilon, when irregular.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub mode: AssessMode,
    pub tested: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct PairConfig {
    /// Exhaustive testing allowed while both sides are at most this large.
    pub exhaustive_bound: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig { exhaustive_bound: 16, samples: 200, seed: 0 }
    }
}

/// e(U,V) / (p |U| |V|) for disjoint nonempty sets.
pub fn p_density(
    g: &Graph,
    us: &[usize],
    vs: &[usize],
    p: &BigRat,
) -> Result<BigRat, RegularityError> {
    if p.is_zero() {
        return Err(RegularityError::ZeroP);
    }
    if us.is_empty() || vs.is_empty() || !disjoint(us, vs) {
        return Err(RegularityError::BadPair);
    }
    let e = g.edges_between(us, vs);
    Ok(big_int_rat(e) / (p * big_int_rat(us.len()) * big_int_rat(vs.len())))
}

fn disjoint(us: &[usize], vs: &[usize]) -> bool {
    let vset: std::collections::HashSet<usize> = vs.iter().copied().collect();
    us.iter().all(|u| !vset.contains(u))
}

pub fn assess_pair(
    g: &Graph,
    us: &[usize],
    vs: &[usize],
    eps: &BigRat,
    p: &BigRat,
    mode: AssessMode,
    config: &PairConfig,
) -> Result<PairAssessment, RegularityError> {
    let adj = adjacency_bitsets(g);
    assess_pair_with_bitsets(g.n(), &adj, us, vs, eps, p, mode, config)
}

/// As [`assess_pair`], with host adjacency bitsets supplied by the caller.
#[allow(clippy::too_many_arguments)]
pub fn assess_pair_with_bitsets(
    n: usize,
    adj: &[Bitset],
    us: &[usize],
    vs: &[usize],
    eps: &BigRat,
    p: &BigRat,
    mode: AssessMode,
    config: &PairConfig,
) -> Result<PairAssessment, RegularityError> {
    if p.is_zero() {
        return Err(RegularityError::ZeroP);
    }
    if us.is_empty() || vs.is_empty() {
        // Vacuously regular: there are no qualifying sub-pairs.
        return Ok(PairAssessment {
            density: BigRat::zero(),
            regular: true,
            epsilon: eps.clone(),
            witness: None,
            mode,
            tested: 0,
        });
    }
    if !disjoint(us, vs) {
        return Err(RegularityError::BadPair);
    }
    match mode {
        AssessMode::Exhaustive => {
            if us.len() > config.exhaustive_bound || vs.len() > config.exhaustive_bound {
                return Err(RegularityError::ExhaustiveTooLarge(
                    us.len(),
                    vs.len(),
                    config.exhaustive_bound,
                ));
            }
            assess_exhaustive(adj, us, vs, eps, p)
        }
        AssessMode::Sampled => Ok(assess_sampled(n, adj, us, vs, eps, p, config)),
    }
}

fn to_i128(r: &BigRat) -> Result<(i128, i128), RegularityError> {
    let num: i128 = r
        .numer()
        .try_into()
        .map_err(|_| RegularityError::BadRational(r.to_string()))?;
    let den: i128 = r
        .denom()
        .try_into()
        .map_err(|_| RegularityError::BadRational(r.to_string()))?;
    Ok((num, den))
}

/// Exact verdict over every sub-pair (U', V') with |U'| >= eps |U| and
/// |V'| >= eps |V|, enumerated in Gray-code order with incremental edge
/// counts and integer cross-multiplied comparisons.
fn assess_exhaustive(
    adj: &[Bitset],
    us: &[usize],
    vs: &[usize],
    eps: &BigRat,
    p: &BigRat,
) -> Result<PairAssessment, RegularityError> {
    let (pn, pd) = to_i128(p)?;
    let (en, ed) = to_i128(eps)?;
    let su_full = us.len();
    let sv_full = vs.len();
    // Cross adjacency: bit j of cross[i] says us[i] ~ vs[j].
    let cross: Vec<u32> = us
        .iter()
        .map(|&u| {
            vs.iter()
                .enumerate()
                .fold(0u32, |m, (j, &v)| if adj[u].contains(v) { m | (1 << j) } else { m })
        })
        .collect();
    let e_full: i128 = cross.iter().map(|m| m.count_ones() as i128).sum();
    let density = big_int_rat(e_full as usize)
        / (p * big_int_rat(su_full) * big_int_rat(sv_full));

    let min_u = |su: i128| su * ed >= en * su_full as i128;
    let min_v = |sv: i128| sv * ed >= en * sv_full as i128;

    let mut rowdeg = vec![0i128; sv_full];
    let mut tested = 0usize;
    let mut witness = None;
    let mut u_mask: u32 = 0;
    'outer: for gu in 1u64..(1u64 << su_full) {
        let next = (gu ^ (gu >> 1)) as u32;
        let toggled = (u_mask ^ next).trailing_zeros() as usize;
        let added = next & (1 << toggled) != 0;
        for j in 0..sv_full {
            if cross[toggled] & (1 << j) != 0 {
                rowdeg[j] += if added { 1 } else { -1 };
            }
        }
        u_mask = next;
        let su = u_mask.count_ones() as i128;
        if !min_u(su) {
            continue;
        }
        // Inner Gray sweep over V'.
        let mut e: i128 = 0;
        let mut v_mask: u32 = 0;
        for gv in 1u64..(1u64 << sv_full) {
            let nextv = (gv ^ (gv >> 1)) as u32;
            let j = (v_mask ^ nextv).trailing_zeros() as usize;
            if nextv & (1 << j) != 0 {
                e += rowdeg[j];
            } else {
                e -= rowdeg[j];
            }
            v_mask = nextv;
            let sv = v_mask.count_ones() as i128;
            if !min_v(sv) {
                continue;
            }
            tested += 1;
            // | e/(p su sv) - E/(p SU SV) | > eps, cross-multiplied.
            let lhs = (e * su_full as i128 * sv_full as i128 - e_full * su * sv).abs() * pd * ed;
            let rhs = en * pn * su * sv * su_full as i128 * sv_full as i128;
            if lhs > rhs {
                let wu: Vec<usize> = (0..su_full).filter(|i| u_mask & (1 << i) != 0).map(|i| us[i]).collect();
                let wv: Vec<usize> = (0..sv_full).filter(|j| v_mask & (1 << j) != 0).map(|j| vs[j]).collect();
                witness = Some((wu, wv));
                break 'outer;
            }
        }
    }
    Ok(PairAssessment {
        density,
        regular: witness.is_none(),
        epsilon: eps.clone(),
        witness,
        mode: AssessMode::Exhaustive,
        tested,
    })
}

/// Heuristic verdict over sampled qualifying sub-pairs; exact rational
/// comparisons per sample.
fn assess_sampled(
    n: usize,
    adj: &[Bitset],
    us: &[usize],
    vs: &[usize],
    eps: &BigRat,
    p: &BigRat,
    config: &PairConfig,
) -> PairAssessment {
    let mut rng = rng_from_seed(derive_seed(config.seed, 0x7061_6972, 0));
    let e_full = pair_edges(adj, us, vs, n);
    let density = big_int_rat(e_full) / (p * big_int_rat(us.len()) * big_int_rat(vs.len()));
    let min_u = min_qualifying(us.len(), eps);
    let min_v = min_qualifying(vs.len(), eps);
    let mut tested = 0;
    let mut witness = None;
    let mut us_pool = us.to_vec();
    let mut vs_pool = vs.to_vec();
    for _ in 0..config.samples {
        let su = rng.gen_range(min_u..=us.len());
        let sv = rng.gen_range(min_v..=vs.len());
        us_pool.shuffle(&mut rng);
        vs_pool.shuffle(&mut rng);
        let u_sub = &us_pool[..su];
        let v_sub = &vs_pool[..sv];
        let e = pair_edges(adj, u_sub, v_sub, n);
        tested += 1;
        let sub_density = big_int_rat(e) / (p * big_int_rat(su) * big_int_rat(sv));
        if (sub_density - &density).abs() > *eps {
            let mut wu = u_sub.to_vec();
            let mut wv = v_sub.to_vec();
            wu.sort_unstable();
            wv.sort_unstable();
            witness = Some((wu, wv));
            break;
        }
    }
    PairAssessment {
        density,
        regular: witness.is_none(),
        epsilon: eps.clone(),
        witness,
        mode: AssessMode::Sampled,
        tested,
    }
}

fn min_qualifying(size: usize, eps: &BigRat) -> usize {
    // Smallest s with s >= eps * size.
    let bound = eps * big_int_rat(size);
    let mut s = (super::rat_to_f64(&bound)).ceil() as usize;
    while big_int_rat(s) < bound {
        s += 1;
    }
    s.clamp(1, size)
}

pub(super) fn pair_edges(adj: &[Bitset], us: &[usize], vs: &[usize], n: usize) -> usize {
    let vmask = Bitset::from_slice(n, vs);
    us.iter().map(|&u| adj[u].intersection_count(&vmask)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::big_rat;
    use num_traits::One;

    #[test]
    fn density_basics() {
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(6, &edges).unwrap();
        let d = p_density(&g, &[0, 1, 2], &[3, 4, 5], &BigRat::one()).unwrap();
        assert_eq!(d, BigRat::one());
        assert!(p_density(&g, &[], &[3], &BigRat::one()).is_err());
        assert!(p_density(&g, &[0], &[0, 3], &BigRat::one()).is_err());
        assert!(p_density(&g, &[0], &[3], &BigRat::zero()).is_err());
    }

    #[test]
    fn complete_bipartite_regular() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in 6..12 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(12, &edges).unwrap();
        let us: Vec<usize> = (0..6).collect();
        let vs: Vec<usize> = (6..12).collect();
        let a = assess_pair(
            &g,
            &us,
            &vs,
            &big_rat(1, 4),
            &BigRat::one(),
            AssessMode::Exhaustive,
            &PairConfig::default(),
        )
        .unwrap();
        assert!(a.regular);
        assert_eq!(a.density, BigRat::one());
    }

    #[test]
    fn empty_pair_regular_zero() {
        let g = Graph::empty(4);
        let a = assess_pair(
            &g,
            &[],
            &[1],
            &big_rat(1, 4),
            &BigRat::one(),
            AssessMode::Exhaustive,
            &PairConfig::default(),
        )
        .unwrap();
        assert!(a.regular);
        assert_eq!(a.density, BigRat::zero());
    }

    #[test]
    fn half_graph_irregular() {
        // u_i ~ v_j iff i <= j on 12 + 12 vertices.
        let mut edges = Vec::new();
        for i in 0..12 {
            for j in i..12 {
                edges.push((i, 12 + j));
            }
        }
        let g = Graph::from_edges(24, &edges).unwrap();
        let us: Vec<usize> = (0..12).collect();
        let vs: Vec<usize> = (12..24).collect();
        let a = assess_pair(
            &g,
            &us,
            &vs,
            &big_rat(1, 4),
            &BigRat::one(),
            AssessMode::Exhaustive,
            &PairConfig::default(),
        )
        .unwrap();
        assert!(!a.regular);
        let (wu, wv) = a.witness.expect("witness on irregular pair");
        // The witness re-evaluates outside density +- eps.
        let e = g.edges_between(&wu, &wv);
        let sub = big_int_rat(e) / (big_int_rat(wu.len()) * big_int_rat(wv.len()));
        assert!((sub - a.density).abs() > big_rat(1, 4));
    }

    #[test]
    fn exhaustive_matches_direct_enumeration() {
        // Independent re-check: direct subset loops, no Gray code.
        let g = Graph::from_edges(
            10,
            &[(0, 5), (0, 6), (1, 6), (1, 7), (2, 7), (3, 8), (4, 9), (2, 9), (0, 9)],
        )
        .unwrap();
        let us: Vec<usize> = (0..5).collect();
        let vs: Vec<usize> = (5..10).collect();
        let eps = big_rat(3, 10);
        let p = big_rat(1, 2);
        let a = assess_pair(&g, &us, &vs, &eps, &p, AssessMode::Exhaustive, &PairConfig::default())
            .unwrap();

        let mut violated = false;
        for um in 1u32..(1 << 5) {
            for vm in 1u32..(1 << 5) {
                let usub: Vec<usize> =
                    (0..5).filter(|i| um & (1 << i) != 0).map(|i| us[i]).collect();
                let vsub: Vec<usize> =
                    (0..5).filter(|j| vm & (1 << j) != 0).map(|j| vs[j]).collect();
                if big_int_rat(usub.len()) < &eps * big_int_rat(us.len())
                    || big_int_rat(vsub.len()) < &eps * big_int_rat(vs.len())
                {
                    continue;
                }
                let e = g.edges_between(&usub, &vsub);
                let sub = big_int_rat(e)
                    / (&p * big_int_rat(usub.len()) * big_int_rat(vsub.len()));
                if (sub - &a.density).abs() > eps {
                    violated = true;
                }
            }
        }
        assert_eq!(a.regular, !violated);
    }

    #[test]
    fn exhaustive_bound_enforced() {
        let g = Graph::empty(40);
        let us: Vec<usize> = (0..20).collect();
        let vs: Vec<usize> = (20..40).collect();
        let out = assess_pair(
            &g,
            &us,
            &vs,
            &big_rat(1, 4),
            &BigRat::one(),
            AssessMode::Exhaustive,
            &PairConfig::default(),
        );
        assert!(matches!(out, Err(RegularityError::ExhaustiveTooLarge(..))));
    }
}
