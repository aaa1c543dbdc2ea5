//! The energy function driving the refinement loop, and the defect
//! Cauchy-Schwarz identity it rests on. All exact rationals.

use num_traits::Zero;

use super::{big_int_rat, BigRat, Partition, RegularityError};
use crate::bitset::adjacency_bitsets;
use crate::graph::Graph;

/// Energy of a partition against edge-disjoint colour graphs:
/// sum over ordered block pairs U != V of |U||V| sum_i d_p(U,V;G_i)^2 / n^2.
pub fn energy(partition: &Partition, graphs: &[Graph], p: &BigRat) -> Result<BigRat, RegularityError> {
    if p.is_zero() {
        return Err(RegularityError::ZeroP);
    }
    let n = partition.n();
    let adj: Vec<_> = graphs.iter().map(adjacency_bitsets).collect();
    let blocks = partition.blocks();
    let mut total = BigRat::zero();
    let nn = big_int_rat(n) * big_int_rat(n);
    for (i, u) in blocks.iter().enumerate() {
        for (j, v) in blocks.iter().enumerate() {
            if i == j || u.is_empty() || v.is_empty() {
                continue;
            }
            let sizes = big_int_rat(u.len()) * big_int_rat(v.len());
            let mut dsq_sum = BigRat::zero();
            for rows in &adj {
                let e = super::pairs::pair_edges(rows, u, v, n);
                let d = big_int_rat(e) / (p * &sizes);
                dsq_sum += &d * &d;
            }
            total += sizes * dsq_sum / &nn;
        }
    }
    Ok(total)
}

/// Both sides of the weighted defect identity:
/// sum_i lambda_i (d + rho_i)^2 = d^2 + sum_i lambda_i rho_i^2,
/// valid when the lambda_i are nonnegative with sum 1 and
/// sum_i rho_i lambda_i = 0. The two returned values are equal exactly.
pub fn defect_cauchy_schwarz(
    lambda: &[BigRat],
    d: &BigRat,
    rho: &[BigRat],
) -> Result<(BigRat, BigRat), RegularityError> {
    if lambda.len() != rho.len() || lambda.is_empty() {
        return Err(RegularityError::WeightSum);
    }
    if lambda.iter().any(|l| l < &BigRat::zero()) {
        return Err(RegularityError::WeightSum);
    }
    let sum_l: BigRat = lambda.iter().sum();
    if sum_l != BigRat::from_integer(1.into()) {
        return Err(RegularityError::WeightSum);
    }
    let sum_rl: BigRat = lambda.iter().zip(rho).map(|(l, r)| l * r).sum();
    if !sum_rl.is_zero() {
        return Err(RegularityError::WeightSum);
    }
    let lhs: BigRat = lambda
        .iter()
        .zip(rho)
        .map(|(l, r)| {
            let t = d + r;
            l * &t * &t
        })
        .sum();
    let rhs = d * d + lambda.iter().zip(rho).map(|(l, r)| l * r * r).sum::<BigRat>();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::big_rat;
    use num_traits::One;

    #[test]
    fn energy_edgeless_zero() {
        let p = Partition::contiguous(10, 2);
        let graphs = vec![Graph::empty(10)];
        assert!(energy(&p, &graphs, &big_rat(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn energy_complete_one_colour() {
        // With p = 1 every cross density is 1, so the energy equals
        // sum over ordered pairs |U||V| / n^2, strictly below 1.
        let n = 12;
        let g = Graph::complete(n);
        for k in [2usize, 3, 4] {
            let part = Partition::contiguous(n, k);
            let e = energy(&part, &[g.clone()], &BigRat::one()).unwrap();
            let mut expect = BigRat::zero();
            for (i, u) in part.blocks().iter().enumerate() {
                for (j, v) in part.blocks().iter().enumerate() {
                    if i != j {
                        expect += big_int_rat(u.len()) * big_int_rat(v.len())
                            / (big_int_rat(n) * big_int_rat(n));
                    }
                }
            }
            assert_eq!(e, expect);
            assert!(e < BigRat::one());
        }
    }

    #[test]
    fn dcs_symmetric_case() {
        // lambda = (1/2, 1/2), rho = (c, -c) gives d^2 + c^2.
        let lambda = vec![big_rat(1, 2), big_rat(1, 2)];
        let d = big_rat(3, 7);
        let c = big_rat(2, 5);
        let rho = vec![c.clone(), -c.clone()];
        let (lhs, rhs) = defect_cauchy_schwarz(&lambda, &d, &rho).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, &d * &d + &c * &c);
    }

    #[test]
    fn dcs_zero_deviation() {
        let lambda = vec![big_rat(1, 3), big_rat(2, 3)];
        let d = big_rat(5, 9);
        let rho = vec![BigRat::zero(), BigRat::zero()];
        let (lhs, rhs) = defect_cauchy_schwarz(&lambda, &d, &rho).unwrap();
        assert_eq!(lhs, &d * &d);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dcs_rejects_bad_weights() {
        let d = big_rat(1, 2);
        assert!(defect_cauchy_schwarz(&[big_rat(1, 2)], &d, &[BigRat::zero()]).is_err());
        assert!(defect_cauchy_schwarz(
            &[big_rat(1, 2), big_rat(1, 2)],
            &d,
            &[big_rat(1, 3), big_rat(1, 3)]
        )
        .is_err());
    }

    #[test]
    fn energy_never_decreases_under_refinement() {
        // Random-ish split of a fixed graph, exact rational comparison.
        let g = Graph::from_edges(
            12,
            &[(0, 6), (0, 7), (1, 6), (2, 8), (3, 9), (4, 10), (5, 11), (1, 11), (2, 10), (0, 11)],
        )
        .unwrap();
        let coarse = Partition::contiguous(12, 2);
        let p = big_rat(1, 3);
        let base = energy(&coarse, &[g.clone()], &p).unwrap();
        for cut in [vec![0, 1, 2], vec![6, 8, 10], vec![0, 11]] {
            let fine = coarse.split_by(&[cut]);
            let refined = energy(&fine, &[g.clone()], &p).unwrap();
            assert!(refined >= base);
        }
    }
}
