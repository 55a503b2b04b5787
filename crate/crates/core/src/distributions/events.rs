use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::CoalitionDistribution;
use crate::core_model::{guard, submasks, Coalition, Player, SUBSET_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::floor_log2_recip;

/// Coalitions `S` with `i, o_j ∈ S` and `S \ {i, o_j} ⊆ {o_t, .., o_{n-1}}`,
/// where `order = [o_1, .., o_{n-1}]` lists the other players (1-based
/// positions) and `tail_start = t`.
pub fn tail_event(i: Player, order: &[Player], j: usize, tail_start: usize) -> Result<Vec<Coalition>> {
    if j == 0 || j > order.len() || order.contains(&i) {
        return Err(Error::InvalidInstance(format!("position {j} is not in the order of the other players")));
    }
    guard("tail event", order.len() + 1, SUBSET_LIMIT)?;
    let core = (1u64 << i) | (1u64 << order[j - 1]);
    let tail: u64 = order
        .iter()
        .enumerate()
        .filter(|(pos, &p)| pos + 1 >= tail_start && p != order[j - 1])
        .fold(0, |acc, (_, &p)| acc | 1 << p);
    Ok(submasks(tail).map(|m| Coalition::from_mask(core | m).unwrap()).collect())
}

pub fn tail_event_prob(
    dist: &CoalitionDistribution,
    i: Player,
    order: &[Player],
    j: usize,
    tail_start: usize,
) -> Result<BigRational> {
    let hits: u128 = tail_event(i, order, j, tail_start)?.into_iter().map(|s| dist.weight(s) as u128).sum();
    Ok(BigRational::from_integer(BigInt::from(BigUint::from(hits))) / dist.total_rational())
}

/// `Pr[A_j]`: the other members all rank above `o_j`.
pub fn prob_event_a(dist: &CoalitionDistribution, i: Player, order: &[Player], j: usize) -> Result<BigRational> {
    tail_event_prob(dist, i, order, j, j + 1)
}

/// `Pr[B_j]`: the other members all sit at positions `>= floor(log2(1/ε)) + 2`.
pub fn prob_event_b<E: crate::scalar::Scalar>(
    dist: &CoalitionDistribution,
    i: Player,
    order: &[Player],
    j: usize,
    eps: &E,
) -> Result<BigRational> {
    tail_event_prob(dist, i, order, j, floor_log2_recip(eps) + 2)
}
