use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::core_model::{solve_core_with_limit, Coalition, CoreResult, LabeledSample, Partition, Player, PARTITION_LIMIT};
use crate::error::{Error, Result};
use crate::game_classes::{Game, PairValues};
use crate::learners::{learn_w_games, LearnedPairs};
use crate::scalar::{floor_log2_recip, to_exact, Extended, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "partition", rename_all = "kebab-case")]
pub enum StabilizeOutcome {
    Partition(Partition),
    CoreEmpty,
}

impl StabilizeOutcome {
    pub fn partition(&self) -> Option<&Partition> {
        match self {
            StabilizeOutcome::Partition(p) => Some(p),
            StabilizeOutcome::CoreEmpty => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    /// Pairing on the learned estimate, run with `eps' = eps / (2 lambda)`.
    Pairing { eps_prime: BigRational },
    /// Every pair was observed; the core of the revealed game is returned.
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WStabilization<T> {
    pub outcome: StabilizeOutcome,
    pub regime: Regime,
    pub estimate: Option<LearnedPairs<T>>,
}

/// `eps < cbrt(lambda^5 / 2^(n-3))`, decided exactly.
pub fn exact_regime(n: usize, eps: &BigRational, lambda: &BigRational) -> bool {
    let lhs: BigRational = Pow::pow(eps, 3u32);
    let rhs: BigRational = Pow::pow(lambda, 5u32);
    let two = BigInt::from(2);
    if n >= 3 {
        lhs * BigRational::from_integer(Pow::pow(&two, (n - 3) as u32)) < rhs
    } else {
        lhs < rhs * BigRational::from_integer(Pow::pow(&two, (3 - n) as u32))
    }
}

/// Lowest unassigned player takes its top remaining choice by `v*`; a lone
/// last player stays single.
pub fn pair_by_estimate<T: Scalar>(n: usize, vstar: &LearnedPairs<T>) -> Partition {
    let mut free: Vec<Player> = (0..n).collect();
    let mut blocks = Vec::new();
    while let Some(&i) = free.first() {
        match vstar.argmax(i, free[1..].iter().copied()) {
            Some(j) => {
                blocks.push(Coalition::pair(i, j));
                free.retain(|&p| p != i && p != j);
            }
            None => {
                blocks.push(Coalition::singleton(i));
                free.clear();
            }
        }
    }
    Partition::new(n, blocks).expect("pairs cover every player")
}

/// Pair values read off the sampled size-2 coalitions. Singleton values are
/// taken from sampled singletons and default to zero.
pub fn reveal_pairs<T: Scalar>(n: usize, sample: &LabeledSample<T>) -> Result<PairValues<T>> {
    let mut pv = PairValues::from_fn(n, |_, _| T::zero());
    let mut seen = vec![vec![false; n]; n];
    let mut singles = vec![T::zero(); n];
    for e in sample.iter() {
        let members: Vec<(Player, &T)> = e.iter().collect();
        match members.as_slice() {
            [(i, vi), (j, vj)] => {
                pv.set(*i, *j, (*vi).clone());
                pv.set(*j, *i, (*vj).clone());
                seen[*i][*j] = true;
            }
            [(i, vi)] => singles[*i] = (*vi).clone(),
            _ => {}
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !seen[i][j] {
                return Err(Error::InsufficientSample(Coalition::pair(i, j)));
            }
        }
    }
    pv.with_singletons(singles)
}

/// Core of the game revealed by the sampled pairs, found by enumeration.
pub fn stabilize_w_exact<T: Scalar>(n: usize, sample: &LabeledSample<T>) -> Result<StabilizeOutcome> {
    stabilize_w_exact_with_limit(n, sample, PARTITION_LIMIT)
}

/// [`stabilize_w_exact`] with an explicit partition-enumeration guard.
pub fn stabilize_w_exact_with_limit<T: Scalar>(n: usize, sample: &LabeledSample<T>, limit: usize) -> Result<StabilizeOutcome> {
    let pv = reveal_pairs(n, sample)?;
    Ok(match solve_core_with_limit(&Game::WGame { values: pv }, limit)? {
        CoreResult::Stable(pi) => StabilizeOutcome::Partition(pi),
        CoreResult::Empty => StabilizeOutcome::CoreEmpty,
    })
}

pub fn stabilize_w_games<T: Scalar, E: Scalar>(
    n: usize,
    sample: &LabeledSample<T>,
    eps: &E,
    lambda: &E,
) -> Result<WStabilization<T>> {
    let (eps, lambda) = (to_exact(eps), to_exact(lambda));
    if exact_regime(n, &eps, &lambda) {
        let outcome = stabilize_w_exact(n, sample)?;
        return Ok(WStabilization { outcome, regime: Regime::Exact, estimate: None });
    }
    let vstar = learn_w_games(n, sample);
    let pi = pair_by_estimate(n, &vstar);
    let eps_prime = eps / (lambda * BigRational::from_integer(2.into()));
    Ok(WStabilization { outcome: StabilizeOutcome::Partition(pi), regime: Regime::Pairing { eps_prime }, estimate: Some(vstar) })
}

/// Players not grouped with any of their `floor(log2(1/eps))` least
/// preferred others by `v*` (ties by id).
pub fn green_players<T: Scalar, E: Scalar>(pi: &Partition, vstar: &LearnedPairs<T>, eps: &E) -> Vec<Player> {
    let n = pi.players();
    let f = floor_log2_recip(eps);
    (0..n)
        .filter(|&i| {
            let mut others: Vec<Player> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| vstar.get(i, a).partial_cmp(vstar.get(i, b)).unwrap().then(a.cmp(&b)));
            !others.iter().take(f).any(|&j| pi.block_of(i).contains(j))
        })
        .collect()
}

/// `m = ceil((1/eps) ln(n^2/delta))`, the pairing-regime sample size.
pub fn pairing_sample_size(n: usize, eps: f64, delta: f64) -> usize {
    ((1.0 / eps) * ((n * n) as f64 / delta).ln()).ceil() as usize
}

/// `m = ceil((2 lambda / eps) ln(n^2/delta))`, the estimate sample size.
pub fn estimate_sample_size(n: usize, eps: f64, delta: f64, lambda: f64) -> usize {
    ((2.0 * lambda / eps) * ((n * n) as f64 / delta).ln()).ceil() as usize
}

/// `m = ceil((8 lambda^6 / eps^3) ln(n^2/delta))`, the exact-regime size.
pub fn exact_sample_size(n: usize, eps: f64, delta: f64, lambda: f64) -> usize {
    ((8.0 * lambda.powi(6) / eps.powi(3)) * ((n * n) as f64 / delta).ln()).ceil() as usize
}

/// Whether `v*` has a finite entry for every ordered pair.
pub fn fully_observed<T: Scalar>(vstar: &LearnedPairs<T>) -> bool {
    let n = vstar.players();
    (0..n).all(|i| (0..n).filter(|&j| j != i).all(|j| matches!(vstar.get(i, j), Extended::Finite(_))))
}
