//! Distributions over non-empty coalitions with exact probability queries.

mod events;

pub use events::{prob_event_a, prob_event_b, tail_event, tail_event_prob};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{full_mask, guard, Coalition, SUBSET_LIMIT};
use crate::error::{Error, Result};
use crate::game_classes::counterexample;

/// Name of the builtin support that hides the size-5 coalitions containing
/// either type-c agent of the seven-agent anonymous counterexample.
pub const ANON_I1_SUPPORT: &str = "anon-i1-support";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionKind {
    Uniform,
    Explicit,
    Restricted { support: String },
    Bounded { lambda: u64, seed: u64 },
}

/// A distribution over the non-empty coalitions of `n` players, stored as
/// integer weights indexed by mask. The uniform distribution keeps no table
/// and samples by rejection, so it works beyond the enumeration limit.
#[derive(Clone, Debug)]
pub struct CoalitionDistribution {
    n: usize,
    kind: DistributionKind,
    weights: Option<Vec<u64>>,
    total: u128,
    index: Option<WeightedIndex<u64>>,
}

impl CoalitionDistribution {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::PlayerCount(n));
        }
        Ok(CoalitionDistribution {
            n,
            kind: DistributionKind::Uniform,
            weights: None,
            total: full_mask(n) as u128,
            index: None,
        })
    }

    fn from_weights(n: usize, kind: DistributionKind, weights: Vec<u64>) -> Result<Self> {
        guard("dense coalition distribution", n, SUBSET_LIMIT)?;
        if n == 0 {
            return Err(Error::PlayerCount(0));
        }
        debug_assert_eq!(weights.len(), 1 << n);
        if weights[0] != 0 {
            return Err(Error::Distribution("the empty coalition cannot carry weight".into()));
        }
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 {
            return Err(Error::Distribution("total weight is zero".into()));
        }
        let index = WeightedIndex::new(&weights).map_err(|e| Error::Distribution(e.to_string()))?;
        Ok(CoalitionDistribution { n, kind, weights: Some(weights), total, index: Some(index) })
    }

    /// Non-negative rational weights; unlisted coalitions get weight zero.
    pub fn explicit(n: usize, entries: &[(Coalition, BigRational)]) -> Result<Self> {
        guard("dense coalition distribution", n, SUBSET_LIMIT)?;
        let mut lcm = BigInt::one();
        for (c, w) in entries {
            if w < &BigRational::zero() {
                return Err(Error::Distribution(format!("negative weight for {c}")));
            }
            if c.span() > n {
                return Err(Error::Distribution(format!("coalition {c} outside {n} players")));
            }
            lcm = lcm.lcm(w.denom());
        }
        let mut weights = vec![0u64; 1 << n];
        for (c, w) in entries {
            let scaled = (w * BigRational::from_integer(lcm.clone())).to_integer();
            let scaled = scaled.to_u64().ok_or_else(|| Error::Distribution("weights too large after scaling".into()))?;
            let slot = &mut weights[c.mask() as usize];
            *slot = slot.checked_add(scaled).ok_or_else(|| Error::Distribution("weight overflow".into()))?;
        }
        CoalitionDistribution::from_weights(n, DistributionKind::Explicit, weights)
    }

    /// Uniform over the coalitions a named builtin predicate accepts.
    pub fn restricted(n: usize, support: &str) -> Result<Self> {
        let accept: fn(Coalition) -> bool = match support {
            ANON_I1_SUPPORT if n == 7 => counterexample::in_support,
            ANON_I1_SUPPORT => return Err(Error::Distribution(format!("{ANON_I1_SUPPORT} is defined for 7 players"))),
            other => return Err(Error::Distribution(format!("unknown support `{other}`"))),
        };
        guard("dense coalition distribution", n, SUBSET_LIMIT)?;
        let weights = (0..1u64 << n).map(|m| Coalition::from_mask(m).map_or(0, |c| u64::from(accept(c)))).collect();
        CoalitionDistribution::from_weights(n, DistributionKind::Restricted { support: support.into() }, weights)
    }

    /// Integer weights uniform in `[W, λW]` with `W = 2^n`; the max/min ratio
    /// is at most `λ` by construction.
    pub fn bounded_random(n: usize, lambda: u64, seed: u64) -> Result<Self> {
        guard("dense coalition distribution", n, SUBSET_LIMIT)?;
        if lambda == 0 {
            return Err(Error::Distribution("lambda must be at least 1".into()));
        }
        let base = 1u64 << n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..1u64 << n).map(|m| if m == 0 { 0 } else { rng.gen_range(base..=lambda * base) }).collect();
        CoalitionDistribution::from_weights(n, DistributionKind::Bounded { lambda, seed }, weights)
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn weight(&self, s: Coalition) -> u64 {
        match &self.weights {
            Some(w) => w[s.mask() as usize],
            None => u64::from(s.mask() <= full_mask(self.n)),
        }
    }

    fn total_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(BigUint::from(self.total)))
    }

    pub fn prob(&self, s: Coalition) -> BigRational {
        BigRational::from_integer(BigInt::from(self.weight(s))) / self.total_rational()
    }

    /// `m` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, m: usize) -> Vec<Coalition> {
        match &self.index {
            Some(index) => (0..m).map(|_| Coalition::from_mask(index.sample(rng) as u64).unwrap()).collect(),
            None => {
                let full = full_mask(self.n);
                (0..m)
                    .map(|_| loop {
                        if let Some(c) = Coalition::from_mask(rng.gen::<u64>() & full) {
                            break c;
                        }
                    })
                    .collect()
            }
        }
    }

    /// Non-empty coalitions with positive weight, in mask order.
    pub fn support(&self) -> Result<Vec<Coalition>> {
        guard("support enumeration", self.n, SUBSET_LIMIT)?;
        Ok((1..=full_mask(self.n)).map(|m| Coalition::from_mask(m).unwrap()).filter(|&c| self.weight(c) > 0).collect())
    }

    /// `Σ_{S : pred(S)} Pr[S]`.
    pub fn exact_prob(&self, pred: impl Fn(Coalition) -> bool) -> Result<BigRational> {
        guard("exact probability", self.n, SUBSET_LIMIT)?;
        let hits: u128 = (1..=full_mask(self.n))
            .map(|m| Coalition::from_mask(m).unwrap())
            .filter(|&c| pred(c))
            .map(|c| self.weight(c) as u128)
            .sum();
        Ok(BigRational::from_integer(BigInt::from(BigUint::from(hits))) / self.total_rational())
    }

    /// Every coalition has positive weight and `max <= λ min`.
    pub fn verify_bounded(&self, lambda: &BigRational) -> Result<bool> {
        guard("bounded check", self.n, SUBSET_LIMIT)?;
        let (mut lo, mut hi) = (u64::MAX, 0u64);
        for m in 1..=full_mask(self.n) {
            let w = self.weight(Coalition::from_mask(m).unwrap());
            lo = lo.min(w);
            hi = hi.max(w);
        }
        if lo == 0 {
            return Ok(false);
        }
        Ok(BigRational::from_integer(hi.into()) <= lambda * BigRational::from_integer(lo.into()))
    }

    /// Smallest `λ` the distribution is bounded by, `None` with a zero weight.
    pub fn bound_ratio(&self) -> Result<Option<BigRational>> {
        guard("bounded check", self.n, SUBSET_LIMIT)?;
        let ws: Vec<u64> = (1..=full_mask(self.n)).map(|m| self.weight(Coalition::from_mask(m).unwrap())).collect();
        let lo = *ws.iter().min().unwrap();
        let hi = *ws.iter().max().unwrap();
        Ok((lo > 0).then(|| BigRational::new(hi.into(), lo.into())))
    }

    /// `1/(λ 2^n) <= 1/(λ(2^n - 1)) <= Pr[S] <= λ/(2^n - 1)` for every `S`.
    pub fn sandwich_holds(&self, lambda: &BigRational) -> Result<bool> {
        guard("bounded check", self.n, SUBSET_LIMIT)?;
        let count = BigRational::from_integer(BigInt::from(full_mask(self.n)));
        let low = BigRational::one() / (lambda * &count);
        let high = lambda / &count;
        let lowest = BigRational::one() / (lambda * (&count + BigRational::one()));
        if lowest > low {
            return Ok(false);
        }
        Ok((1..=full_mask(self.n)).all(|m| {
            let p = self.prob(Coalition::from_mask(m).unwrap());
            low <= p && p <= high
        }))
    }
}

/// Coalition weight entry of an explicit distribution: `["0,2", "3/2"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry(pub String, pub String);

/// Distribution section of an experiment config.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionSpec {
    Uniform,
    Bounded { lambda: u64, seed: u64 },
    Explicit { weights: Vec<WeightEntry> },
    Restricted { support: String },
}

impl DistributionSpec {
    pub fn build(&self, n: usize) -> Result<CoalitionDistribution> {
        match self {
            DistributionSpec::Uniform => CoalitionDistribution::uniform(n),
            DistributionSpec::Bounded { lambda, seed } => CoalitionDistribution::bounded_random(n, *lambda, *seed),
            DistributionSpec::Restricted { support } => CoalitionDistribution::restricted(n, support),
            DistributionSpec::Explicit { weights } => {
                let entries = weights
                    .iter()
                    .map(|WeightEntry(c, w)| {
                        let players = c
                            .split(',')
                            .map(|p| p.trim().parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| Error::Distribution(format!("bad coalition `{c}`")))?;
                        let coalition = Coalition::from_players(players)?;
                        let weight = <BigRational as crate::scalar::Scalar>::parse_literal(w)
                            .ok_or_else(|| Error::Distribution(format!("bad weight `{w}`")))?;
                        Ok((coalition, weight))
                    })
                    .collect::<Result<Vec<_>>>()?;
                CoalitionDistribution::explicit(n, &entries)
            }
        }
    }
}
