use serde::{Deserialize, Serialize};

use crate::core_model::{Coalition, LabeledSample, Player};
use crate::error::{Error, Result};
use crate::game_classes::PairValues;
use crate::hcn::{hcn_value, HedonicNet};
use crate::scalar::{floor_log2_recip, Extended, Scalar};

/// Anonymous table in which unobserved `(player, size)` cells are `-inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnedAnonymous<T> {
    // sizes[i][k - 1]
    pub sizes: Vec<Vec<Extended<T>>>,
}

impl<T: Scalar> LearnedAnonymous<T> {
    pub fn players(&self) -> usize {
        self.sizes.len()
    }

    pub fn size_value(&self, i: Player, k: usize) -> &Extended<T> {
        &self.sizes[i][k - 1]
    }
}

pub fn learn_anonymous<T: Scalar>(sample: &LabeledSample<T>, n: usize) -> Result<LearnedAnonymous<T>> {
    let mut sizes: Vec<Vec<Extended<T>>> = vec![vec![Extended::NegInf; n]; n];
    for e in sample.iter() {
        let k = e.coalition.len();
        for (i, v) in e.iter() {
            match &sizes[i][k - 1] {
                Extended::Finite(old) if !old.same_value(v) => return Err(Error::NotAnonymous { player: i, size: k }),
                Extended::Finite(_) => {}
                Extended::NegInf => sizes[i][k - 1] = Extended::Finite(v.clone()),
            }
        }
    }
    Ok(LearnedAnonymous { sizes })
}

/// Pairwise estimates `v*_i(j)` with `-inf` where no sampled coalition held
/// both players, plus the singleton values that were observed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnedPairs<T> {
    pub pairs: Vec<Vec<Extended<T>>>,
    pub singletons: Vec<Extended<T>>,
}

impl<T: Scalar> LearnedPairs<T> {
    pub fn players(&self) -> usize {
        self.pairs.len()
    }

    pub fn get(&self, i: Player, j: Player) -> &Extended<T> {
        &self.pairs[i][j]
    }

    /// W-game reading of the estimate: the worst member's estimate.
    pub fn w_value(&self, i: Player, s: Coalition) -> Extended<T> {
        s.members()
            .filter(|&j| j != i)
            .map(|j| &self.pairs[i][j])
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap_or(&self.singletons[i])
            .clone()
    }

    /// Top choice of `i` by estimate among `candidates`; ties to the lowest id.
    pub fn argmax(&self, i: Player, candidates: impl Iterator<Item = Player>) -> Option<Player> {
        candidates.fold(None, |best: Option<Player>, j| match best {
            Some(b) if self.pairs[i][b] >= self.pairs[i][j] => Some(b),
            _ => Some(j),
        })
    }
}

/// `v*_i(j) = max { v_i(S) : S sampled, {i, j} ⊆ S }`.
pub fn learn_w_games<T: Scalar>(n: usize, sample: &LabeledSample<T>) -> LearnedPairs<T> {
    let mut pairs = vec![vec![Extended::NegInf; n]; n];
    let mut singletons = vec![Extended::NegInf; n];
    for e in sample.iter() {
        for (i, v) in e.iter() {
            let v = Extended::Finite(v.clone());
            if e.coalition.len() == 1 {
                singletons[i] = v.clone();
            }
            for j in e.coalition.members().filter(|&j| j != i) {
                if v > pairs[i][j] {
                    pairs[i][j] = v.clone();
                }
            }
        }
    }
    LearnedPairs { pairs, singletons }
}

/// With players sorted ascending by `vtrue` row `i` and
/// `f = floor(log2(1/eps))`: the estimate is exact on the first `f` players
/// and strictly above the `f`-th true value on the rest. For `f = 0` the
/// second condition has no reference value and only asks for finiteness.
pub fn is_eps_estimate<T: Scalar>(vstar: &LearnedPairs<T>, vtrue: &PairValues<T>, eps: &T, i: Player) -> bool {
    let order = vtrue.ascending_order(i);
    let f = floor_log2_recip(eps).min(order.len());
    let exact = order[..f].iter().all(|&j| vstar.get(i, j).finite().is_some_and(|v| v.same_value(vtrue.get(i, j))));
    let above = order[f..].iter().all(|&j| match (vstar.get(i, j), f) {
        (Extended::NegInf, _) => false,
        (Extended::Finite(_), 0) => true,
        (Extended::Finite(v), _) => v > vtrue.get(i, order[f - 1]),
    });
    exact && above
}

/// Output of any learner.
#[derive(Clone, Debug, PartialEq)]
pub enum LearnedValuation<T> {
    Net(HedonicNet<T>),
    Anonymous(LearnedAnonymous<T>),
    WPairs(LearnedPairs<T>),
}

impl<T: Scalar> LearnedValuation<T> {
    pub fn players(&self) -> usize {
        match self {
            LearnedValuation::Net(net) => net.players(),
            LearnedValuation::Anonymous(t) => t.players(),
            LearnedValuation::WPairs(p) => p.players(),
        }
    }

    pub fn value(&self, i: Player, s: Coalition) -> Result<Extended<T>> {
        if !s.contains(i) {
            return Err(Error::NotAMember { player: i, coalition: s });
        }
        Ok(match self {
            LearnedValuation::Net(net) => Extended::Finite(hcn_value(net, i, s)?),
            LearnedValuation::Anonymous(t) => t.size_value(i, s.len()).clone(),
            LearnedValuation::WPairs(p) => p.w_value(i, s),
        })
    }

    /// Agrees with every sampled value.
    pub fn consistent_with(&self, sample: &LabeledSample<T>) -> bool {
        sample.iter().all(|e| {
            e.iter().all(|(i, v)| self.value(i, e.coalition).ok().and_then(|x| x.finite().map(|x| x.same_value(v))) == Some(true))
        })
    }
}
