use std::collections::HashSet;

use crate::core_model::{guard, Coalition, Player, PlayerSet, SUBSET_LIMIT};
use crate::error::Result;
use crate::game_classes::SizeDecreasingGame;
use crate::scalar::Scalar;

/// Coalition/threshold pairs `(S_j, r_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShatterInstance<T> {
    pub pairs: Vec<(Coalition, T)>,
}

impl<T: Scalar> ShatterInstance<T> {
    pub fn new(pairs: Vec<(Coalition, T)>) -> Self {
        ShatterInstance { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Bit `j` set iff `f(S_j) > r_j`.
    pub fn labeling(&self, f: impl Fn(Coalition) -> T) -> u64 {
        self.pairs.iter().enumerate().filter(|(_, (s, r))| f(*s) > *r).fold(0, |acc, (j, _)| acc | 1 << j)
    }
}

/// Whether the hypotheses realize all `2^q` labelings of the instance.
pub fn pseudo_shatters<T: Scalar, F: Fn(Coalition) -> T>(
    hypotheses: impl IntoIterator<Item = F>,
    inst: &ShatterInstance<T>,
) -> Result<bool> {
    guard("pseudo-shattering", inst.len(), SUBSET_LIMIT)?;
    let want = 1usize << inst.len();
    let mut seen = HashSet::new();
    for f in hypotheses {
        seen.insert(inst.labeling(f));
        if seen.len() == want {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Coalitions of size `ceil(n/2)` that contain `i`.
pub fn half_size_family(n: usize, i: Player) -> Result<Vec<Coalition>> {
    let players = PlayerSet::new(n)?;
    players.check_subset_guard("half-size family", SUBSET_LIMIT)?;
    let half = n.div_ceil(2);
    Ok(players.coalitions_with(i).filter(|s| s.len() == half).collect())
}

/// One size-decreasing game per labeling of `inst`, following the free
/// choice argument: on the instance coalitions `i` puts `r ± 1`, elsewhere
/// it uses size bands wide enough to keep every size strictly ordered. The
/// instance must consist of equal-size coalitions containing `i`. Other
/// players get a plain size ranking.
pub fn class_r_witnesses<T: Scalar>(n: usize, i: Player, inst: &ShatterInstance<T>) -> Result<Vec<SizeDecreasingGame<T>>> {
    guard("class-R witness", inst.len(), SUBSET_LIMIT)?;
    let players = PlayerSet::new(n)?;
    players.check_subset_guard("class-R witness", SUBSET_LIMIT)?;
    let Some(size) = inst.pairs.first().map(|(s, _)| s.len()) else {
        return Ok(Vec::new());
    };
    let reach = inst
        .pairs
        .iter()
        .map(|(_, r)| if *r < T::zero() { -r.clone() } else { r.clone() })
        .fold(T::zero(), |a, b| if b > a { b } else { a })
        + T::one();
    let band = reach.clone() * T::two() + T::one();
    let size_rank = |s: Coalition| T::from_int(size as i64 - s.len() as i64) * band.clone();
    let rows = 1usize << n;
    (0..1u64 << inst.len())
        .map(|labels| {
            let mut values: Vec<Vec<T>> = (0..n)
                .map(|_| (0..rows).map(|m| Coalition::from_mask(m as u64).map_or_else(T::zero, size_rank)).collect())
                .collect();
            for (j, (s, r)) in inst.pairs.iter().enumerate() {
                let bump = if labels >> j & 1 == 1 { T::one() } else { -T::one() };
                values[i][s.mask() as usize] = r.clone() + bump;
            }
            SizeDecreasingGame::new(n, values)
        })
        .collect()
}

/// Every single-player anonymous valuation with size values in `0..grid`,
/// as rows indexed by `k - 1`.
pub fn anonymous_grid(n: usize, grid: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|row: Vec<i64>| (0..grid).map(move |v| [row.clone(), vec![v]].concat())).collect();
    }
    out
}
