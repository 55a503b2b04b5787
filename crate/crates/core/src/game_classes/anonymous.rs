use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{Coalition, Player};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `v_i(k)`: the value player `i` gives any coalition of size `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnonymousTable<T> {
    // sizes[i][k - 1]
    sizes: Vec<Vec<T>>,
}

impl<T: Scalar> AnonymousTable<T> {
    /// `sizes[i][k - 1]` is the value of size `k` for player `i`.
    pub fn new(sizes: Vec<Vec<T>>) -> Result<Self> {
        let n = sizes.len();
        if n == 0 || sizes.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("anonymous table needs one value per (player, size)".into()));
        }
        Ok(AnonymousTable { sizes })
    }

    pub fn players(&self) -> usize {
        self.sizes.len()
    }

    pub fn size_value(&self, i: Player, k: usize) -> &T {
        &self.sizes[i][k - 1]
    }

    /// Builds a table from per-player rankings of sizes, best first. The
    /// best size gets value `n`, the worst gets 1.
    pub fn from_rankings(rankings: &[Vec<usize>]) -> Result<Self> {
        let n = rankings.len();
        let mut sizes = vec![vec![T::zero(); n]; n];
        for (i, ranking) in rankings.iter().enumerate() {
            let mut seen = vec![false; n];
            if ranking.len() != n {
                return Err(Error::InvalidInstance(format!("ranking of player {i} must list all {n} sizes")));
            }
            for (pos, &k) in ranking.iter().enumerate() {
                if k == 0 || k > n || seen[k - 1] {
                    return Err(Error::InvalidInstance(format!("ranking of player {i} is not a permutation")));
                }
                seen[k - 1] = true;
                sizes[i][k - 1] = T::from_int((n - pos) as i64);
            }
        }
        AnonymousTable::new(sizes)
    }

    /// Peak of a single-peaked row (first size with the maximum value).
    pub fn peak(&self, i: Player) -> usize {
        let row = &self.sizes[i];
        let mut best = 0;
        for k in 1..row.len() {
            if row[k] > row[best] {
                best = k;
            }
        }
        best + 1
    }

    /// Single-peaked in the natural ordering: sizes closer to the peak are
    /// weakly preferred on each side of it.
    pub fn is_single_peaked(&self) -> bool {
        (0..self.players()).all(|i| {
            let p = self.peak(i);
            let row = &self.sizes[i];
            (1..p).all(|k| row[k - 1] <= row[k]) && (p..row.len()).all(|k| row[k] <= row[k - 1])
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AnonymousTable<U> {
        AnonymousTable { sizes: self.sizes.iter().map(|row| row.iter().map(&f).collect()).collect() }
    }
}

pub fn eval_anonymous<T: Scalar>(tab: &AnonymousTable<T>, i: Player, s: Coalition) -> Result<T> {
    if !s.contains(i) {
        return Err(Error::NotAMember { player: i, coalition: s });
    }
    Ok(tab.size_value(i, s.len()).clone())
}

/// Random integer size values in `[-n^2, n^2]`, or, when `single_peaked`, a
/// random peak with values strictly decreasing away from it on both sides.
pub fn gen_anonymous<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, single_peaked: bool) -> AnonymousTable<T> {
    let bound = (n * n) as i64;
    let sizes = (0..n)
        .map(|_| {
            if !single_peaked {
                return (0..n).map(|_| T::from_int(rng.gen_range(-bound..=bound))).collect();
            }
            let peak = rng.gen_range(0..n);
            let mut row = vec![0i64; n];
            row[peak] = bound;
            for k in (0..peak).rev() {
                row[k] = row[k + 1] - rng.gen_range(1..=n as i64);
            }
            for k in peak + 1..n {
                row[k] = row[k - 1] - rng.gen_range(1..=n as i64);
            }
            row.into_iter().map(T::from_int).collect()
        })
        .collect();
    AnonymousTable { sizes }
}

/// A seven-agent single-peaked instance with an empty core, together with a
/// twin that agrees with it on every coalition except the size-5 coalitions
/// containing one of the two type-c agents, and has a nonempty core.
///
/// Agents: `a1..a4 = 0..3`, `b1 = 4`, `c1 = 5`, `c2 = 6`.
///
/// * type a: `6 > 5 > 4 > 3 > 2 > 1 > 7`
/// * type b: `5 > 4 > 3 > 6 > 2 > 1 > 7`
/// * type c: `4 > 3 > 5 > 6 > 2 > 1 > 7`
///
/// Types b and c agree on every size but 5, so b and c rows share the same
/// numbers there and differ only in where size 5 sits.
pub mod counterexample {
    use super::*;

    pub const A: [Player; 4] = [0, 1, 2, 3];
    pub const B1: Player = 4;
    pub const C: [Player; 2] = [5, 6];

    fn row<T: Scalar>(pairs: [(usize, i64); 7]) -> Vec<T> {
        let mut row = vec![T::zero(); 7];
        for (k, v) in pairs {
            row[k - 1] = T::from_int(v);
        }
        row
    }

    fn type_a<T: Scalar>() -> Vec<T> {
        row([(6, 7), (5, 6), (4, 5), (3, 4), (2, 3), (1, 2), (7, 1)])
    }

    fn type_b<T: Scalar>() -> Vec<T> {
        row([(5, 11), (4, 10), (3, 9), (6, 7), (2, 6), (1, 5), (7, 4)])
    }

    fn type_c<T: Scalar>() -> Vec<T> {
        row([(4, 10), (3, 9), (5, 8), (6, 7), (2, 6), (1, 5), (7, 4)])
    }

    /// The empty-core instance.
    pub fn instance_i1<T: Scalar>() -> AnonymousTable<T> {
        let mut sizes = vec![type_a(); 4];
        sizes.push(type_b());
        sizes.push(type_c());
        sizes.push(type_c());
        AnonymousTable { sizes }
    }

    /// The same instance with both type-c agents switched to type b.
    pub fn instance_i2<T: Scalar>() -> AnonymousTable<T> {
        let mut sizes = vec![type_a(); 4];
        sizes.extend(std::iter::repeat_with(type_b).take(3));
        AnonymousTable { sizes }
    }

    /// `{{a1,a2},{a3,a4,b1,c1,c2}}`, core-stable in the second instance.
    pub fn stable_partition_i2() -> crate::core_model::Partition {
        crate::core_model::Partition::new(
            7,
            vec![Coalition::pair(0, 1), Coalition::from_players([2, 3, 4, 5, 6]).unwrap()],
        )
        .unwrap()
    }

    /// Support of the adversarial distribution: every coalition except the
    /// size-5 ones containing `c1` or `c2`.
    pub fn in_support(s: Coalition) -> bool {
        !(s.len() == 5 && C.iter().any(|&c| s.contains(c)))
    }
}
