use serde::{Deserialize, Serialize};

use super::coalition::{Coalition, Player};
use crate::scalar::Scalar;

/// Hedonic game classes this crate can evaluate natively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameClass {
    AdditivelySeparable,
    Fractional,
    WGame,
    BGame,
    FriendsAppreciation,
    EnemyAversion,
    Anonymous,
    SizeDecreasing,
    BottomResponsive,
    CoalitionNet,
    Table,
}

/// A valuation profile `v_i(S)`, defined only when `i` is a member of `S`.
pub trait Valuation<T: Scalar>: Sync {
    fn players(&self) -> usize;

    /// Panics when `player` is not in `coalition`; that query has no value.
    fn value(&self, player: Player, coalition: Coalition) -> T;

    fn class(&self) -> GameClass;

    /// `true` iff `player` strictly prefers `a` to `b`.
    fn prefers(&self, player: Player, a: Coalition, b: Coalition) -> bool {
        self.value(player, a) > self.value(player, b)
    }
}

impl<T: Scalar, V: Valuation<T> + ?Sized> Valuation<T> for &V {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn value(&self, player: Player, coalition: Coalition) -> T {
        (**self).value(player, coalition)
    }
    fn class(&self) -> GameClass {
        (**self).class()
    }
}

/// Dense table `values[i][mask]` over every coalition containing `i`.
///
/// Used to cache an arbitrary valuation before exhaustive loops, and as the
/// representation of explicitly listed games.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueTable<T> {
    n: usize,
    class: GameClass,
    values: Vec<Vec<Option<T>>>,
}

impl<T: Scalar> ValueTable<T> {
    pub fn tabulate<V: Valuation<T> + ?Sized>(v: &V) -> Self {
        let n = v.players();
        let full = (1usize << n) - 1;
        let values = (0..n)
            .map(|i| {
                (0..=full)
                    .map(|mask| {
                        (mask >> i & 1 == 1).then(|| v.value(i, Coalition::from_mask(mask as u64).unwrap()))
                    })
                    .collect()
            })
            .collect();
        ValueTable { n, class: v.class(), values }
    }

    pub fn from_fn(n: usize, class: GameClass, mut f: impl FnMut(Player, Coalition) -> T) -> Self {
        let full = (1usize << n) - 1;
        let values = (0..n)
            .map(|i| {
                (0..=full)
                    .map(|mask| (mask >> i & 1 == 1).then(|| f(i, Coalition::from_mask(mask as u64).unwrap())))
                    .collect()
            })
            .collect();
        ValueTable { n, class, values }
    }

    pub fn set(&mut self, player: Player, coalition: Coalition, value: T) {
        assert!(coalition.contains(player), "player {player} is not in {coalition}");
        self.values[player][coalition.mask() as usize] = Some(value);
    }
}

impl<T: Scalar> Valuation<T> for ValueTable<T> {
    fn players(&self) -> usize {
        self.n
    }

    fn value(&self, player: Player, coalition: Coalition) -> T {
        self.values[player][coalition.mask() as usize]
            .clone()
            .unwrap_or_else(|| panic!("player {player} is not in {coalition}"))
    }

    fn class(&self) -> GameClass {
        self.class
    }
}
