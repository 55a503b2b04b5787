//! Native evaluators and seeded generators for the supported game classes.

mod anonymous;
mod avoid;
mod friends;
mod pair;
mod size_decreasing;

pub use anonymous::{counterexample, eval_anonymous, gen_anonymous, AnonymousTable};
pub use avoid::{avoid_set, gen_pessimist, is_bottom_responsive, PessimistGame};
pub use friends::{eval_friends, gen_friend_graph, FriendGraph, FriendsProfile, Relation};
pub use pair::{
    default_b_alpha, eval_additively_separable, eval_b_game, eval_fractional, eval_w_game, gen_pair_values,
    PairClass, PairValues,
};
pub use size_decreasing::{gen_size_decreasing, SizeDecreasingGame};

use serde::{Deserialize, Serialize};

use crate::core_model::{Coalition, GameClass, Player, Valuation, ValueTable};
use crate::error::Result;
use crate::hcn::{hcn_value, HedonicNet};
use crate::scalar::Scalar;

/// Any supported instance, serialized with a `"class"` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "class",
    rename_all = "kebab-case",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub enum Game<T> {
    AdditivelySeparable { values: PairValues<T> },
    Fractional { values: PairValues<T> },
    WGame { values: PairValues<T> },
    BGame { values: PairValues<T>, alpha: T },
    Friends { graph: FriendGraph, profile: FriendsProfile },
    Anonymous { table: AnonymousTable<T> },
    SizeDecreasing { game: SizeDecreasingGame<T> },
    BottomResponsive { game: PessimistGame<T> },
    CoalitionNet { net: HedonicNet<T> },
    Table { table: ValueTable<T> },
}

impl<T: Scalar> Game<T> {
    pub fn b_game(values: PairValues<T>) -> Self {
        let alpha = default_b_alpha(values.players());
        Game::BGame { values, alpha }
    }

    pub fn eval(&self, i: Player, s: Coalition) -> Result<T> {
        match self {
            Game::AdditivelySeparable { values } => eval_additively_separable(values, i, s),
            Game::Fractional { values } => eval_fractional(values, i, s),
            Game::WGame { values } => eval_w_game(values, i, s),
            Game::BGame { values, alpha } => eval_b_game(values, alpha, i, s),
            Game::Friends { graph, profile } => eval_friends(graph, *profile, i, s),
            Game::Anonymous { table } => eval_anonymous(table, i, s),
            Game::SizeDecreasing { game } => game.value(i, s),
            Game::BottomResponsive { game } => game.value(i, s),
            Game::CoalitionNet { net } => hcn_value(net, i, s),
            Game::Table { table } => {
                if s.contains(i) {
                    Ok(table.value(i, s))
                } else {
                    Err(crate::error::Error::NotAMember { player: i, coalition: s })
                }
            }
        }
    }

    /// Singleton value `v_i({i})`.
    pub fn singleton(&self, i: Player) -> T {
        self.eval(i, Coalition::singleton(i)).expect("i is in {i}")
    }
}

impl<T: Scalar> Valuation<T> for Game<T> {
    fn players(&self) -> usize {
        match self {
            Game::AdditivelySeparable { values }
            | Game::Fractional { values }
            | Game::WGame { values }
            | Game::BGame { values, .. } => values.players(),
            Game::Friends { graph, .. } => graph.players(),
            Game::Anonymous { table } => table.players(),
            Game::SizeDecreasing { game } => game.players(),
            Game::BottomResponsive { game } => game.players(),
            Game::CoalitionNet { net } => net.players(),
            Game::Table { table } => table.players(),
        }
    }

    fn value(&self, player: Player, coalition: Coalition) -> T {
        self.eval(player, coalition).unwrap_or_else(|e| panic!("{e}"))
    }

    fn class(&self) -> GameClass {
        match self {
            Game::AdditivelySeparable { .. } => GameClass::AdditivelySeparable,
            Game::Fractional { .. } => GameClass::Fractional,
            Game::WGame { .. } => GameClass::WGame,
            Game::BGame { .. } => GameClass::BGame,
            Game::Friends { profile: FriendsProfile::Appreciation, .. } => GameClass::FriendsAppreciation,
            Game::Friends { profile: FriendsProfile::Aversion, .. } => GameClass::EnemyAversion,
            Game::Anonymous { .. } => GameClass::Anonymous,
            Game::SizeDecreasing { .. } => GameClass::SizeDecreasing,
            Game::BottomResponsive { .. } => GameClass::BottomResponsive,
            Game::CoalitionNet { .. } => GameClass::CoalitionNet,
            Game::Table { table } => table.class(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip_keeps_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let games: Vec<Game<f64>> = vec![
            Game::WGame { values: gen_pair_values(&mut rng, PairClass::WGame, 4) },
            Game::b_game(gen_pair_values(&mut rng, PairClass::BGame, 4)),
            Game::Friends { graph: gen_friend_graph(&mut rng, 4, 0.5), profile: FriendsProfile::Aversion },
            Game::Anonymous { table: gen_anonymous(&mut rng, 4, true) },
        ];
        for g in games {
            let text = serde_json::to_string(&g).unwrap();
            assert!(text.starts_with("{\"class\":"), "{text}");
            let back: Game<f64> = serde_json::from_str(&text).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn class_tag_names() {
        let g: Game<f64> = Game::WGame { values: PairValues::from_fn(2, |_, _| 1.0) };
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        assert_eq!(v["class"], "w-game");
        assert_eq!(g.class(), GameClass::WGame);
    }
}
