use super::formula::Formula;
use super::net::{HedonicNet, Rule};
use crate::core_model::Player;
use crate::error::{Error, Result};
use crate::game_classes::{AnonymousTable, Game, PairValues};
use crate::scalar::Scalar;

fn others(n: usize, i: Player) -> impl Iterator<Item = Player> {
    (0..n).filter(move |&j| j != i)
}

/// `x_j ↦ v_i(j)` for every `j != i`.
pub fn additive_net<T: Scalar>(pv: &PairValues<T>) -> HedonicNet<T> {
    let n = pv.players();
    HedonicNet::new(
        (0..n).map(|i| others(n, i).map(|j| Rule::new(Formula::var(j), pv.get(i, j).clone())).collect()).collect(),
    )
}

/// `x_j ∧ card=k ↦ v_i(j) / k` for every `j != i` and `2 <= k <= n`.
pub fn fractional_net<T: Scalar>(pv: &PairValues<T>) -> HedonicNet<T> {
    let n = pv.players();
    HedonicNet::new(
        (0..n)
            .map(|i| {
                others(n, i)
                    .flat_map(|j| {
                        (2..=n).map(move |k| {
                            Rule::new(
                                Formula::and([Formula::var(j), Formula::CardEq(k)]),
                                pv.get(i, j).clone() / T::from_int(k as i64),
                            )
                        })
                    })
                    .collect()
            })
            .collect(),
    )
}

/// `card=k ↦ v_i(k)` for every size.
pub fn anonymous_net<T: Scalar>(tab: &AnonymousTable<T>) -> HedonicNet<T> {
    let n = tab.players();
    HedonicNet::new(
        (0..n).map(|i| (1..=n).map(|k| Rule::new(Formula::CardEq(k), tab.size_value(i, k).clone())).collect()).collect(),
    )
}

/// `x_{o_1} ↦ v(o_1)`, `x_{o_2} ∧ ¬x_{o_1} ↦ v(o_2)`, ... along `order`.
fn chain<T: Scalar>(pv: &PairValues<T>, i: Player, order: &[Player]) -> Vec<Rule<T>> {
    order
        .iter()
        .enumerate()
        .map(|(pos, &j)| {
            let mut parts = vec![Formula::var(j)];
            parts.extend(order[..pos].iter().map(|&h| Formula::not_var(h)));
            Rule::new(Formula::and(parts).normalize(), pv.get(i, j).clone())
        })
        .collect()
}

fn strict_order<T: Scalar>(pv: &PairValues<T>, i: Player) -> Result<Vec<Player>> {
    if !pv.row_is_strict(i) {
        return Err(Error::TiedRow { player: i });
    }
    Ok(pv.ascending_order(i))
}

/// Chain from the least preferred member up, plus `card=1 ↦ v_i({i})`.
pub fn w_game_net<T: Scalar>(pv: &PairValues<T>) -> Result<HedonicNet<T>> {
    let rules = (0..pv.players())
        .map(|i| {
            let order = strict_order(pv, i)?;
            let mut rules = chain(pv, i, &order);
            rules.push(Rule::new(Formula::CardEq(1), pv.singleton(i).clone()));
            Ok(rules)
        })
        .collect::<Result<_>>()?;
    Ok(HedonicNet::new(rules))
}

/// Chain from the most preferred member down, `x_j ↦ -α` for every other
/// player, and `card=1 ↦ v_i({i})`.
pub fn b_game_net<T: Scalar>(pv: &PairValues<T>, alpha: &T) -> Result<HedonicNet<T>> {
    let n = pv.players();
    let rules = (0..n)
        .map(|i| {
            let mut order = strict_order(pv, i)?;
            order.reverse();
            let mut rules = chain(pv, i, &order);
            rules.extend(others(n, i).map(|j| Rule::new(Formula::var(j), -alpha.clone())));
            rules.push(Rule::new(Formula::CardEq(1), pv.singleton(i).clone()));
            Ok(rules)
        })
        .collect::<Result<_>>()?;
    Ok(HedonicNet::new(rules))
}

/// Number of chain rules at the front of each B-game row; the `-α` and
/// singleton rules follow them.
pub fn b_game_chain_len(n: usize) -> usize {
    n - 1
}

pub fn to_hcn<T: Scalar>(game: &Game<T>) -> Result<HedonicNet<T>> {
    match game {
        Game::AdditivelySeparable { values } => Ok(additive_net(values)),
        Game::Fractional { values } => Ok(fractional_net(values)),
        Game::Anonymous { table } => Ok(anonymous_net(table)),
        Game::WGame { values } => w_game_net(values),
        Game::BGame { values, alpha } => b_game_net(values, alpha),
        Game::CoalitionNet { net } => Ok(net.clone()),
        other => Err(Error::InvalidInstance(format!("no coalition-net encoding for {:?}", crate::core_model::Valuation::class(other)))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::{Coalition, PlayerSet, Valuation};
    use crate::game_classes::{gen_anonymous, gen_pair_values, PairClass};
    use crate::hcn::hcn_value;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn agrees(game: &Game<BigRational>) {
        let net = to_hcn(game).unwrap();
        let n = game.players();
        let ps = PlayerSet::new(n).unwrap();
        for i in 0..n {
            for s in ps.coalitions_with(i) {
                assert_eq!(hcn_value(&net, i, s).unwrap(), game.eval(i, s).unwrap(), "{:?} i={i} S={s}", game.class());
            }
        }
    }

    #[test]
    fn small_nets_match_native_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let pick = |rng: &mut ChaCha8Rng, c| gen_pair_values::<BigRational, _>(rng, c, n);
            agrees(&Game::AdditivelySeparable { values: pick(&mut rng, PairClass::AdditivelySeparable) });
            agrees(&Game::Fractional { values: pick(&mut rng, PairClass::Fractional) });
            let w = pick(&mut rng, PairClass::WGame).with_singletons(vec![BigRational::from_integer((-3).into()); n]).unwrap();
            agrees(&Game::WGame { values: w });
            agrees(&Game::b_game(pick(&mut rng, PairClass::BGame)));
            agrees(&Game::Anonymous { table: gen_anonymous(&mut rng, n, false) });
        }
    }

    #[test]
    fn additive_has_a_rule_per_other_player() {
        let pv = PairValues::from_fn(3, |i, j| (i * 3 + j) as f64);
        let net = additive_net(&pv);
        assert!((0..3).all(|i| net.rules(i).len() == 2));
        assert_eq!(net.rules(0)[0].condition.to_string(), "x1");
    }

    #[test]
    fn anonymous_has_a_rule_per_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = anonymous_net::<f64>(&gen_anonymous(&mut rng, 4, true));
        assert!((0..4).all(|i| net.rules(i).len() == 4));
    }

    #[test]
    fn w_chain_fires_on_the_worst_member() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pv: PairValues<f64> = gen_pair_values(&mut rng, PairClass::WGame, 4);
        let net = w_game_net(&pv).unwrap();
        for i in 0..4 {
            let order = pv.ascending_order(i);
            for s in PlayerSet::new(4).unwrap().coalitions_with(i) {
                let fired = net.satisfied(i, s);
                assert_eq!(fired.len(), 1);
                match order.iter().position(|&j| s.contains(j)) {
                    Some(pos) => assert_eq!(fired[0], pos),
                    None => assert_eq!(s, Coalition::singleton(i)),
                }
            }
        }
    }

    #[test]
    fn ties_are_rejected() {
        let pv = PairValues::from_fn(3, |_, _| 1.0);
        assert!(matches!(w_game_net(&pv), Err(Error::TiedRow { player: 0 })));
        assert!(b_game_net(&pv, &0.1).is_err());
    }
}
