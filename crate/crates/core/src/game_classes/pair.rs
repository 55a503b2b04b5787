use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{Coalition, Player};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pairwise values `v_i(j)` plus an explicit singleton value `v_i({i})`.
///
/// The singleton slot only matters for W- and B-games; additive and
/// fractional games value a singleton at the empty sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairValues<T> {
    values: Vec<Vec<T>>,
    singletons: Vec<T>,
}

impl<T: Scalar> PairValues<T> {
    /// `values[i][j]` for `j != i`; the diagonal is ignored. Singleton values
    /// default to zero.
    pub fn new(values: Vec<Vec<T>>) -> Result<Self> {
        let n = values.len();
        if n == 0 || values.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("pair table must be square and non-empty".into()));
        }
        let mut values = values;
        for (i, row) in values.iter_mut().enumerate() {
            row[i] = T::zero();
        }
        Ok(PairValues { values, singletons: vec![T::zero(); n] })
    }

    pub fn with_singletons(mut self, singletons: Vec<T>) -> Result<Self> {
        if singletons.len() != self.players() {
            return Err(Error::InvalidInstance("one singleton value per player".into()));
        }
        self.singletons = singletons;
        Ok(self)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Player, Player) -> T) -> Self {
        let values = (0..n).map(|i| (0..n).map(|j| if i == j { T::zero() } else { f(i, j) }).collect()).collect();
        PairValues { values, singletons: vec![T::zero(); n] }
    }

    pub fn players(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: Player, j: Player) -> &T {
        debug_assert_ne!(i, j);
        &self.values[i][j]
    }

    pub fn set(&mut self, i: Player, j: Player, value: T) {
        assert_ne!(i, j, "diagonal entries are unused");
        self.values[i][j] = value;
    }

    pub fn singleton(&self, i: Player) -> &T {
        &self.singletons[i]
    }

    /// No two other players share a value in row `i`.
    pub fn row_is_strict(&self, i: Player) -> bool {
        let others = self.others(i);
        others.iter().enumerate().all(|(a, &j)| others[a + 1..].iter().all(|&k| self.values[i][j] != self.values[i][k]))
    }

    pub fn is_strict(&self) -> bool {
        (0..self.players()).all(|i| self.row_is_strict(i))
    }

    /// Other players sorted by `i`'s value, least preferred first; ties by id.
    pub fn ascending_order(&self, i: Player) -> Vec<Player> {
        let mut others = self.others(i);
        others.sort_by(|&a, &b| self.values[i][a].partial_cmp(&self.values[i][b]).unwrap().then(a.cmp(&b)));
        others
    }

    fn others(&self, i: Player) -> Vec<Player> {
        (0..self.players()).filter(|&j| j != i).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PairValues<U> {
        PairValues {
            values: self.values.iter().map(|row| row.iter().map(&f).collect()).collect(),
            singletons: self.singletons.iter().map(&f).collect(),
        }
    }
}

fn member_check(i: Player, s: Coalition) -> Result<()> {
    if s.contains(i) {
        Ok(())
    } else {
        Err(Error::NotAMember { player: i, coalition: s })
    }
}

/// `sum_{j in S \ i} v_i(j)`.
pub fn eval_additively_separable<T: Scalar>(pv: &PairValues<T>, i: Player, s: Coalition) -> Result<T> {
    member_check(i, s)?;
    Ok(s.members().filter(|&j| j != i).fold(T::zero(), |acc, j| acc + pv.get(i, j).clone()))
}

/// The additive sum normalized by `|S|`.
pub fn eval_fractional<T: Scalar>(pv: &PairValues<T>, i: Player, s: Coalition) -> Result<T> {
    let sum = eval_additively_separable(pv, i, s)?;
    Ok(sum / T::from_int(s.len() as i64))
}

/// Value of the worst other member; the stored singleton value for `{i}`.
pub fn eval_w_game<T: Scalar>(pv: &PairValues<T>, i: Player, s: Coalition) -> Result<T> {
    member_check(i, s)?;
    let worst = s
        .members()
        .filter(|&j| j != i)
        .map(|j| pv.get(i, j))
        .min_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(worst.unwrap_or_else(|| pv.singleton(i)).clone())
}

/// Value of the best other member minus `alpha` per other member, so that
/// smaller coalitions win ties on the best member.
pub fn eval_b_game<T: Scalar>(pv: &PairValues<T>, alpha: &T, i: Player, s: Coalition) -> Result<T> {
    member_check(i, s)?;
    let best = s
        .members()
        .filter(|&j| j != i)
        .map(|j| pv.get(i, j))
        .max_by(|a, b| a.partial_cmp(b).unwrap());
    match best {
        None => Ok(pv.singleton(i).clone()),
        Some(best) => Ok(best.clone() - alpha.clone() * T::from_int(s.len() as i64 - 1)),
    }
}

/// The size penalty for B-games with integer pair values: `1 / (2n)`.
pub fn default_b_alpha<T: Scalar>(n: usize) -> T {
    T::from_ratio(1, 2 * n as i64)
}

/// Which pairwise class a generated table is for; W-games need strict rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    AdditivelySeparable,
    Fractional,
    WGame,
    BGame,
}

/// Integer pair values uniform in `[-n^2, n^2]`; W- and B-game rows are
/// redrawn until all entries are distinct.
pub fn gen_pair_values<T: Scalar, R: Rng + ?Sized>(rng: &mut R, class: PairClass, n: usize) -> PairValues<T> {
    let bound = (n * n) as i64;
    let strict = matches!(class, PairClass::WGame | PairClass::BGame);
    let rows = (0..n)
        .map(|i| loop {
            let row: Vec<i64> = (0..n).map(|j| if i == j { 0 } else { rng.gen_range(-bound..=bound) }).collect();
            if !strict || {
                let mut seen: Vec<i64> = row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            } {
                break row.into_iter().map(T::from_int).collect::<Vec<T>>();
            }
        })
        .collect();
    PairValues::new(rows).expect("square table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> PairValues<f64> {
        // v_0(1) = 3, v_0(2) = -1
        PairValues::from_fn(3, |i, j| match (i, j) {
            (0, 1) => 3.0,
            (0, 2) => -1.0,
            _ => 1.0,
        })
    }

    #[test]
    fn worked_values() {
        let pv = small();
        let s = Coalition::from_players([0, 1, 2]).unwrap();
        assert_eq!(eval_additively_separable(&pv, 0, s).unwrap(), 2.0);
        assert!((eval_fractional(&pv, 0, s).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(eval_w_game(&pv, 0, s).unwrap(), -1.0);
        assert!((eval_b_game(&pv, &0.1, 0, s).unwrap() - 2.8).abs() < 1e-12);
        assert_eq!(eval_w_game(&pv, 0, Coalition::pair(0, 1)).unwrap(), 3.0);
    }

    #[test]
    fn singletons() {
        let pv = small().with_singletons(vec![-4.0, 0.0, 0.0]).unwrap();
        let s = Coalition::singleton(0);
        assert_eq!(eval_additively_separable(&pv, 0, s).unwrap(), 0.0);
        assert_eq!(eval_fractional(&pv, 0, s).unwrap(), 0.0);
        assert_eq!(eval_w_game(&pv, 0, s).unwrap(), -4.0);
        assert_eq!(eval_b_game(&pv, &0.1, 0, s).unwrap(), -4.0);
    }

    #[test]
    fn exact_fractional() {
        let pv = small().map(|v| crate::scalar::convert::<f64, BigRational>(v));
        let s = Coalition::from_players([0, 1, 2]).unwrap();
        assert_eq!(eval_fractional(&pv, 0, s).unwrap(), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn non_members_are_rejected() {
        let pv = small();
        let s = Coalition::pair(1, 2);
        assert!(matches!(eval_additively_separable(&pv, 0, s), Err(Error::NotAMember { .. })));
        assert!(eval_w_game(&pv, 0, s).is_err());
        assert!(eval_b_game(&pv, &0.1, 0, s).is_err());
        assert!(eval_fractional(&pv, 0, s).is_err());
    }

    #[test]
    fn b_game_prefers_smaller_on_equal_best() {
        let pv = PairValues::from_fn(4, |_, j| j as f64);
        let alpha = default_b_alpha::<f64>(4);
        let pair = Coalition::pair(0, 3);
        let triple = Coalition::from_players([0, 1, 3]).unwrap();
        assert!(eval_b_game(&pv, &alpha, 0, pair).unwrap() > eval_b_game(&pv, &alpha, 0, triple).unwrap());
    }

    #[test]
    fn generated_w_rows_are_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pv: PairValues<f64> = gen_pair_values(&mut rng, PairClass::WGame, 8);
        assert!(pv.is_strict());
        for i in 0..8 {
            let mut row: Vec<i64> = (0..8).filter(|&j| j != i).map(|j| *pv.get(i, j) as i64).collect();
            assert!(row.iter().all(|v| v.abs() <= 64));
            row.sort();
            row.dedup();
            assert_eq!(row.len(), 7);
        }
    }

    #[test]
    fn ascending_order_sorts_by_value() {
        let pv = small();
        assert_eq!(pv.ascending_order(0), vec![2, 1]);
    }
}
