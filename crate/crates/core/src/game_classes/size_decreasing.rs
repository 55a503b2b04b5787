use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{full_mask, Coalition, Player, SUBSET_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A game in which every player strictly prefers smaller coalitions:
/// `|S| < |T|` implies `v_i(S) > v_i(T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeDecreasingGame<T> {
    n: usize,
    // values[i][mask]; entries for masks without i are unused
    values: Vec<Vec<T>>,
}

impl<T: Scalar> SizeDecreasingGame<T> {
    /// Fails if the table is not size-decreasing.
    pub fn new(n: usize, values: Vec<Vec<T>>) -> Result<Self> {
        if n == 0 || n > SUBSET_LIMIT {
            return Err(Error::PlayerCount(n));
        }
        let rows = 1usize << n;
        if values.len() != n || values.iter().any(|r| r.len() != rows) {
            return Err(Error::InvalidInstance("size-decreasing table needs 2^n entries per player".into()));
        }
        let game = SizeDecreasingGame { n, values };
        if !game.is_size_decreasing() {
            return Err(Error::InvalidInstance("values are not strictly decreasing in coalition size".into()));
        }
        Ok(game)
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: Player, s: Coalition) -> Result<T> {
        if !s.contains(i) {
            return Err(Error::NotAMember { player: i, coalition: s });
        }
        Ok(self.values[i][s.mask() as usize].clone())
    }

    /// Worst value per size must beat the best value of the next size.
    pub fn is_size_decreasing(&self) -> bool {
        (0..self.n).all(|i| {
            let mut worst: Vec<Option<&T>> = vec![None; self.n + 1];
            let mut best: Vec<Option<&T>> = vec![None; self.n + 1];
            for m in (1..=full_mask(self.n)).filter(|m| m >> i & 1 == 1) {
                let k = m.count_ones() as usize;
                let v = &self.values[i][m as usize];
                if worst[k].is_none_or(|w| v < w) {
                    worst[k] = Some(v);
                }
                if best[k].is_none_or(|b| v > b) {
                    best[k] = Some(v);
                }
            }
            (1..self.n).all(|k| worst[k].unwrap() > best[k + 1].unwrap())
        })
    }
}

/// `v_i(S) = (n - |S|) B + r` with `B = n^2` and `r` uniform in `[0, B)`.
pub fn gen_size_decreasing<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> SizeDecreasingGame<T> {
    assert!(n > 0 && n <= SUBSET_LIMIT, "size-decreasing tables are dense");
    let band = (n * n) as i64;
    let values = (0..n)
        .map(|i| {
            (0..1u64 << n)
                .map(|m| {
                    if m >> i & 1 == 0 {
                        return T::zero();
                    }
                    let k = m.count_ones() as i64;
                    T::from_int((n as i64 - k) * band + rng.gen_range(0..band))
                })
                .collect()
        })
        .collect();
    SizeDecreasingGame { n, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::PlayerSet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_decrease_in_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g: SizeDecreasingGame<f64> = gen_size_decreasing(&mut rng, 6);
        let ps = PlayerSet::new(6).unwrap();
        for i in 0..6 {
            for s in ps.coalitions_with(i) {
                for t in ps.coalitions_with(i) {
                    if s.len() < t.len() {
                        assert!(g.value(i, s).unwrap() > g.value(i, t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_decreasing_tables() {
        let values = vec![vec![0.0, 1.0, 0.0, 2.0], vec![0.0, 0.0, 1.0, 0.0]];
        assert!(SizeDecreasingGame::new(2, values).is_err());
        let values = vec![vec![0.0, 2.0, 0.0, 1.0], vec![0.0, 0.0, 2.0, 1.0]];
        assert!(SizeDecreasingGame::new(2, values).is_ok());
    }
}
