use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{guard, Coalition, Player, PlayerSet, Valuation, SUBSET_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sub-coalitions of `S` containing `i` that `i` likes least.
pub fn avoid_set<T: Scalar, V: Valuation<T> + ?Sized>(v: &V, i: Player, s: Coalition) -> Result<Vec<Coalition>> {
    if !s.contains(i) {
        return Err(Error::NotAMember { player: i, coalition: s });
    }
    guard("avoid set", s.len(), SUBSET_LIMIT)?;
    let subs: Vec<(Coalition, T)> = s.subcoalitions_with(i).map(|c| (c, v.value(i, c))).collect();
    let min = subs
        .iter()
        .map(|(_, x)| x)
        .min_by(|a, b| a.partial_cmp(b).expect("comparable values"))
        .expect("{i} is always a sub-coalition")
        .clone();
    Ok(subs.into_iter().filter(|(_, x)| *x == min).map(|(c, _)| c).collect())
}

/// Exhaustive check of both bottom-responsiveness conditions:
///
/// 1. if every avoid set element of `S` beats every one of `T`, then `S ≻ T`;
/// 2. if the avoid sets meet and `|S| >= |T|`, then `S ≿ T`.
pub fn is_bottom_responsive<T: Scalar, V: Valuation<T> + ?Sized>(v: &V) -> Result<bool> {
    let ps = PlayerSet::new(v.players())?;
    guard("bottom responsiveness check", ps.len(), 10)?;
    for i in 0..ps.len() {
        let coalitions: Vec<Coalition> = ps.coalitions_with(i).collect();
        let avoid: Vec<Vec<Coalition>> =
            coalitions.iter().map(|&s| avoid_set(v, i, s)).collect::<Result<_>>()?;
        for (a, &s) in coalitions.iter().enumerate() {
            for (b, &t) in coalitions.iter().enumerate() {
                let (vs, vt) = (v.value(i, s), v.value(i, t));
                let dominates = avoid[a].iter().all(|&x| avoid[b].iter().all(|&y| v.value(i, x) > v.value(i, y)));
                if dominates && !(vs > vt) {
                    return Ok(false);
                }
                let meet = avoid[a].iter().any(|x| avoid[b].contains(x));
                if meet && s.len() >= t.len() && vs < vt {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A bottom-responsive family of pessimistic players:
///
/// `v_i(S) = (n + 1) * min(s_i, min_{j in S \ i} w_i(j)) + |S|`
///
/// The avoid set of `S` is the pair with `i`'s worst member, or `{i}` when
/// everyone in `S` beats the singleton value `s_i`. All of `s_i` and the
/// `w_i(j)` are distinct, so avoid sets are single coalitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PessimistGame<T> {
    singletons: Vec<T>,
    weights: Vec<Vec<T>>,
}

impl<T: Scalar> PessimistGame<T> {
    pub fn new(singletons: Vec<T>, weights: Vec<Vec<T>>) -> Result<Self> {
        let n = singletons.len();
        if n == 0 || weights.len() != n || weights.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance("pessimist game needs n singletons and an n x n table".into()));
        }
        for i in 0..n {
            let mut row: Vec<&T> = (0..n).filter(|&j| j != i).map(|j| &weights[i][j]).collect();
            row.push(&singletons[i]);
            for a in 0..row.len() {
                if row[a + 1..].iter().any(|b| *b == row[a]) {
                    return Err(Error::InvalidInstance(format!("row {i} of the pessimist game has ties")));
                }
            }
        }
        Ok(PessimistGame { singletons, weights })
    }

    pub fn players(&self) -> usize {
        self.singletons.len()
    }

    pub fn singleton(&self, i: Player) -> &T {
        &self.singletons[i]
    }

    pub fn value(&self, i: Player, s: Coalition) -> Result<T> {
        if !s.contains(i) {
            return Err(Error::NotAMember { player: i, coalition: s });
        }
        let mut worst = self.singletons[i].clone();
        for j in s.members().filter(|&j| j != i) {
            if self.weights[i][j] < worst {
                worst = self.weights[i][j].clone();
            }
        }
        let scale = T::from_int(self.players() as i64 + 1);
        Ok(scale * worst + T::from_int(s.len() as i64))
    }
}

/// Singleton and pair weights are a random permutation of `0..n` per player,
/// so `i` dislikes about half of the others more than being alone.
pub fn gen_pessimist<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PessimistGame<T> {
    let mut singletons = Vec::with_capacity(n);
    let mut weights = vec![vec![T::zero(); n]; n];
    for (i, row) in weights.iter_mut().enumerate() {
        let mut ranks: Vec<i64> = (0..n as i64).collect();
        ranks.shuffle(rng);
        singletons.push(T::from_int(ranks[i]));
        for j in (0..n).filter(|&j| j != i) {
            row[j] = T::from_int(ranks[j]);
        }
    }
    PessimistGame { singletons, weights }
}
