use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core_model::{full_mask, Coalition, Player};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Friend,
    Enemy,
}

/// Friends and enemies. Every ordered pair `(i, j)`, `j != i`, is one or the
/// other; the relation need not be symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FriendLists", into = "FriendLists")]
pub struct FriendGraph {
    n: usize,
    friends: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct FriendLists {
    players: usize,
    friends: Vec<Vec<Player>>,
}

impl TryFrom<FriendLists> for FriendGraph {
    type Error = Error;

    fn try_from(lists: FriendLists) -> Result<Self> {
        if lists.friends.len() != lists.players {
            return Err(Error::InvalidInstance("one friend list per player".into()));
        }
        let mut g = FriendGraph::all_enemies(lists.players);
        for (i, fs) in lists.friends.iter().enumerate() {
            for &j in fs {
                if j >= lists.players || j == i {
                    return Err(Error::InvalidInstance(format!("bad friend {j} for player {i}")));
                }
                g.set(i, j, Relation::Friend);
            }
        }
        Ok(g)
    }
}

impl From<FriendGraph> for FriendLists {
    fn from(g: FriendGraph) -> Self {
        FriendLists {
            players: g.n,
            friends: (0..g.n).map(|i| g.friends_of(i).members().collect()).collect(),
        }
    }
}

impl FriendGraph {
    pub fn all_enemies(n: usize) -> Self {
        FriendGraph { n, friends: vec![0; n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Player, Player) -> Relation) -> Self {
        let mut g = FriendGraph::all_enemies(n);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                g.set(i, j, f(i, j));
            }
        }
        g
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: Player, j: Player, rel: Relation) {
        assert_ne!(i, j);
        match rel {
            Relation::Friend => self.friends[i] |= 1 << j,
            Relation::Enemy => self.friends[i] &= !(1 << j),
        }
    }

    pub fn relation(&self, i: Player, j: Player) -> Relation {
        if self.friends[i] >> j & 1 == 1 {
            Relation::Friend
        } else {
            Relation::Enemy
        }
    }

    /// Friend set of `i` as a mask; may be empty, hence the raw mask.
    pub fn friend_mask(&self, i: Player) -> u64 {
        self.friends[i]
    }

    pub fn enemy_mask(&self, i: Player) -> u64 {
        full_mask(self.n) & !self.friends[i] & !(1 << i)
    }

    fn friends_of(&self, i: Player) -> Members {
        Members(self.friends[i])
    }

    pub fn friends_in(&self, i: Player, s: Coalition) -> usize {
        (self.friend_mask(i) & s.mask()).count_ones() as usize
    }

    pub fn enemies_in(&self, i: Player, s: Coalition) -> usize {
        (self.enemy_mask(i) & s.mask()).count_ones() as usize
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).filter(|&j| j != i).all(|j| self.relation(i, j) == self.relation(j, i)))
    }
}

struct Members(u64);

impl Members {
    fn members(self) -> impl Iterator<Item = Player> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(p)
        })
    }
}

/// Friends appreciation or enemies aversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FriendsProfile {
    #[serde(rename = "fa")]
    Appreciation,
    #[serde(rename = "ea")]
    Aversion,
}

/// `FA: n|F ∩ S| - |E ∩ S|`, `EA: |F ∩ S| - n|E ∩ S|`.
pub fn eval_friends<T: Scalar>(fg: &FriendGraph, profile: FriendsProfile, i: Player, s: Coalition) -> Result<T> {
    if !s.contains(i) {
        return Err(Error::NotAMember { player: i, coalition: s });
    }
    let n = fg.players() as i64;
    let f = fg.friends_in(i, s) as i64;
    let e = fg.enemies_in(i, s) as i64;
    let v = match profile {
        FriendsProfile::Appreciation => n * f - e,
        FriendsProfile::Aversion => f - n * e,
    };
    Ok(T::from_int(v))
}

/// Symmetric graph with each unordered pair friends with probability `p`.
pub fn gen_friend_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, friend_prob: f64) -> FriendGraph {
    let mut g = FriendGraph::all_enemies(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(friend_prob.clamp(0.0, 1.0)) {
                g.set(i, j, Relation::Friend);
                g.set(j, i, Relation::Friend);
            }
        }
    }
    g
}
