use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Player = usize;

/// Hard ceiling imposed by the 64-bit mask encoding.
pub const MAX_PLAYERS: usize = 63;

/// Default ceiling for loops over all `2^n - 1` coalitions.
pub const SUBSET_LIMIT: usize = 20;

/// Default ceiling for loops over all `Bell(n)` partitions.
pub const PARTITION_LIMIT: usize = 12;

/// The player set `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlayerSet {
    n: usize,
}

impl PlayerSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::PlayerCount(n));
        }
        Ok(PlayerSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition(self.full_mask())
    }

    /// All non-empty coalitions in increasing mask order.
    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        (1..=self.full_mask()).map(Coalition)
    }

    /// All coalitions that contain `player`.
    pub fn coalitions_with(&self, player: Player) -> impl Iterator<Item = Coalition> {
        let bit = 1u64 << player;
        let rest = self.full_mask() & !bit;
        submasks(rest).map(move |m| Coalition(m | bit))
    }

    pub fn check_subset_guard(&self, what: &'static str, limit: usize) -> Result<()> {
        guard(what, self.n, limit)
    }
}

pub fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::Guard { what, n, limit })
    } else {
        Ok(())
    }
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every submask of `mask`, including the empty mask and `mask` itself,
/// in increasing numeric order.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == mask { None } else { Some(((current | !mask).wrapping_add(1)) & mask) };
        Some(current)
    })
}

/// A non-empty set of players, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u64);

impl Coalition {
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Coalition(mask))
    }

    pub fn from_players<I: IntoIterator<Item = Player>>(players: I) -> Result<Self> {
        let mut mask = 0u64;
        for p in players {
            if p >= MAX_PLAYERS {
                return Err(Error::PlayerCount(p + 1));
            }
            mask |= 1 << p;
        }
        Coalition::from_mask(mask).ok_or_else(|| Error::InvalidSample("empty coalition".into()))
    }

    pub fn singleton(player: Player) -> Self {
        Coalition(1 << player)
    }

    pub fn pair(a: Player, b: Player) -> Self {
        Coalition((1 << a) | (1 << b))
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, player: Player) -> bool {
        player < 64 && self.0 >> player & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: &Coalition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn members(&self) -> Members {
        Members(self.0)
    }

    /// Highest player index plus one.
    pub fn span(&self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn without(&self, player: Player) -> Option<Coalition> {
        Coalition::from_mask(self.0 & !(1 << player))
    }

    pub fn with(&self, player: Player) -> Coalition {
        Coalition(self.0 | 1 << player)
    }

    /// Sub-coalitions of `self` that still contain `player`.
    pub fn subcoalitions_with(&self, player: Player) -> impl Iterator<Item = Coalition> {
        let bit = 1u64 << player;
        submasks(self.0 & !bit).map(move |m| Coalition(m | bit))
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = Player;

    fn next(&mut self) -> Option<Player> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Members {}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members())
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let players = Vec::<Player>::deserialize(d)?;
        Coalition::from_players(players).map_err(serde::de::Error::custom)
    }
}
