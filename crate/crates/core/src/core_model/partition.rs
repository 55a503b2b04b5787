use std::fmt;

use serde::{Deserialize, Serialize};

use super::coalition::{full_mask, Coalition, Player, PlayerSet};
use crate::error::{Error, Result};

/// A coalition structure over `{0, .., n-1}`.
///
/// Blocks are kept sorted by their smallest member, so two partitions are
/// equal exactly when they group the players the same way.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Coalition>,
    block_of: Vec<u8>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Coalition>) -> Result<Self> {
        PlayerSet::new(n)?;
        let mut seen = 0u64;
        for b in &blocks {
            if b.mask() & seen != 0 {
                return Err(Error::InvalidPartition(format!("block {b} overlaps an earlier block")));
            }
            if b.mask() & !full_mask(n) != 0 {
                return Err(Error::InvalidPartition(format!("block {b} has players outside 0..{n}")));
            }
            seen |= b.mask();
        }
        if seen != full_mask(n) {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {} of {n} players",
                seen.count_ones()
            )));
        }
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        let mut block_of = vec![0u8; n];
        for (k, b) in blocks.iter().enumerate() {
            for p in b.members() {
                block_of[p] = k as u8;
            }
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Partition::new(n, (0..n).map(Coalition::singleton).collect())
    }

    /// Builds a partition from a restricted-growth string: `labels[p]` is the
    /// block index of player `p`.
    pub fn from_labels(labels: &[u8]) -> Self {
        let k = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut masks = vec![0u64; k];
        for (p, &l) in labels.iter().enumerate() {
            masks[l as usize] |= 1 << p;
        }
        let blocks: Vec<_> = masks.into_iter().filter_map(Coalition::from_mask).collect();
        Partition::new(labels.len(), blocks).expect("labels describe a partition")
    }

    pub fn players(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// `pi(i)`, the block containing `player`.
    pub fn block_of(&self, player: Player) -> Coalition {
        self.blocks[self.block_of[player] as usize]
    }

    pub fn contains_block(&self, c: &Coalition) -> bool {
        c.members().next().is_some_and(|p| self.block_of(p) == *c)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Vec<Player>>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson { blocks: self.blocks.iter().map(|b| b.members().collect()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PartitionJson::deserialize(d)?;
        let n = json.blocks.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let blocks = json
            .blocks
            .into_iter()
            .map(Coalition::from_players)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Partition::new(n, blocks).map_err(serde::de::Error::custom)
    }
}

/// Restricted-growth strings of length `n` in lexicographic order, one per
/// set partition of `{0, .., n-1}`.
pub struct SetPartitions {
    labels: Vec<u8>,
    // prefix maxima: maxima[p] = max(labels[0..p])
    maxima: Vec<u8>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions { labels: vec![0; n], maxima: vec![0; n], done: n == 0 }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let current = self.labels.clone();
        let n = self.labels.len();
        // find the rightmost position that can still be incremented
        let mut p = n;
        loop {
            if p <= 1 {
                self.done = true;
                break;
            }
            p -= 1;
            if self.labels[p] <= self.maxima[p] {
                self.labels[p] += 1;
                let prefix_max = self.maxima[p].max(self.labels[p]);
                for q in p + 1..n {
                    self.labels[q] = 0;
                    self.maxima[q] = prefix_max;
                }
                break;
            }
        }
        Some(current)
    }
}

/// Every partition of `n` players, in restricted-growth lexicographic order.
pub fn all_partitions(n: usize) -> impl Iterator<Item = Partition> {
    SetPartitions::new(n).map(|labels| Partition::from_labels(&labels))
}

/// Bell numbers by the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgs_counts_are_bell_numbers() {
        for n in 1..=8 {
            assert_eq!(SetPartitions::new(n).count() as u128, bell(n), "n = {n}");
        }
        assert_eq!(bell(12), 4_213_597);
    }

    #[test]
    fn rgs_order_is_lexicographic_and_valid() {
        let all: Vec<_> = SetPartitions::new(4).collect();
        assert_eq!(all.first().unwrap(), &vec![0, 0, 0, 0]);
        assert_eq!(all.last().unwrap(), &vec![0, 1, 2, 3]);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        for labels in &all {
            let mut max = 0;
            for (p, &l) in labels.iter().enumerate() {
                assert!(p == 0 && l == 0 || l <= max + 1);
                max = max.max(l);
            }
        }
    }

    #[test]
    fn partitions_are_distinct() {
        let all: std::collections::HashSet<_> = all_partitions(6).collect();
        assert_eq!(all.len() as u128, bell(6));
    }

    #[test]
    fn validation() {
        let c = |ps: &[usize]| Coalition::from_players(ps.iter().copied()).unwrap();
        assert!(Partition::new(3, vec![c(&[0, 1]), c(&[2])]).is_ok());
        assert!(Partition::new(3, vec![c(&[0, 1]), c(&[1, 2])]).is_err());
        assert!(Partition::new(3, vec![c(&[0, 1])]).is_err());
        assert!(Partition::new(3, vec![c(&[0, 1]), c(&[2, 3])]).is_err());
        let p = Partition::new(3, vec![c(&[2]), c(&[0, 1])]).unwrap();
        assert_eq!(p.block_of(1), c(&[0, 1]));
        assert_eq!(p.blocks()[0], c(&[0, 1]));
    }

    #[test]
    fn json_format() {
        let p = Partition::new(3, vec![Coalition::pair(0, 1), Coalition::singleton(2)]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"blocks":[[0,1],[2]]}"#);
        let back: Partition = serde_json::from_str(r#"{"blocks":[[2],[1,0]]}"#).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Partition>(r#"{"blocks":[[0,1],[1]]}"#).is_err());
    }
}
