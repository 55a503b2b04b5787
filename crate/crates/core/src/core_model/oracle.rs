use num_rational::BigRational;

use super::coalition::{full_mask, guard, Coalition, Player, PARTITION_LIMIT, SUBSET_LIMIT};
use super::partition::{Partition, SetPartitions};
use super::sample::LabeledSample;
use super::valuation::Valuation;
use crate::distributions::CoalitionDistribution;
use crate::error::Result;
use crate::scalar::Scalar;

/// `S` core-blocks `pi` iff every member strictly prefers `S` to its block.
pub fn blocks<T: Scalar, V: Valuation<T> + ?Sized>(s: Coalition, pi: &Partition, v: &V) -> bool {
    s.members().all(|i| v.value(i, s) > v.value(i, pi.block_of(i)))
}

/// First blocking coalition of `pi` in mask order.
pub fn find_blocking<T: Scalar, V: Valuation<T> + ?Sized>(pi: &Partition, v: &V) -> Result<Option<Coalition>> {
    let n = pi.players();
    guard("blocking search", n, SUBSET_LIMIT)?;
    // blocks of pi never block
    let current: Vec<T> = (0..n).map(|i| v.value(i, pi.block_of(i))).collect();
    Ok((1..=full_mask(n))
        .map(|m| Coalition::from_mask(m).unwrap())
        .find(|&s| s.members().all(|i| v.value(i, s) > current[i])))
}

pub fn is_core_stable<T: Scalar, V: Valuation<T> + ?Sized>(pi: &Partition, v: &V) -> Result<bool> {
    Ok(find_blocking(pi, v)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreResult {
    Stable(Partition),
    Empty,
}

impl CoreResult {
    pub fn partition(&self) -> Option<&Partition> {
        match self {
            CoreResult::Stable(p) => Some(p),
            CoreResult::Empty => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CoreResult::Empty)
    }
}

/// Fixed-width bit set over all coalition masks of `n` players.
#[derive(Clone)]
struct MaskSet {
    words: Vec<u64>,
}

impl MaskSet {
    fn empty(n: usize) -> Self {
        MaskSet { words: vec![0; (1usize << n).div_ceil(64)] }
    }

    fn insert(&mut self, mask: u64) {
        self.words[(mask / 64) as usize] |= 1 << (mask % 64);
    }

    fn first(&self) -> Option<u64> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k as u64 * 64 + w.trailing_zeros() as u64)
    }
}

/// Per player `i` and block `C` containing `i`, the coalitions `S` that either
/// do not contain `i` or that `i` strictly prefers to `C`.
struct Improvements {
    n: usize,
    sets: Vec<Vec<MaskSet>>,
}

impl Improvements {
    fn build<T: Scalar, V: Valuation<T> + ?Sized>(v: &V) -> Self {
        let n = v.players();
        let full = full_mask(n);
        let sets = (0..n)
            .map(|i| {
                let bit = 1u64 << i;
                let mut with_i: Vec<(u64, T)> = (1..=full)
                    .filter(|m| m & bit != 0)
                    .map(|m| (m, v.value(i, Coalition::from_mask(m).unwrap())))
                    .collect();
                // descending by value
                with_i.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("comparable values"));
                let mut running = MaskSet::empty(n);
                for m in 1..=full {
                    if m & bit == 0 {
                        running.insert(m);
                    }
                }
                let mut per_block = vec![MaskSet::empty(0); 1usize << n];
                let mut k = 0;
                while k < with_i.len() {
                    let mut end = k;
                    while end < with_i.len() && with_i[end].1 == with_i[k].1 {
                        end += 1;
                    }
                    for (m, _) in &with_i[k..end] {
                        per_block[*m as usize] = running.clone();
                    }
                    for (m, _) in &with_i[k..end] {
                        running.insert(*m);
                    }
                    k = end;
                }
                per_block
            })
            .collect();
        Improvements { n, sets }
    }

    fn first_blocking(&self, pi: &Partition) -> Option<Coalition> {
        let mut acc = self.sets[0][pi.block_of(0).mask() as usize].clone();
        for i in 1..self.n {
            let other = &self.sets[i][pi.block_of(i).mask() as usize];
            for (a, b) in acc.words.iter_mut().zip(&other.words) {
                *a &= b;
            }
        }
        // mask 0 is not a coalition
        acc.words[0] &= !1;
        acc.first().and_then(Coalition::from_mask)
    }
}

/// Exhaustive core oracle: the first core-stable partition in
/// restricted-growth order, or `Empty`.
pub fn solve_core<T: Scalar, V: Valuation<T> + ?Sized>(v: &V) -> Result<CoreResult> {
    solve_core_with_limit(v, PARTITION_LIMIT)
}

pub fn solve_core_with_limit<T: Scalar, V: Valuation<T> + ?Sized>(v: &V, limit: usize) -> Result<CoreResult> {
    let n = v.players();
    guard("core search", n, limit)?;
    let improvements = Improvements::build(v);
    for labels in SetPartitions::new(n) {
        let pi = Partition::from_labels(&labels);
        if improvements.first_blocking(&pi).is_none() {
            return Ok(CoreResult::Stable(pi));
        }
    }
    Ok(CoreResult::Empty)
}

/// Every partition together with one blocking coalition, or `None` when the
/// partition is core-stable.
pub fn core_certificate<T: Scalar, V: Valuation<T> + ?Sized>(
    v: &V,
    limit: usize,
) -> Result<Vec<(Partition, Option<Coalition>)>> {
    let n = v.players();
    guard("core certificate", n, limit)?;
    let improvements = Improvements::build(v);
    Ok(SetPartitions::new(n)
        .map(|labels| {
            let pi = Partition::from_labels(&labels);
            let witness = improvements.first_blocking(&pi);
            (pi, witness)
        })
        .collect())
}

/// No sampled coalition blocks `pi`, judged with the sampled values and the
/// current block values `current(i) = v_i(pi(i))`.
pub fn consistent_with_values<T: Scalar>(sample: &LabeledSample<T>, current: impl Fn(Player) -> T) -> bool {
    sample.iter().all(|e| e.iter().any(|(i, value)| *value <= current(i)))
}

/// Consistency: no coalition of the sample core-blocks `pi`
/// when `v` supplies the members' current block values.
pub fn consistent_with_sample<T: Scalar, V: Valuation<T> + ?Sized>(
    pi: &Partition,
    sample: &LabeledSample<T>,
    v: &V,
) -> bool {
    consistent_with_values(sample, |i| v.value(i, pi.block_of(i)))
}

/// Sampled entries that block `pi`.
pub fn blocking_entries<'a, T: Scalar, V: Valuation<T> + ?Sized>(
    pi: &Partition,
    sample: &'a LabeledSample<T>,
    v: &V,
) -> Vec<&'a super::sample::SampleEntry<T>> {
    sample
        .iter()
        .filter(|e| e.iter().all(|(i, value)| *value > v.value(i, pi.block_of(i))))
        .collect()
}

/// Exact `Pr_{S ~ dist}[S core-blocks pi]`.
pub fn blocking_probability<T: Scalar, V: Valuation<T> + ?Sized>(
    pi: &Partition,
    v: &V,
    dist: &CoalitionDistribution,
) -> Result<BigRational> {
    let n = pi.players();
    guard("blocking probability", n, SUBSET_LIMIT)?;
    let current: Vec<T> = (0..n).map(|i| v.value(i, pi.block_of(i))).collect();
    dist.exact_prob(|s| s.members().all(|i| v.value(i, s) > current[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::valuation::{GameClass, ValueTable};

    fn additive(n: usize, pairs: &[(usize, usize, f64)]) -> ValueTable<f64> {
        ValueTable::from_fn(n, GameClass::AdditivelySeparable, |i, s| {
            pairs.iter().filter(|(a, b, _)| *a == i && s.contains(*b)).map(|t| t.2).sum()
        })
    }

    #[test]
    fn own_block_never_blocks() {
        let v = additive(3, &[(0, 2, 5.0), (2, 0, 5.0)]);
        let pi = Partition::new(3, vec![Coalition::pair(0, 1), Coalition::singleton(2)]).unwrap();
        for b in pi.blocks() {
            assert!(!blocks(*b, &pi, &v));
        }
    }

    #[test]
    fn mutual_friends_block() {
        let v = additive(3, &[(0, 2, 5.0), (2, 0, 5.0)]);
        let pi = Partition::new(3, vec![Coalition::pair(0, 1), Coalition::singleton(2)]).unwrap();
        assert!(blocks(Coalition::pair(0, 2), &pi, &v));
        assert_eq!(find_blocking(&pi, &v).unwrap(), Some(Coalition::pair(0, 2)));
    }

    #[test]
    fn single_player_is_stable() {
        let v = ValueTable::from_fn(1, GameClass::Table, |_, _| 3.0);
        assert_eq!(solve_core(&v).unwrap(), CoreResult::Stable(Partition::singletons(1).unwrap()));
    }

    #[test]
    fn consistency_uses_sampled_values() {
        let v = additive(3, &[(0, 2, 5.0), (2, 0, 5.0)]);
        let pi = Partition::new(3, vec![Coalition::pair(0, 1), Coalition::singleton(2)]).unwrap();
        let empty = LabeledSample::<f64>::default();
        assert!(consistent_with_sample(&pi, &empty, &v));
        let own = LabeledSample::observe(&v, [Coalition::pair(0, 1)]);
        assert!(consistent_with_sample(&pi, &own, &v));
        let hostile = LabeledSample::observe(&v, [Coalition::pair(0, 2)]);
        assert!(!consistent_with_sample(&pi, &hostile, &v));
        assert_eq!(blocking_entries(&pi, &hostile, &v).len(), 1);
    }

    #[test]
    fn guards_reject_large_instances() {
        let v = ValueTable::from_fn(13, GameClass::Table, |_, _| 0.0);
        assert!(solve_core(&v).is_err());
    }

    #[test]
    fn bitset_oracle_agrees_with_direct_check() {
        // player i likes coalitions by a fixed pseudo-random score
        let v = ValueTable::from_fn(5, GameClass::Table, |i, s| ((s.mask() * 2654435761 + i as u64 * 40503) % 17) as f64);
        for (pi, witness) in core_certificate(&v, PARTITION_LIMIT).unwrap() {
            let direct = find_blocking(&pi, &v).unwrap();
            assert_eq!(witness, direct, "partition {pi}");
            if let Some(s) = witness {
                assert!(blocks(s, &pi, &v));
            }
        }
    }
}
