use crate::core_model::{guard, Coalition, Partition, SetPartitions, Valuation, PARTITION_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrcVerdict {
    /// No instance has a partition left unblocked by the sample.
    AllEmpty,
    /// A partition unblocked by the sample in every instance.
    CommonPartition(Partition),
    /// Indices of two instances whose consistent sets do not meet. When no
    /// single pair is disjoint, the second index is where the running
    /// intersection from the first instance became empty.
    Violated { first: usize, second: usize },
}

/// Partitions that no sampled coalition blocks, as a bit per partition in
/// restricted-growth order.
fn consistent_set<T: Scalar, V: Valuation<T> + ?Sized>(v: &V, partitions: &[Partition], sample: &[Coalition]) -> Vec<bool> {
    partitions
        .iter()
        .map(|pi| {
            let current: Vec<T> = (0..v.players()).map(|i| v.value(i, pi.block_of(i))).collect();
            !sample.iter().any(|&s| s.members().all(|i| v.value(i, s) > current[i]))
        })
        .collect()
}

/// Sample resistant core check on a finite family that must agree on every
/// sampled coalition.
pub fn check_src<T: Scalar, V: Valuation<T>>(instances: &[V], sample: &[Coalition]) -> Result<SrcVerdict> {
    let Some(first) = instances.first() else {
        return Ok(SrcVerdict::AllEmpty);
    };
    let n = first.players();
    guard("sample resistant core check", n, PARTITION_LIMIT)?;
    if instances.iter().any(|v| v.players() != n) {
        return Err(Error::InvalidInstance("instances have different player counts".into()));
    }
    for &s in sample {
        let agree = instances
            .iter()
            .all(|v| s.members().all(|i| v.value(i, s).same_value(&first.value(i, s))));
        if !agree {
            return Err(Error::Disagreement(s));
        }
    }
    let partitions: Vec<Partition> = SetPartitions::new(n).map(|l| Partition::from_labels(&l)).collect();
    let sets: Vec<Vec<bool>> = instances.iter().map(|v| consistent_set(v, &partitions, sample)).collect();
    if sets.iter().all(|c| !c.contains(&true)) {
        return Ok(SrcVerdict::AllEmpty);
    }
    if let Some(k) = (0..partitions.len()).find(|&k| sets.iter().all(|c| c[k])) {
        return Ok(SrcVerdict::CommonPartition(partitions[k].clone()));
    }
    let meets = |a: &[bool], b: &[bool]| a.iter().zip(b).any(|(x, y)| *x && *y);
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if !meets(&sets[a], &sets[b]) {
                return Ok(SrcVerdict::Violated { first: a, second: b });
            }
        }
    }
    let mut running = sets[0].clone();
    for (b, c) in sets.iter().enumerate().skip(1) {
        for (x, y) in running.iter_mut().zip(c) {
            *x &= *y;
        }
        if !running.contains(&true) {
            return Ok(SrcVerdict::Violated { first: 0, second: b });
        }
    }
    unreachable!("an empty intersection empties the running one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::{solve_core, PlayerSet};
    use crate::game_classes::{counterexample, Game};

    fn anon(t: crate::game_classes::AnonymousTable<f64>) -> Game<f64> {
        Game::Anonymous { table: t }
    }

    #[test]
    fn twins_on_the_restricted_support() {
        let family = [anon(counterexample::instance_i1()), anon(counterexample::instance_i2())];
        let support: Vec<Coalition> = PlayerSet::new(7).unwrap().coalitions().filter(|&s| counterexample::in_support(s)).collect();
        assert!(solve_core(&family[0]).unwrap().is_empty());
        let verdict = check_src(&family, &support).unwrap();
        assert_eq!(verdict, SrcVerdict::Violated { first: 0, second: 1 });
    }

    #[test]
    fn empty_sample_keeps_a_stable_partition() {
        let game = anon(counterexample::instance_i2());
        assert!(matches!(check_src(&[game], &[]).unwrap(), SrcVerdict::CommonPartition(_)));
    }

    #[test]
    fn identical_instances_never_violate() {
        let g = anon(counterexample::instance_i1());
        let all: Vec<Coalition> = PlayerSet::new(7).unwrap().coalitions().collect();
        assert_eq!(check_src(&[g.clone(), g], &all).unwrap(), SrcVerdict::AllEmpty);
    }

    #[test]
    fn disagreement_is_an_error() {
        let family = [anon(counterexample::instance_i1()), anon(counterexample::instance_i2())];
        let s = Coalition::from_players([0, 1, 2, 3, 5]).unwrap();
        assert_eq!(check_src(&family, &[s]), Err(Error::Disagreement(s)));
    }
}
