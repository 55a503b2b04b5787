use crate::core_model::{Coalition, LabeledSample, Partition, Player};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One iteration of the cover loop: the candidate taken and the part of it
/// that was still unassigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyStep {
    pub taken: Coalition,
    pub residual: u64,
    /// Players unassigned before this step.
    pub free_before: u64,
}

/// Repeatedly takes the retained candidate with the largest unassigned part
/// (first one on ties), makes that part a block and drops the candidate;
/// leftover players become singletons.
pub fn greedy_cover(n: usize, candidates: &[Coalition]) -> Result<(Partition, Vec<GreedyStep>)> {
    let mut pool: Vec<Coalition> = Vec::new();
    for &c in candidates {
        if !pool.contains(&c) {
            pool.push(c);
        }
    }
    let mut free = crate::core_model::full_mask(n);
    let mut blocks = Vec::new();
    let mut steps = Vec::new();
    while !pool.is_empty() {
        let (k, _) = pool
            .iter()
            .enumerate()
            .fold((0, 0), |(bk, bsz), (k, c)| {
                let sz = (c.mask() & free).count_ones();
                if sz > bsz { (k, sz) } else { (bk, bsz) }
            });
        let taken = pool.remove(k);
        let residual = taken.mask() & free;
        steps.push(GreedyStep { taken, residual, free_before: free });
        if let Some(block) = Coalition::from_mask(residual) {
            blocks.push(block);
            free &= !residual;
        }
    }
    blocks.extend((0..n).filter(|&p| free >> p & 1 == 1).map(Coalition::singleton));
    Ok((Partition::new(n, blocks)?, steps))
}

/// For every retained candidate `T`: no step taken while all of `T` was
/// unassigned chose a strictly smaller residual than `|T|`.
pub fn residual_max_holds(retained: &[Coalition], steps: &[GreedyStep]) -> bool {
    retained.iter().all(|t| {
        steps
            .iter()
            .filter(|st| t.mask() & st.free_before == t.mask())
            .all(|st| st.residual.count_ones() as usize >= t.len())
    })
}

/// Sampled coalitions in which nobody prefers being alone, judged with the
/// known singleton values.
pub fn individually_rational<T: Scalar>(sample: &LabeledSample<T>, singletons: &[Option<T>]) -> Result<Vec<Coalition>> {
    let mut kept = Vec::new();
    for e in sample.iter() {
        let mut keep = true;
        for (i, v) in e.iter() {
            let alone = singletons.get(i).and_then(Option::as_ref).ok_or(Error::MissingSingleton(i))?;
            if v < alone {
                keep = false;
            }
        }
        if keep {
            kept.push(e.coalition);
        }
    }
    Ok(kept)
}

/// Filter by the singleton test, then greedy cover by residual size.
pub fn stabilize_bottom_responsive<T: Scalar>(
    n: usize,
    sample: &LabeledSample<T>,
    singletons: &[Option<T>],
) -> Result<Partition> {
    let kept = individually_rational(sample, singletons)?;
    let (pi, steps) = greedy_cover(n, &kept)?;
    debug_assert!(residual_max_holds(&kept, &steps));
    Ok(pi)
}

/// Sampled coalitions with no negative member value, i.e. the friendship
/// cliques under enemy aversion.
pub fn friendly_cliques<T: Scalar>(sample: &LabeledSample<T>) -> Vec<Coalition> {
    sample.iter().filter(|e| e.iter().all(|(_, v)| *v >= T::zero())).map(|e| e.coalition).collect()
}

pub fn stabilize_enemy_aversion<T: Scalar>(n: usize, sample: &LabeledSample<T>) -> Result<Partition> {
    let kept = friendly_cliques(sample);
    let (pi, steps) = greedy_cover(n, &kept)?;
    debug_assert!(residual_max_holds(&kept, &steps));
    Ok(pi)
}

/// Singleton values of a game, all known.
pub fn known_singletons<T: Scalar>(n: usize, value: impl Fn(Player) -> T) -> Vec<Option<T>> {
    (0..n).map(|i| Some(value(i))).collect()
}
