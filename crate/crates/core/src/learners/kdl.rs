use crate::core_model::{Coalition, LabeledSample, Player};
use crate::error::{Error, Result};
use crate::hcn::{Condition, Conjunction, DecisionList, HedonicNet, Literal, Rule, Semantics};
use crate::scalar::Scalar;

/// Every conjunction of at most `k` literals over distinct variables of
/// `0..n`: size ascending, then lexicographic with `x_j` before `!x_j`.
pub fn conjunctions(n: usize, k: usize) -> Vec<Conjunction> {
    fn extend(n: usize, left: usize, from: usize, acc: &mut Vec<Literal>, out: &mut Vec<Conjunction>) {
        if left == 0 {
            out.push(Conjunction::new(acc.clone()));
            return;
        }
        for var in from..n {
            for lit in [Literal::pos(var), Literal::neg(var)] {
                acc.push(lit);
                extend(n, left - 1, var + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    for size in 0..=k.min(n) {
        extend(n, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Rivest's greedy learner: repeatedly takes the first conjunction whose
/// matching examples are nonempty and uniformly labelled, emits it with that
/// label and drops the matched examples.
pub fn learn_k_dl(k: usize, n: usize, labeled: &[(Coalition, bool)]) -> Result<DecisionList> {
    let candidates = conjunctions(n, k);
    let mut remaining: Vec<(Coalition, bool)> = labeled.to_vec();
    let mut rules = Vec::new();
    while !remaining.is_empty() {
        let found = candidates.iter().find_map(|c| {
            let mut hits = remaining.iter().filter(|(s, _)| c.eval(*s)).map(|&(_, b)| b);
            let first = hits.next()?;
            hits.all(|b| b == first).then_some((c, first))
        });
        let Some((c, b)) = found else {
            return Err(Error::NotKdl { k, remaining: remaining.len() });
        };
        remaining.retain(|(s, _)| !c.eval(*s));
        rules.push((c.clone(), b));
    }
    if rules.last().is_none_or(|(c, _)| !c.is_empty()) {
        rules.push((Conjunction::truth(), false));
    }
    Ok(DecisionList { rules })
}

/// One decision list per distinct value seen by `i`, in order of first
/// appearance. The rules are meant for first-match evaluation.
pub fn learn_hcn_kdl<T: Scalar>(k: usize, n: usize, sample: &LabeledSample<T>, i: Player) -> Result<Vec<Rule<T>>> {
    let observed: Vec<(Coalition, T)> =
        sample.containing(i).map(|e| (e.coalition, e.value(i).expect("entry contains i").clone())).collect();
    let mut betas: Vec<T> = Vec::new();
    for (_, v) in &observed {
        if !betas.iter().any(|b| b.same_value(v)) {
            betas.push(v.clone());
        }
    }
    betas
        .into_iter()
        .map(|beta| {
            let labeled: Vec<(Coalition, bool)> = observed.iter().map(|(s, v)| (*s, v.same_value(&beta))).collect();
            let list = learn_k_dl(k, n, &labeled)?;
            Ok(Rule { condition: Condition::List(list), beta })
        })
        .collect()
}

pub fn learn_hcn_kdl_net<T: Scalar>(k: usize, n: usize, sample: &LabeledSample<T>) -> Result<HedonicNet<T>> {
    let rules = (0..n).map(|i| learn_hcn_kdl(k, n, sample, i)).collect::<Result<_>>()?;
    Ok(HedonicNet::with_semantics(rules, Semantics::FirstMatch))
}
