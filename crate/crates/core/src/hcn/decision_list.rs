use std::fmt;

use super::formula::Formula;
use crate::core_model::{Coalition, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: Player,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Player) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: Player) -> Self {
        Literal { var, positive: false }
    }

    pub fn eval(&self, s: Coalition) -> bool {
        s.contains(self.var) == self.positive
    }
}

/// Conjunction of literals; the empty conjunction is `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Conjunction(Vec<Literal>);

impl Conjunction {
    pub fn truth() -> Self {
        Conjunction(Vec::new())
    }

    /// Sorted by variable; a variable appearing with both signs is allowed
    /// and makes the conjunction unsatisfiable.
    pub fn new(mut literals: Vec<Literal>) -> Self {
        literals.sort_by_key(|l| (l.var, !l.positive));
        literals.dedup();
        Conjunction(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, s: Coalition) -> bool {
        self.0.iter().all(|l| l.eval(s))
    }

    pub fn to_formula(&self) -> Formula {
        let parts: Vec<Formula> = self
            .0
            .iter()
            .map(|l| if l.positive { Formula::var(l.var) } else { Formula::not_var(l.var) })
            .collect();
        Formula::And(parts).normalize()
    }

    /// Accepts `T`, a literal, or a conjunction of literals.
    pub fn from_formula(f: &Formula) -> Option<Self> {
        match f.normalize() {
            Formula::True => Some(Conjunction::truth()),
            Formula::And(parts) => {
                parts.iter().map(|p| p.as_literal().map(|(var, positive)| Literal { var, positive })).collect::<Option<Vec<_>>>().map(Conjunction::new)
            }
            other => other.as_literal().map(|(var, positive)| Conjunction(vec![Literal { var, positive }])),
        }
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Ordered `(κ_j, b_j)` pairs with first-match semantics. A well-formed list
/// ends with the empty conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionList {
    pub rules: Vec<(Conjunction, bool)>,
}

impl DecisionList {
    pub fn constant(b: bool) -> Self {
        DecisionList { rules: vec![(Conjunction::truth(), b)] }
    }

    pub fn is_well_formed(&self) -> bool {
        self.rules.last().is_some_and(|(c, _)| c.is_empty())
    }

    /// Every conjunction has at most `k` literals.
    pub fn is_k_dl(&self, k: usize) -> bool {
        self.is_well_formed() && self.rules.iter().all(|(c, _)| c.len() <= k)
    }

    pub fn eval(&self, s: Coalition) -> bool {
        eval_dl(self, s)
    }

    /// Every rule of `self` before its terminal, then all of `other`.
    ///
    /// This is the union of the two lists whenever `self` has no 0-labelled
    /// rule before its terminal; otherwise such a rule shadows `other` on the
    /// coalitions it matches.
    pub fn merge(&self, other: &DecisionList) -> DecisionList {
        let mut rules: Vec<(Conjunction, bool)> = self.rules.clone();
        if let Some((c, false)) = rules.last() {
            if c.is_empty() {
                rules.pop();
            }
        }
        rules.extend(other.rules.iter().cloned());
        DecisionList { rules }
    }
}

/// `b_j` for the first `κ_j` satisfied by `S`; `false` if none is.
pub fn eval_dl(l: &DecisionList, s: Coalition) -> bool {
    l.rules.iter().find(|(c, _)| c.eval(s)).is_some_and(|(_, b)| *b)
}

impl fmt::Display for DecisionList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dl {{ ")?;
        for (c, b) in &self.rules {
            write!(f, "{c} => {}; ", u8::from(*b))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_match() {
        assert!(eval_dl(&DecisionList::constant(true), Coalition::singleton(3)));
        let l = DecisionList { rules: vec![(Conjunction::new(vec![Literal::pos(1)]), true), (Conjunction::truth(), false)] };
        assert!(!eval_dl(&l, Coalition::singleton(0)));
        assert!(eval_dl(&l, Coalition::pair(0, 1)));
        assert_eq!(l.to_string(), "dl { x1 => 1; T => 0; }");
    }

    #[test]
    fn unreachable_rules_do_not_matter() {
        let mut l = DecisionList { rules: vec![(Conjunction::new(vec![Literal::neg(0)]), true), (Conjunction::truth(), false)] };
        let before: Vec<bool> = (1..8u64).map(|m| l.eval(Coalition::from_mask(m).unwrap())).collect();
        l.rules.push((Conjunction::new(vec![Literal::pos(2)]), true));
        let after: Vec<bool> = (1..8u64).map(|m| l.eval(Coalition::from_mask(m).unwrap())).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn merge_keeps_positive_regions() {
        let a = DecisionList { rules: vec![(Conjunction::new(vec![Literal::pos(0)]), true), (Conjunction::truth(), false)] };
        let b = DecisionList { rules: vec![(Conjunction::new(vec![Literal::pos(1)]), true), (Conjunction::truth(), false)] };
        let m = a.merge(&b);
        for mask in 1..8u64 {
            let s = Coalition::from_mask(mask).unwrap();
            assert_eq!(m.eval(s), a.eval(s) || b.eval(s));
        }
    }

    #[test]
    fn conjunction_from_formula() {
        let f = Formula::and([Formula::var(3), Formula::not_var(1)]);
        assert_eq!(Conjunction::from_formula(&f).unwrap().to_string(), "!x1 & x3");
        assert!(Conjunction::from_formula(&Formula::or([Formula::var(0), Formula::var(1)])).is_none());
        assert!(Conjunction::from_formula(&Formula::True).unwrap().is_empty());
    }
}
