use std::fmt;

use crate::core_model::{Coalition, Player};

/// Propositional formula over player variables, extended with cardinality
/// atoms on the coalition size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `x_j`: player `j` is in the coalition.
    Var(Player),
    /// `|S| = k`.
    CardEq(usize),
    /// `|S| >= k`.
    CardGe(usize),
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn var(j: Player) -> Self {
        Formula::Var(j)
    }

    pub fn not_var(j: Player) -> Self {
        Formula::Not(Box::new(Formula::Var(j)))
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(parts.into_iter().collect())
    }

    pub fn eval(&self, s: Coalition) -> bool {
        match self {
            Formula::Var(j) => s.contains(*j),
            Formula::CardEq(k) => s.len() == *k,
            Formula::CardGe(k) => s.len() >= *k,
            Formula::True => true,
            Formula::False => false,
            Formula::Not(f) => !f.eval(s),
            Formula::And(fs) => fs.iter().all(|f| f.eval(s)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(s)),
        }
    }

    /// Largest variable index plus one and largest cardinality parameter.
    pub fn bounds(&self) -> (usize, usize) {
        match self {
            Formula::Var(j) => (j + 1, 0),
            Formula::CardEq(k) | Formula::CardGe(k) => (0, *k),
            Formula::True | Formula::False => (0, 0),
            Formula::Not(f) => f.bounds(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::bounds).fold((0, 0), |(a, b), (c, d)| (a.max(c), b.max(d)))
            }
        }
    }

    /// Checks variable indices `< n` and cardinalities in `1..=n`.
    pub fn check_range(&self, n: usize) -> Result<(), String> {
        match self {
            Formula::Var(j) if *j >= n => Err(format!("variable x{j} out of range for {n} players")),
            Formula::CardEq(k) | Formula::CardGe(k) if *k == 0 || *k > n => {
                Err(format!("cardinality {k} outside 1..={n}"))
            }
            Formula::Not(f) => f.check_range(n),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.check_range(n)),
            _ => Ok(()),
        }
    }

    /// `Some((j, positive))` for `x_j` and `!x_j`.
    pub fn as_literal(&self) -> Option<(Player, bool)> {
        match self {
            Formula::Var(j) => Some((*j, true)),
            Formula::Not(f) => match **f {
                Formula::Var(j) => Some((j, false)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Flattens nested conjunctions and disjunctions, unwraps one-element
    /// ones, and sorts the literal part of every conjunction by variable.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Not(f) => Formula::Not(Box::new(f.normalize())),
            Formula::And(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.normalize() {
                        Formula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                let (mut literals, rest): (Vec<Formula>, Vec<Formula>) =
                    flat.into_iter().partition(|f| f.as_literal().is_some());
                literals.sort_by_key(|f| f.as_literal().map(|(j, pos)| (j, !pos)));
                literals.extend(rest);
                match literals.len() {
                    0 => Formula::True,
                    1 => literals.pop().unwrap(),
                    _ => Formula::And(literals),
                }
            }
            Formula::Or(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.normalize() {
                        Formula::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => Formula::False,
                    1 => flat.pop().unwrap(),
                    _ => Formula::Or(flat),
                }
            }
            other => other.clone(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(fs) if fs.len() > 1 => 0,
            Formula::And(fs) if fs.len() > 1 => 1,
            _ => 2,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    /// DSL syntax. Use `normalize()` first for the canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(j) => write!(f, "x{j}"),
            Formula::CardEq(k) => write!(f, "card={k}"),
            Formula::CardGe(k) => write!(f, "card>={k}"),
            Formula::True => write!(f, "T"),
            Formula::False => write!(f, "F"),
            Formula::Not(g) => {
                write!(f, "!")?;
                g.write_child(f, 2)
            }
            Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
                write!(f, "{}", if matches!(self, Formula::And(_)) { "T" } else { "F" })
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let (sep, prec) = if matches!(self, Formula::And(_)) { (" & ", 2) } else { (" | ", 1) };
                for (k, g) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{sep}")?;
                    }
                    g.write_child(f, if fs.len() == 1 { 0 } else { prec })?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_semantics() {
        let s = Coalition::from_players([1, 2]).unwrap();
        assert!(Formula::var(2).eval(s));
        assert!(!Formula::var(0).eval(s));
        assert!(Formula::True.eval(s));
        assert!(!Formula::False.eval(s));
        let three = Coalition::from_players([0, 1, 2]).unwrap();
        assert!(Formula::CardEq(3).eval(three));
        assert!(!Formula::CardEq(3).eval(s));
        assert!(Formula::CardGe(2).eval(three) && Formula::CardGe(2).eval(s));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let f = Formula::and([Formula::var(2), Formula::or([Formula::var(0), Formula::CardEq(2)])]);
        assert_eq!(f.to_string(), "x2 & (x0 | card=2)");
        let g = Formula::and([Formula::var(3), Formula::var(1)]).negate();
        assert_eq!(g.to_string(), "!(x3 & x1)");
        assert_eq!(Formula::and([]).to_string(), "T");
    }

    #[test]
    fn normalization_sorts_conjunction_literals() {
        let f = Formula::and([Formula::var(2), Formula::and([Formula::not_var(1), Formula::CardGe(2)]), Formula::var(0)]);
        assert_eq!(f.normalize().to_string(), "x0 & !x1 & x2 & card>=2");
        assert_eq!(Formula::and([Formula::var(4)]).normalize(), Formula::var(4));
    }

    #[test]
    fn range_checks() {
        assert!(Formula::var(3).check_range(3).is_err());
        assert!(Formula::CardEq(0).check_range(3).is_err());
        assert!(Formula::and([Formula::var(2), Formula::CardGe(3)]).check_range(3).is_ok());
    }
}
