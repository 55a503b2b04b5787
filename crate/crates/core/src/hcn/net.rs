use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::decision_list::DecisionList;
use super::formula::Formula;
use super::parser::parse_net;
use crate::core_model::{Coalition, GameClass, Player, Valuation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    Formula(Formula),
    /// Fires when the list outputs 1.
    List(DecisionList),
}

impl Condition {
    pub fn eval(&self, s: Coalition) -> bool {
        match self {
            Condition::Formula(f) => f.eval(s),
            Condition::List(l) => l.eval(s),
        }
    }

    pub fn check_range(&self, n: usize) -> std::result::Result<(), String> {
        match self {
            Condition::Formula(f) => f.check_range(n),
            Condition::List(l) => l
                .rules
                .iter()
                .flat_map(|(c, _)| c.literals())
                .find(|lit| lit.var >= n)
                .map_or(Ok(()), |lit| Err(format!("variable x{} out of range for {n} players", lit.var))),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Formula(g) => write!(f, "{}", g.normalize()),
            Condition::List(l) => write!(f, "{l}"),
        }
    }
}

/// `φ ↦ β`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule<T> {
    pub condition: Condition,
    pub beta: T,
}

impl<T> Rule<T> {
    pub fn new(formula: Formula, beta: T) -> Self {
        Rule { condition: Condition::Formula(formula), beta }
    }
}

/// How satisfied rules combine into a value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Semantics {
    /// Sum of the values of all satisfied rules.
    #[default]
    Sum,
    /// Value of the first satisfied rule, 0 when none is.
    FirstMatch,
}

/// Per-player rule lists `R_0 .. R_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HedonicNet<T> {
    rules: Vec<Vec<Rule<T>>>,
    semantics: Semantics,
}

impl<T: Scalar> HedonicNet<T> {
    pub fn new(rules: Vec<Vec<Rule<T>>>) -> Self {
        HedonicNet::with_semantics(rules, Semantics::Sum)
    }

    pub fn with_semantics(rules: Vec<Vec<Rule<T>>>, semantics: Semantics) -> Self {
        HedonicNet { rules, semantics }
    }

    pub fn players(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self, i: Player) -> &[Rule<T>] {
        &self.rules[i]
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// Indices of the rules of `R_i` that `S` satisfies.
    pub fn satisfied(&self, i: Player, s: Coalition) -> Vec<usize> {
        self.rules[i].iter().enumerate().filter(|(_, r)| r.condition.eval(s)).map(|(k, _)| k).collect()
    }

    pub fn to_dsl(&self) -> String {
        self.to_string()
    }
}

pub fn hcn_value<T: Scalar>(net: &HedonicNet<T>, i: Player, s: Coalition) -> Result<T> {
    if !s.contains(i) {
        return Err(Error::NotAMember { player: i, coalition: s });
    }
    let mut fired = net.rules[i].iter().filter(|r| r.condition.eval(s));
    Ok(match net.semantics {
        Semantics::Sum => fired.fold(T::zero(), |acc, r| acc + r.beta.clone()),
        Semantics::FirstMatch => fired.next().map_or_else(T::zero, |r| r.beta.clone()),
    })
}

impl<T: Scalar> Valuation<T> for HedonicNet<T> {
    fn players(&self) -> usize {
        self.rules.len()
    }

    fn value(&self, player: Player, coalition: Coalition) -> T {
        hcn_value(self, player, coalition).unwrap_or_else(|e| panic!("{e}"))
    }

    fn class(&self) -> GameClass {
        GameClass::CoalitionNet
    }
}

impl<T: Scalar> fmt::Display for HedonicNet<T> {
    /// Canonical DSL text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "players {};", self.players())?;
        if self.semantics == Semantics::FirstMatch {
            writeln!(f, "first-match;")?;
        }
        for (i, rules) in self.rules.iter().enumerate() {
            writeln!(f, "player {i} {{")?;
            for r in rules {
                writeln!(f, "  {} -> {};", r.condition, r.beta.literal())?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for HedonicNet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de, T: Scalar> Deserialize<'de> for HedonicNet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_net(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcn::parser::parse_net;

    fn additive_row() -> HedonicNet<f64> {
        HedonicNet::new(vec![
            vec![Rule::new(Formula::var(1), 3.0), Rule::new(Formula::var(2), -1.0)],
            vec![],
            vec![],
        ])
    }

    #[test]
    fn sum_of_satisfied_rules() {
        let net = additive_row();
        assert_eq!(hcn_value(&net, 0, Coalition::from_players([0, 1, 2]).unwrap()).unwrap(), 2.0);
        assert_eq!(hcn_value(&net, 1, Coalition::pair(0, 1)).unwrap(), 0.0);
        assert!(hcn_value(&net, 1, Coalition::singleton(0)).is_err());
    }

    #[test]
    fn first_match_semantics() {
        let rules = vec![vec![Rule::new(Formula::var(1), 3.0), Rule::new(Formula::True, -1.0)], vec![]];
        let net = HedonicNet::with_semantics(rules, Semantics::FirstMatch);
        assert_eq!(hcn_value(&net, 0, Coalition::pair(0, 1)).unwrap(), 3.0);
        assert_eq!(hcn_value(&net, 0, Coalition::singleton(0)).unwrap(), -1.0);
    }

    #[test]
    fn dsl_round_trip() {
        let text = "players 3;\nplayer 0 {\n  x1 -> 3.0;\n  x2 -> -1.0;\n}\nplayer 1 {\n}\nplayer 2 {\n}\n";
        assert_eq!(additive_row().to_dsl(), text);
        let back: HedonicNet<f64> = parse_net(text).unwrap();
        assert_eq!(back, additive_row());
        let messy = "players 3; player 0 { x2 & (x1 & !x0) -> 1; dl { x1 => 1; T => 0; } -> 2.5; }\nfirst-match;";
        let net: HedonicNet<f64> = parse_net(messy).unwrap();
        let printed = net.to_dsl();
        assert!(printed.contains("!x0 & x1 & x2 -> 1.0;"), "{printed}");
        assert_eq!(parse_net::<f64>(&printed).unwrap().to_dsl(), printed);
    }

    #[test]
    fn json_is_dsl_text() {
        let text = serde_json::to_string(&additive_row()).unwrap();
        assert!(text.starts_with("\"players 3;"));
        assert_eq!(serde_json::from_str::<HedonicNet<f64>>(&text).unwrap(), additive_row());
    }
}
