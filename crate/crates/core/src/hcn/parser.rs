use thiserror::Error;

use super::decision_list::{Conjunction, DecisionList};
use super::formula::Formula;
use super::net::{Condition, HedonicNet, Rule, Semantics};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Var(usize),
    CardEq(usize),
    CardGe(usize),
    Number(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut k, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while k < chars.len() {
        let c = chars[k];
        let (tline, tcol) = (line, col);
        let advance = |k: &mut usize, col: &mut usize, by: usize| {
            *k += by;
            *col += by;
        };
        if c == '\n' {
            k += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut k, &mut col, 1);
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        let rest: String = chars[k..chars.len().min(k + 2)].iter().collect();
        let sym = match rest.as_str() {
            "->" => Some("->"),
            "=>" => Some("=>"),
            _ => match c {
                '{' => Some("{"),
                '}' => Some("}"),
                ';' => Some(";"),
                '(' => Some("("),
                ')' => Some(")"),
                '!' => Some("!"),
                '&' => Some("&"),
                '|' => Some("|"),
                _ => None,
            },
        };
        if let Some(s) = sym {
            advance(&mut k, &mut col, s.len());
            out.push(Token { tok: Tok::Sym(s), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            let start = k;
            let mut end = k + 1;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || "./+-".contains(chars[end])) {
                // stop before "->"
                if chars[end] == '-' && chars.get(end + 1) == Some(&'>') {
                    break;
                }
                end += 1;
            }
            let text: String = chars[start..end].iter().collect();
            advance(&mut k, &mut col, end - start);
            out.push(Token { tok: Tok::Number(text), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            let mut end = k;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                end += 1;
            }
            let mut word: String = chars[start..end].iter().collect();
            if word == "first" && chars[end..].starts_with(&['-', 'm', 'a', 't', 'c', 'h']) {
                end += 6;
                word = "first-match".into();
            }
            if word == "card" {
                let op_len = if chars.get(end) == Some(&'=') {
                    1
                } else if chars[end..].starts_with(&['>', '=']) {
                    2
                } else {
                    return Err(err(tline, tcol, "expected `=` or `>=` after `card`".into()));
                };
                let digits_start = end + op_len;
                let mut digits_end = digits_start;
                while digits_end < chars.len() && chars[digits_end].is_ascii_digit() {
                    digits_end += 1;
                }
                let digits: String = chars[digits_start..digits_end].iter().collect();
                let value: usize =
                    digits.parse().map_err(|_| err(tline, tcol, "expected a size after `card`".into()))?;
                advance(&mut k, &mut col, digits_end - start);
                let tok = if op_len == 1 { Tok::CardEq(value) } else { Tok::CardGe(value) };
                out.push(Token { tok, line: tline, col: tcol });
                continue;
            }
            advance(&mut k, &mut col, end - start);
            if let Some(index) = word.strip_prefix('x') {
                if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(tline, tcol, format!("malformed variable `{word}`")));
                }
                out.push(Token { tok: Tok::Var(index.parse().unwrap()), line: tline, col: tcol });
                continue;
            }
            out.push(Token { tok: Tok::Word(word), line: tline, col: tcol });
            continue;
        }
        return Err(err(tline, tcol, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = lex(text)?;
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser { tokens, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_sym("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat_sym("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat_sym("!") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        let f = match self.peek() {
            Some(Tok::Var(j)) => Formula::Var(*j),
            Some(Tok::CardEq(k)) => Formula::CardEq(*k),
            Some(Tok::CardGe(k)) => Formula::CardGe(*k),
            Some(Tok::Word(w)) if w == "T" => Formula::True,
            Some(Tok::Word(w)) if w == "F" => Formula::False,
            _ => return self.error("expected a formula atom"),
        };
        self.pos += 1;
        Ok(f)
    }

    fn integer(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Number(text)) => match text.parse() {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => self.error(format!("expected {what}")),
            },
            _ => self.error(format!("expected {what}")),
        }
    }

    fn decision_list(&mut self) -> Result<DecisionList, ParseError> {
        self.expect_sym("{")?;
        let mut rules = Vec::new();
        while !self.eat_sym("}") {
            let at = self.here();
            let f = self.formula()?;
            let conj = match Conjunction::from_formula(&f) {
                Some(c) => c,
                None => {
                    return Err(ParseError { line: at.0, col: at.1, msg: "decision list tests must be conjunctions of literals".into() })
                }
            };
            self.expect_sym("=>")?;
            let bit = match self.integer("0 or 1")? {
                0 => false,
                1 => true,
                _ => return self.error("decision list outputs are 0 or 1"),
            };
            self.expect_sym(";")?;
            rules.push((conj, bit));
        }
        let dl = DecisionList { rules };
        if !dl.is_well_formed() {
            return self.error("decision list must end with `T => 0|1;`");
        }
        Ok(dl)
    }

    fn value<T: Scalar>(&mut self) -> Result<T, ParseError> {
        match self.peek() {
            Some(Tok::Number(text)) => match T::parse_literal(text) {
                Some(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                None => self.error(format!("malformed number `{text}`")),
            },
            _ => self.error("expected a number"),
        }
    }

    fn net<T: Scalar>(&mut self) -> Result<HedonicNet<T>, ParseError> {
        let mut declared: Option<usize> = None;
        let mut semantics = Semantics::Sum;
        let mut blocks: Vec<(usize, Vec<(Rule<T>, (usize, usize))>, (usize, usize))> = Vec::new();
        while self.peek().is_some() {
            if self.is_word("players") {
                self.pos += 1;
                declared = Some(self.integer("a player count")?);
                self.expect_sym(";")?;
            } else if self.is_word("first-match") {
                self.pos += 1;
                semantics = Semantics::FirstMatch;
                self.expect_sym(";")?;
            } else if self.is_word("player") {
                let at = self.here();
                self.pos += 1;
                let id = self.integer("a player index")?;
                self.expect_sym("{")?;
                let mut rules = Vec::new();
                while !self.eat_sym("}") {
                    let start = self.here();
                    let condition = if self.is_word("dl") {
                        self.pos += 1;
                        Condition::List(self.decision_list()?)
                    } else {
                        Condition::Formula(self.formula()?)
                    };
                    self.expect_sym("->")?;
                    let beta = self.value()?;
                    self.expect_sym(";")?;
                    rules.push((Rule { condition, beta }, start));
                }
                if blocks.iter().any(|(b, _, _)| *b == id) {
                    return Err(ParseError { line: at.0, col: at.1, msg: format!("player {id} defined twice") });
                }
                blocks.push((id, rules, at));
            } else {
                return self.error("expected `player`, `players` or `first-match`");
            }
        }
        let n = declared.unwrap_or_else(|| blocks.iter().map(|(id, _, _)| id + 1).max().unwrap_or(0));
        if n == 0 {
            return self.error("a net needs at least one player");
        }
        let mut per_player: Vec<Vec<Rule<T>>> = vec![Vec::new(); n];
        for (id, rules, at) in blocks {
            if id >= n {
                return Err(ParseError { line: at.0, col: at.1, msg: format!("player {id} out of range for {n} players") });
            }
            for (rule, (line, col)) in &rules {
                if let Err(msg) = rule.condition.check_range(n) {
                    return Err(ParseError { line: *line, col: *col, msg });
                }
            }
            per_player[id] = rules.into_iter().map(|(r, _)| r).collect();
        }
        Ok(HedonicNet::with_semantics(per_player, semantics))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(f)
}

pub fn parse_decision_list(text: &str) -> Result<DecisionList, ParseError> {
    let mut p = Parser::new(text)?;
    if !p.is_word("dl") {
        return p.error("expected `dl`");
    }
    p.pos += 1;
    let dl = p.decision_list()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(dl)
}

pub fn parse_net<T: Scalar>(text: &str) -> Result<HedonicNet<T>, ParseError> {
    Parser::new(text)?.net()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_with_negation() {
        let f = parse_formula("x2 & !x1").unwrap();
        assert_eq!(f, Formula::And(vec![Formula::Var(2), Formula::not_var(1)]));
        assert_eq!(f.normalize().to_string(), "!x1 & x2");
    }

    #[test]
    fn precedence_and_parentheses() {
        let f = parse_formula("x0 | x1 & !(x2 | card>=3)").unwrap();
        assert_eq!(
            f,
            Formula::Or(vec![
                Formula::Var(0),
                Formula::And(vec![Formula::Var(1), Formula::Or(vec![Formula::Var(2), Formula::CardGe(3)]).negate()]),
            ])
        );
        assert_eq!(f.to_string(), "x0 | x1 & !(x2 | card>=3)");
    }

    #[test]
    fn malformed_atoms_report_position() {
        let e = parse_formula("x").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        let e = parse_formula("x1 &\n  xq").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(parse_formula("x1 x2").is_err());
        assert!(parse_formula("card3").is_err());
        assert!(parse_formula("(x1").is_err());
    }

    #[test]
    fn rule_with_cardinality() {
        let net: HedonicNet<f64> = parse_net("player 0 { card=3 -> 5.0; }\nplayer 1 { }\nplayer 2 { }").unwrap();
        assert_eq!(net.players(), 3);
        assert_eq!(net.rules(0).len(), 1);
        assert_eq!(net.rules(0)[0].condition, Condition::Formula(Formula::CardEq(3)));
        assert_eq!(net.rules(0)[0].beta, 5.0);
    }

    #[test]
    fn negative_values_after_arrow() {
        let net: HedonicNet<f64> = parse_net("players 2;\nplayer 0 { x1->-1.5; }").unwrap();
        assert_eq!(net.rules(0)[0].beta, -1.5);
    }

    #[test]
    fn out_of_range_indices() {
        let e = parse_net::<f64>("players 2;\nplayer 0 {\n  x2 -> 1.0;\n}").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        assert!(parse_net::<f64>("players 2;\nplayer 3 { }").is_err());
        assert!(parse_net::<f64>("players 2;\nplayer 0 { card=3 -> 1.0; }").is_err());
    }

    #[test]
    fn decision_lists() {
        let dl = parse_decision_list("dl { x1 & !x0 => 1; T => 0; }").unwrap();
        assert_eq!(dl.to_string(), "dl { !x0 & x1 => 1; T => 0; }");
        assert!(parse_decision_list("dl { x1 => 1; }").is_err());
        assert!(parse_decision_list("dl { x1 | x2 => 1; T => 0; }").is_err());
        assert!(parse_decision_list("dl { x1 => 2; T => 0; }").is_err());
    }
}
