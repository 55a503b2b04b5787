use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use super::coalition::{Coalition, Player};
use super::valuation::Valuation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One sampled coalition together with the value each member assigns to it.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleEntry<T> {
    pub coalition: Coalition,
    values: Vec<T>,
}

impl<T: Scalar> SampleEntry<T> {
    /// `values` must be ordered like `coalition.members()`.
    pub fn new(coalition: Coalition, values: Vec<T>) -> Result<Self> {
        if values.len() != coalition.len() {
            return Err(Error::InvalidSample(format!(
                "{} values for the {} members of {coalition}",
                values.len(),
                coalition.len()
            )));
        }
        Ok(SampleEntry { coalition, values })
    }

    pub fn from_map(coalition: Coalition, values: &BTreeMap<Player, T>) -> Result<Self> {
        if values.len() != coalition.len() || !values.keys().all(|&p| coalition.contains(p)) {
            return Err(Error::InvalidSample(format!("value keys do not match the members of {coalition}")));
        }
        Ok(SampleEntry { coalition, values: values.values().cloned().collect() })
    }

    pub fn observe<V: Valuation<T> + ?Sized>(v: &V, coalition: Coalition) -> Self {
        let values = coalition.members().map(|p| v.value(p, coalition)).collect();
        SampleEntry { coalition, values }
    }

    /// Value reported by `player`, `None` if it is not a member.
    pub fn value(&self, player: Player) -> Option<&T> {
        if !self.coalition.contains(player) {
            return None;
        }
        let rank = (self.coalition.mask() & ((1u64 << player) - 1)).count_ones() as usize;
        self.values.get(rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Player, &T)> {
        self.coalition.members().zip(self.values.iter())
    }

    fn to_json(&self) -> Value {
        let mut values = Map::new();
        for (p, v) in self.iter() {
            let number = v.to_f64().and_then(Number::from_f64).unwrap_or_else(|| Number::from(0));
            values.insert(p.to_string(), Value::Number(number));
        }
        serde_json::json!({
            "coalition": self.coalition.members().collect::<Vec<_>>(),
            "values": values,
        })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSample(msg.to_string());
        let players = value
            .get("coalition")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"coalition\" array"))?
            .iter()
            .map(|p| p.as_u64().map(|p| p as Player).ok_or_else(|| bad("player ids must be integers")))
            .collect::<Result<Vec<_>>>()?;
        let coalition = Coalition::from_players(players)?;
        let object = value.get("values").and_then(Value::as_object).ok_or_else(|| bad("missing \"values\" object"))?;
        let mut values = BTreeMap::new();
        for (key, v) in object {
            let p: Player = key.parse().map_err(|_| bad("value keys must be player ids"))?;
            let text = match v {
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                _ => return Err(bad("values must be numbers")),
            };
            let parsed = T::parse_literal(&text).ok_or_else(|| bad("unparsable value"))?;
            values.insert(p, parsed);
        }
        SampleEntry::from_map(coalition, &values)
    }
}

/// The input to every learner and stabilizer. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSample<T> {
    pub entries: Vec<SampleEntry<T>>,
}

impl<T> Default for LabeledSample<T> {
    fn default() -> Self {
        LabeledSample { entries: Vec::new() }
    }
}

impl<T: Scalar> LabeledSample<T> {
    pub fn new(entries: Vec<SampleEntry<T>>) -> Self {
        LabeledSample { entries }
    }

    pub fn observe<V: Valuation<T> + ?Sized, I: IntoIterator<Item = Coalition>>(v: &V, coalitions: I) -> Self {
        LabeledSample { entries: coalitions.into_iter().map(|c| SampleEntry::observe(v, c)).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SampleEntry<T>> {
        self.entries.iter()
    }

    /// Entries whose coalition contains `player`.
    pub fn containing(&self, player: Player) -> impl Iterator<Item = &SampleEntry<T>> {
        self.entries.iter().filter(move |e| e.coalition.contains(player))
    }

    /// Number of players the sample mentions (highest id plus one).
    pub fn span(&self) -> usize {
        self.entries.iter().map(|e| e.coalition.span()).max().unwrap_or(0)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_json().to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(line)
                .map_err(|e| Error::InvalidSample(format!("line {}: {e}", lineno + 1)))?;
            let entry = SampleEntry::from_json(&value)
                .map_err(|e| Error::InvalidSample(format!("line {}: {e}", lineno + 1)))?;
            entries.push(entry);
        }
        Ok(LabeledSample { entries })
    }
}

impl<'a, T> IntoIterator for &'a LabeledSample<T> {
    type Item = &'a SampleEntry<T>;
    type IntoIter = std::slice::Iter<'a, SampleEntry<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn jsonl_matches_documented_format() {
        let c = Coalition::from_players([0, 2]).unwrap();
        let sample = LabeledSample::new(vec![SampleEntry::new(c, vec![5.0, 5.0]).unwrap()]);
        assert_eq!(sample.to_jsonl().trim(), r#"{"coalition":[0,2],"values":{"0":5.0,"2":5.0}}"#);
        let back = LabeledSample::<f64>::from_jsonl(&sample.to_jsonl()).unwrap();
        assert_eq!(back, sample);
    }

    #[test]
    fn exact_values_parse_from_decimal_text() {
        let text = r#"{"coalition":[1],"values":{"1":0.1}}"#;
        let sample = LabeledSample::<BigRational>::from_jsonl(text).unwrap();
        assert_eq!(sample.entries[0].value(1), Some(&BigRational::new(1.into(), 10.into())));
    }

    #[test]
    fn keys_must_match_members() {
        let bad = r#"{"coalition":[0,2],"values":{"0":1.0}}"#;
        assert!(LabeledSample::<f64>::from_jsonl(bad).is_err());
        let bad = r#"{"coalition":[0,2],"values":{"0":1.0,"1":2.0}}"#;
        assert!(LabeledSample::<f64>::from_jsonl(bad).is_err());
        let bad = r#"{"coalition":[],"values":{}}"#;
        assert!(LabeledSample::<f64>::from_jsonl(bad).is_err());
    }

    #[test]
    fn lookup_by_player() {
        let c = Coalition::from_players([1, 3, 4]).unwrap();
        let e = SampleEntry::new(c, vec![10.0, 30.0, 40.0]).unwrap();
        assert_eq!(e.value(3), Some(&30.0));
        assert_eq!(e.value(4), Some(&40.0));
        assert_eq!(e.value(2), None);
    }
}
