use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The fixed answer vocabulary of task A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Yes,
    No,
    N0,
    N1,
    N2,
    N3,
    N4,
    N5,
}

impl Token {
    pub const ALL: [Token; 8] = [
        Token::Yes,
        Token::No,
        Token::N0,
        Token::N1,
        Token::N2,
        Token::N3,
        Token::N4,
        Token::N5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Token::Yes => "yes",
            Token::No => "no",
            Token::N0 => "0",
            Token::N1 => "1",
            Token::N2 => "2",
            Token::N3 => "3",
            Token::N4 => "4",
            Token::N5 => "5",
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Token::Yes
        } else {
            Token::No
        }
    }

    /// `None` above 5.
    pub fn from_count(n: u64) -> Option<Self> {
        Token::ALL.get(n as usize + 2).copied()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Token {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Token::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("{s:?} is not in the answer vocabulary"))
    }
}

/// Ground-truth or predicted answer. Serialized as
/// `{"kind": "token"|"index"|"index_set"|"na", "value": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnswerValue {
    Token(Token),
    /// Page reading index of one element (task B).
    ElementIndex(usize),
    /// Document reading indices (task C); never empty.
    ElementIndexSet(BTreeSet<usize>),
    NA,
}

impl AnswerValue {
    pub fn kind(&self) -> &'static str {
        match self {
            AnswerValue::Token(_) => "token",
            AnswerValue::ElementIndex(_) => "index",
            AnswerValue::ElementIndexSet(_) => "index_set",
            AnswerValue::NA => "na",
        }
    }

    pub fn is_na(&self) -> bool {
        matches!(self, AnswerValue::NA)
    }

    /// Compact class label: the token, the index, indices joined by
    /// commas, or "NA".
    pub fn class_label(&self) -> String {
        match self {
            AnswerValue::Token(t) => t.as_str().to_string(),
            AnswerValue::ElementIndex(i) => i.to_string(),
            AnswerValue::ElementIndexSet(s) => s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
            AnswerValue::NA => "NA".to_string(),
        }
    }
}

impl fmt::Display for AnswerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnswerValue::ElementIndexSet(_) => write!(f, "{{{}}}", self.class_label()),
            _ => f.write_str(&self.class_label()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    kind: String,
    #[serde(default)]
    value: serde_json::Value,
}

impl Serialize for AnswerValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let value = match self {
            AnswerValue::Token(t) => serde_json::Value::from(t.as_str()),
            AnswerValue::ElementIndex(i) => serde_json::Value::from(*i),
            AnswerValue::ElementIndexSet(set) => serde_json::Value::from(set.iter().copied().collect::<Vec<_>>()),
            AnswerValue::NA => serde_json::Value::Null,
        };
        Repr { kind: self.kind().to_string(), value }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AnswerValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = Repr::deserialize(d)?;
        match repr.kind.as_str() {
            "token" => {
                let s = repr.value.as_str().ok_or_else(|| D::Error::custom("token value must be a string"))?;
                s.parse().map(AnswerValue::Token).map_err(D::Error::custom)
            }
            "index" => repr
                .value
                .as_u64()
                .map(|i| AnswerValue::ElementIndex(i as usize))
                .ok_or_else(|| D::Error::custom("index value must be a non-negative integer")),
            "index_set" => {
                let items = repr
                    .value
                    .as_array()
                    .ok_or_else(|| D::Error::custom("index_set value must be an array"))?;
                let set = items
                    .iter()
                    .map(|v| v.as_u64().map(|i| i as usize))
                    .collect::<Option<BTreeSet<usize>>>()
                    .ok_or_else(|| D::Error::custom("index_set members must be non-negative integers"))?;
                if set.is_empty() {
                    return Err(D::Error::custom("index_set must not be empty"));
                }
                Ok(AnswerValue::ElementIndexSet(set))
            }
            "na" => Ok(AnswerValue::NA),
            other => Err(D::Error::custom(format!("unknown answer kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let cases = [
            (AnswerValue::Token(Token::Yes), r#"{"kind":"token","value":"yes"}"#),
            (AnswerValue::ElementIndex(3), r#"{"kind":"index","value":3}"#),
            (AnswerValue::ElementIndexSet([4, 1].into()), r#"{"kind":"index_set","value":[1,4]}"#),
            (AnswerValue::NA, r#"{"kind":"na","value":null}"#),
        ];
        for (a, json) in cases {
            assert_eq!(serde_json::to_string(&a).unwrap(), json);
            assert_eq!(serde_json::from_str::<AnswerValue>(json).unwrap(), a);
        }
    }

    #[test]
    fn rejects_bad_answers() {
        for bad in [
            r#"{"kind":"token","value":"maybe"}"#,
            r#"{"kind":"index","value":-1}"#,
            r#"{"kind":"index_set","value":[]}"#,
            r#"{"kind":"label","value":1}"#,
        ] {
            assert!(serde_json::from_str::<AnswerValue>(bad).is_err(), "{bad}");
        }
        assert_eq!(serde_json::from_str::<AnswerValue>(r#"{"kind":"na"}"#).unwrap(), AnswerValue::NA);
    }

    #[test]
    fn counts_map_to_tokens() {
        assert_eq!(Token::from_count(0), Some(Token::N0));
        assert_eq!(Token::from_count(5), Some(Token::N5));
        assert_eq!(Token::from_count(6), None);
    }
}
