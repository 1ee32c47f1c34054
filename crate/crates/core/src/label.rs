//! Element labels: naturals, atoms and tuples, ordered lexicographically.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A label is a token (number or atom) or a tuple of labels.
///
/// The derived order is the canonical element order of every [`crate::FinObj`]:
/// naturals before atoms before tuples, tuples compared lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Nat(u64),
    Atom(Arc<str>),
    Tuple(Arc<[Label]>),
}

impl Label {
    pub fn nat(n: u64) -> Self {
        Label::Nat(n)
    }

    pub fn atom(s: &str) -> Self {
        Label::Atom(Arc::from(s))
    }

    pub fn tuple(items: Vec<Label>) -> Self {
        Label::Tuple(Arc::from(items))
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::tuple(vec![a, b])
    }

    pub fn as_tuple(&self) -> Option<&[Label]> {
        match self {
            Label::Tuple(items) => Some(items),
            _ => None,
        }
    }

    /// Components of a pair label.
    pub fn as_pair(&self) -> Option<(&Label, &Label)> {
        match self.as_tuple() {
            Some([a, b]) => Some((a, b)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Label::Nat(n) => serde_json::Value::from(*n),
            Label::Atom(s) => serde_json::Value::from(s.as_ref()),
            Label::Tuple(items) => {
                serde_json::Value::Array(items.iter().map(Label::to_json).collect())
            }
        }
    }

    pub fn from_json(value: &serde_json::Value) -> Option<Label> {
        match value {
            serde_json::Value::Number(n) => n.as_u64().map(Label::Nat),
            serde_json::Value::String(s) => Some(Label::atom(s)),
            serde_json::Value::Array(items) => items
                .iter()
                .map(Label::from_json)
                .collect::<Option<Vec<_>>>()
                .map(Label::tuple),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Nat(n) => write!(f, "{n}"),
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<u64> for Label {
    fn from(n: u64) -> Self {
        Label::Nat(n)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::atom(s)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        Label::from_json(&value).ok_or_else(|| {
            serde::de::Error::custom(format!(
                "labels are non-negative integers, strings or arrays of labels, got {value}"
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_lexicographic_on_tuples() {
        let a = Label::pair(Label::nat(0), Label::nat(5));
        let b = Label::pair(Label::nat(1), Label::nat(0));
        assert!(a < b);
        assert!(Label::nat(99) < Label::atom("a"));
        assert!(Label::atom("z") < Label::tuple(vec![]));
    }

    #[test]
    fn json_roundtrip() {
        let l = Label::tuple(vec![Label::atom("⊤"), Label::nat(3), Label::tuple(vec![])]);
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(text, r#"["⊤",3,[]]"#);
        let back: Label = serde_json::from_str(&text).unwrap();
        assert_eq!(back, l);
        assert_eq!(l.to_string(), "(⊤,3,())");
    }
}
