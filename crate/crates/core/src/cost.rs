//! Transfer costs in ℕ ∪ {∞}.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A natural number or infinity. Addition saturates at [`Cost::Infinite`].
///
/// The derived order puts every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(u64),
    #[default]
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);
    pub const ONE: Cost = Cost::Finite(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }
}

impl From<u64> for Cost {
    fn from(v: u64) -> Self {
        Cost::Finite(v)
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => a.checked_add(b).map_or(Cost::Infinite, Cost::Finite),
            _ => Cost::Infinite,
        }
    }
}

impl std::iter::Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as a JSON integer, or the string `"inf"`.
impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(v) => s.serialize_u64(*v),
            Cost::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Cost::Finite(v)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "∞") => Ok(Cost::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid cost '{t}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_saturation() {
        assert!(Cost::Finite(u64::MAX) < Cost::Infinite);
        assert_eq!(Cost::Finite(2) + Cost::Finite(3), Cost::Finite(5));
        assert_eq!(Cost::Finite(2) + Cost::Infinite, Cost::Infinite);
        assert_eq!(Cost::Finite(u64::MAX) + Cost::ONE, Cost::Infinite);
        assert_eq!([Cost::ONE, Cost::ONE].into_iter().sum::<Cost>(), Cost::Finite(2));
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Cost::Finite(4)).unwrap(), "4");
        assert_eq!(serde_json::to_string(&Cost::Infinite).unwrap(), "\"inf\"");
        let c: Cost = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(c, Cost::Infinite);
        assert!(serde_json::from_str::<Cost>("\"big\"").is_err());
    }
}
