use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer or `+inf`, ordered with infinity on top.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn min_of<I: IntoIterator<Item = Valuation>>(it: I) -> Valuation {
        it.into_iter().fold(Valuation::Infinity, std::cmp::min)
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: i64) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a + rhs),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Sub<i64> for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: i64) -> Valuation {
        self + (-rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

// JSON: an integer, or the string "inf".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Valuation;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or \"inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Valuation, E> {
                Ok(Valuation::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Valuation, E> {
                i64::try_from(v)
                    .map(Valuation::Finite)
                    .map_err(|_| E::custom("valuation out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Valuation, E> {
                match v {
                    "inf" | "+inf" | "infinity" => Ok(Valuation::Infinity),
                    other => other
                        .parse::<i64>()
                        .map(Valuation::Finite)
                        .map_err(|_| E::custom(format!("bad valuation {other:?}"))),
                }
            }
            fn visit_unit<E: de::Error>(self) -> Result<Valuation, E> {
                Ok(Valuation::Infinity)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_absorbing_and_maximal() {
        let a = Valuation::Finite(3);
        assert!(a < Valuation::Infinity);
        assert_eq!(a + Valuation::Infinity, Valuation::Infinity);
        assert_eq!(a + 2, Valuation::Finite(5));
        assert_eq!(Valuation::min_of([Valuation::Infinity, a]), a);
        assert_eq!(Valuation::min_of([]), Valuation::Infinity);
    }

    #[test]
    fn json_form() {
        assert_eq!(serde_json::to_string(&Valuation::Infinity).unwrap(), "\"inf\"");
        let v: Valuation = serde_json::from_str("-4").unwrap();
        assert_eq!(v, Valuation::Finite(-4));
        let v: Valuation = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(v, Valuation::Infinity);
    }
}
