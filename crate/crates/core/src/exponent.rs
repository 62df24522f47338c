use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integrability or fine index in `(0, ∞]`.
///
/// Serialized as a JSON number, or as the string `"inf"` for `∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Build from a float, mapping `f64::INFINITY` to [`Exponent::Infinity`].
    pub fn new(x: f64) -> Exponent {
        if x.is_infinite() && x > 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(x)
        }
    }

    /// `1/q`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(q) => 1.0 / q,
            Exponent::Infinity => 0.0,
        }
    }

    /// Inverse of [`Exponent::recip`]: a reciprocal of zero (or less) is `∞`.
    pub fn from_recip(r: f64) -> Exponent {
        if r <= 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(1.0 / r)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(q) => q,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            Exponent::Finite(q) => q.is_finite() && q > 0.0,
            Exponent::Infinity => true,
        }
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if self.value() <= other.value() {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Exponent) -> Exponent {
        if self.value() >= other.value() {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        Exponent::new(x)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(q) => serializer.serialize_f64(*q),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExpVisitor;

        impl Visitor<'_> for ExpVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
                Ok(Exponent::new(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
                match v {
                    "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
                    other => other
                        .parse::<f64>()
                        .map(Exponent::new)
                        .map_err(|_| E::custom(format!("expected a number or \"inf\", got {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(ExpVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let v: Vec<Exponent> = serde_json::from_str(r#"[2, 0.5, "inf"]"#).unwrap();
        assert_eq!(v, vec![Exponent::Finite(2.0), Exponent::Finite(0.5), Exponent::Infinity]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[2.0,0.5,"inf"]"#);
    }

    #[test]
    fn reciprocals() {
        assert_eq!(Exponent::Infinity.recip(), 0.0);
        assert_eq!(Exponent::from_recip(0.0), Exponent::Infinity);
        assert_eq!(Exponent::from_recip(0.5), Exponent::Finite(2.0));
    }
}
