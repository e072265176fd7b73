use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};

/// Exponent of an L^p norm, `1 <= p < ∞` or `p = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn new(p: f64) -> Result<Self, Error> {
        if p.is_infinite() && p > 0.0 {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(invalid(format!("norm exponent must satisfy p >= 1, got {p}")))
        }
    }

    pub fn one() -> Self {
        Self::Finite(1.0)
    }

    pub fn two() -> Self {
        Self::Finite(2.0)
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for NormExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| invalid(format!("cannot parse norm exponent {t:?}")))?;
                Self::new(p)
            }
        }
    }
}

impl TryFrom<String> for NormExponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<NormExponent> for String {
    fn from(p: NormExponent) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_exponents() {
        assert!(NormExponent::new(0.5).is_err());
        assert!(NormExponent::new(f64::NAN).is_err());
        assert_eq!(NormExponent::new(1.0).unwrap(), NormExponent::one());
        assert_eq!("inf".parse::<NormExponent>().unwrap(), NormExponent::Infinity);
        assert_eq!(NormExponent::Infinity.reciprocal(), 0.0);
    }
}
