//! The sorted link-strength profile `0 < α₁ ≤ … ≤ α_K ≤ 1`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, to_f64};

/// Link-strength exponents of the K receivers, sorted ascending.
///
/// Users are 1-based everywhere in this crate; `get(0)` is the virtual
/// `α₀ = 0` used by the layer construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaProfile {
    alphas: Vec<BigRational>,
}

impl AlphaProfile {
    pub fn new(alphas: Vec<BigRational>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::InvalidAlpha(format!(
                "need at least 2 users, got {}",
                alphas.len()
            )));
        }
        for (i, a) in alphas.iter().enumerate() {
            if !a.is_positive() || *a > BigRational::one() {
                return Err(Error::InvalidAlpha(format!(
                    "alpha_{} = {} is outside (0, 1]",
                    i + 1,
                    format_rational(a)
                )));
            }
        }
        if let Some(i) = alphas.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidAlpha(format!(
                "unsorted profile: alpha_{} = {} > alpha_{} = {}",
                i + 1,
                format_rational(&alphas[i]),
                i + 2,
                format_rational(&alphas[i + 1])
            )));
        }
        Ok(Self { alphas })
    }

    /// Parses a comma-separated list of `p/q` or decimal entries.
    pub fn parse(list: &str) -> Result<Self> {
        let alphas = list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }

    /// Number of users K.
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// `α_k` for `k ∈ [0, K]`, with `α₀ = 0`.
    pub fn get(&self, k: usize) -> BigRational {
        if k == 0 {
            BigRational::zero()
        } else {
            self.alphas[k - 1].clone()
        }
    }

    pub fn get_f64(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            to_f64(&self.alphas[k - 1])
        }
    }

    /// `α_ℓ − α_{ℓ−1}`, the width of layer ℓ.
    pub fn gap(&self, layer: usize) -> BigRational {
        self.get(layer) - self.get(layer - 1)
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.alphas
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.alphas.iter().map(to_f64).collect()
    }
}

impl fmt::Display for AlphaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alphas.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for AlphaProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::exact::serde_rational_vec::serialize(&self.alphas, s)
    }
}

impl<'de> Deserialize<'de> for AlphaProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let alphas = crate::exact::serde_rational_vec::deserialize(d)?;
        AlphaProfile::new(alphas).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_indexes_from_one() {
        let a = AlphaProfile::parse("0.2, 1/2, 0.9").unwrap();
        assert_eq!(a.k(), 3);
        assert_eq!(a.get(0), BigRational::zero());
        assert_eq!(a.get(2), BigRational::new(1.into(), 2.into()));
        assert_eq!(a.gap(3), BigRational::new(2.into(), 5.into()));
        assert_eq!(a.to_string(), "(1/5, 1/2, 9/10)");
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(matches!(AlphaProfile::parse("0.9,0.5"), Err(Error::InvalidAlpha(m)) if m.contains("unsorted")));
        assert!(AlphaProfile::parse("1").is_err());
        assert!(AlphaProfile::parse("0,0.5").is_err());
        assert!(AlphaProfile::parse("0.5,1.01").is_err());
        assert!(AlphaProfile::parse("-0.5,0.5").is_err());
    }

    #[test]
    fn serde_round_trip() {
        let a = AlphaProfile::parse("1/3,0.5,1").unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"["1/3","1/2","1"]"#);
        let back: AlphaProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<AlphaProfile>(r#"["1","1/2"]"#).is_err());
    }
}
