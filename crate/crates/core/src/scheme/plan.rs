//! Per-layer parameters of the multi-layer alignment scheme at one power
//! level P.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaProfile;
use crate::error::{Error, Result};
use crate::exact::{format_rational, serde_rational, to_f64};
use crate::gdof::alignment_dims;

/// Parameters of layer ℓ. Layer ℓ serves users `ℓ..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    pub layer: usize,
    /// `K_ℓ = K − ℓ + 1`
    pub k_users: usize,
    /// Symbols per user in this layer, `N_ℓ`.
    #[serde(with = "serde_bigint")]
    pub n_dims: BigInt,
    /// `M_ℓ`, only for the alignment layers `ℓ ≤ K − 2`.
    #[serde(with = "serde_opt_bigint")]
    pub m_dims: Option<BigInt>,
    /// GDoF per symbol `λ_ℓ`; zero for inactive layers.
    #[serde(with = "serde_rational")]
    pub lambda: BigRational,
    /// PAM half-width `Q_ℓ = max(1, ⌊P^{λ_ℓ/2}⌋)`; zero for inactive layers.
    pub q_level: u64,
    /// Transmit scaling exponent `α_{ℓ−1}`: the layer is sent at `P^{−α_{ℓ−1}/2}`.
    #[serde(with = "serde_rational")]
    pub power_offset: BigRational,
    /// False when `α_ℓ = α_{ℓ−1}`; such a layer carries no signal.
    pub active: bool,
}

impl LayerParams {
    pub fn is_alignment_layer(&self) -> bool {
        self.m_dims.is_some()
    }

    /// `N_ℓ` as a machine integer, if it fits.
    pub fn n_dims_usize(&self) -> Option<usize> {
        self.n_dims.to_usize()
    }

    pub fn m_dims_usize(&self) -> Option<usize> {
        self.m_dims.as_ref().and_then(|m| m.to_usize())
    }

    pub fn lambda_f64(&self) -> f64 {
        to_f64(&self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerPlan {
    pub alpha: AlphaProfile,
    pub n: u64,
    #[serde(with = "serde_rational")]
    pub eps: BigRational,
    pub power: f64,
    pub layers: Vec<LayerParams>,
}

impl LayerPlan {
    pub fn k(&self) -> usize {
        self.alpha.k()
    }

    /// Layer ℓ, 1-based.
    pub fn layer(&self, ell: usize) -> &LayerParams {
        &self.layers[ell - 1]
    }

    /// `P^{x/2}` for a rational exponent x given as f64.
    pub fn p_half_pow(&self, x: f64) -> f64 {
        self.power.powf(x / 2.0)
    }
}

/// λ of layer ℓ before subtracting ε: the layer width divided by `M_ℓ`
/// (alignment layers) or by `K − ℓ + 1` (the last two layers).
fn pre_eps_lambda(alpha: &AlphaProfile, n: u64, ell: usize) -> BigRational {
    let k = alpha.k();
    let gap = alpha.gap(ell);
    let users = k - ell + 1;
    if ell + 2 <= k {
        let (_, m) = alignment_dims(users, n);
        gap / BigRational::from_integer(m)
    } else {
        gap / BigRational::from_integer(users.into())
    }
}

/// `min over active layers of the pre-ε λ, divided by 10`.
pub fn default_eps(alpha: &AlphaProfile, n: u64) -> BigRational {
    (1..=alpha.k())
        .filter(|&ell| alpha.gap(ell).is_positive())
        .map(|ell| pre_eps_lambda(alpha, n, ell))
        .min()
        .expect("layer 1 is always active")
        / BigRational::from_integer(10.into())
}

/// Builds the layer plan for link strengths `alpha`, alignment parameter
/// `n`, rate backoff `eps` (default [`default_eps`]) and power `p`.
pub fn build_layer_plan(alpha: &AlphaProfile, n: u64, eps: Option<&BigRational>, p: f64) -> Result<LayerPlan> {
    if n < 1 {
        return Err(Error::InvalidN);
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidPower(p));
    }
    let eps = match eps {
        Some(e) if !e.is_positive() => return Err(Error::NonPositiveEps),
        Some(e) => e.clone(),
        None => default_eps(alpha, n),
    };

    let k = alpha.k();
    let mut layers = Vec::with_capacity(k);
    for ell in 1..=k {
        let users = k - ell + 1;
        let alignment = ell + 2 <= k;
        let (n_dims, m_dims) = if alignment {
            let (nd, md) = alignment_dims(users, n);
            (nd, Some(md))
        } else {
            (BigInt::from(1), None)
        };
        let active = alpha.gap(ell).is_positive();
        let (lambda, q_level) = if active {
            let pre = pre_eps_lambda(alpha, n, ell);
            let lambda = &pre - &eps;
            if !lambda.is_positive() {
                return Err(Error::EpsTooLarge {
                    eps: format_rational(&eps),
                    layer: ell,
                    limit: format_rational(&pre),
                });
            }
            let q = p.powf(to_f64(&lambda) / 2.0);
            // guard against P^{λ/2} landing a hair under an integer
            let q = ((q * (1.0 + 1e-12)).floor() as u64).max(1);
            (lambda, q)
        } else {
            (BigRational::zero(), 0)
        };
        layers.push(LayerParams {
            layer: ell,
            k_users: users,
            n_dims,
            m_dims,
            lambda,
            q_level,
            power_offset: alpha.get(ell - 1),
            active,
        });
    }
    Ok(LayerPlan {
        alpha: alpha.clone(),
        n,
        eps,
        power: p,
        layers,
    })
}

mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod serde_opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn alpha(s: &str) -> AlphaProfile {
        AlphaProfile::parse(s).unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn three_users_n1() {
        let plan = build_layer_plan(&alpha("0.5,0.8,1"), 1, None, 1e6).unwrap();
        let l1 = plan.layer(1);
        assert_eq!(
            (l1.k_users, l1.n_dims_usize(), l1.m_dims_usize()),
            (3, Some(1), Some(3))
        );
        assert_eq!(plan.layer(2).n_dims_usize(), Some(1));
        assert_eq!(plan.layer(2).m_dims, None);
        // pre-eps rates 1/6, 3/20, 1/5 -> eps = 3/200
        assert_eq!(plan.eps, q("3/200"));
        assert_eq!(l1.lambda, q("1/6") - q("3/200"));
        assert_eq!(plan.layer(3).lambda, q("1/5") - q("3/200"));
        assert_eq!(plan.layer(3).power_offset, q("4/5"));
        assert!(plan.layers.iter().all(|l| l.active && l.q_level >= 1));
    }

    #[test]
    fn three_users_n2() {
        let plan = build_layer_plan(&alpha("0.5,0.8,1"), 2, None, 1e6).unwrap();
        assert_eq!(plan.layer(1).n_dims_usize(), Some(64));
        assert_eq!(plan.layer(1).m_dims_usize(), Some(191));
    }

    #[test]
    fn last_layer_rate() {
        let a = alpha("0.3,0.4,0.6,0.9");
        let eps = q("1/100");
        let plan = build_layer_plan(&a, 1, Some(&eps), 1e8).unwrap();
        let last = plan.layer(4);
        assert_eq!(last.n_dims_usize(), Some(1));
        assert_eq!(last.lambda, q("0.9") - q("0.6") - eps.clone());
        // layer K-1 shares its width between two users
        assert_eq!(plan.layer(3).lambda, q("0.2") / q("2") - eps);
    }

    #[test]
    fn q_levels_floor_and_clamp() {
        let a = alpha("0.5,0.8,1");
        let eps = q("1/60");
        // λ₁ = 1/6 − 1/60 = 3/20; P = 10^(40/3) gives P^{λ₁/2} = 10
        let p = 10f64.powf(40.0 / 3.0);
        let plan = build_layer_plan(&a, 1, Some(&eps), p).unwrap();
        assert_eq!(plan.layer(1).q_level, 10);
        let plan = build_layer_plan(&a, 1, Some(&eps), 1.0).unwrap();
        assert!(plan.layers.iter().all(|l| l.q_level == 1));
    }

    #[test]
    fn flat_layer_is_inactive() {
        let plan = build_layer_plan(&alpha("0.5,0.5,1"), 1, None, 1e6).unwrap();
        let l2 = plan.layer(2);
        assert!(!l2.active);
        assert_eq!(l2.q_level, 0);
        assert!(l2.lambda.is_zero());
        assert!(plan.layer(1).active && plan.layer(3).active);
    }

    #[test]
    fn eps_too_large_names_layer() {
        let err = build_layer_plan(&alpha("0.5,0.8,1"), 1, Some(&q("0.15")), 1e6).unwrap_err();
        match err {
            Error::EpsTooLarge { layer, limit, .. } => {
                assert_eq!(layer, 2);
                assert_eq!(limit, "3/20");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err_msg_contains(
            build_layer_plan(&alpha("0.5,0.8,1"), 1, Some(&q("0.15")), 1e6),
            "layer 2"
        ));
    }

    fn err_msg_contains<T: std::fmt::Debug>(r: Result<T>, needle: &str) -> bool {
        r.unwrap_err().to_string().contains(needle)
    }

    #[test]
    fn bad_inputs() {
        let a = alpha("0.5,0.8,1");
        assert!(matches!(
            build_layer_plan(&a, 1, None, 0.5),
            Err(Error::InvalidPower(_))
        ));
        assert!(matches!(
            build_layer_plan(&a, 1, None, f64::NAN),
            Err(Error::InvalidPower(_))
        ));
        assert!(matches!(build_layer_plan(&a, 0, None, 10.0), Err(Error::InvalidN)));
        assert!(matches!(
            build_layer_plan(&a, 1, Some(&q("0")), 10.0),
            Err(Error::NonPositiveEps)
        ));
    }

    #[test]
    fn plan_json_uses_strings_for_exact_values() {
        let plan = build_layer_plan(&alpha("0.5,0.8,1"), 2, None, 1e4).unwrap();
        let json = serde_json::to_value(&plan).unwrap();
        assert_eq!(json["layers"][0]["n_dims"], "64");
        assert_eq!(json["layers"][0]["m_dims"], "191");
        assert!(json["layers"][2]["m_dims"].is_null());
        let back: LayerPlan = serde_json::from_value(json).unwrap();
        assert_eq!(back, plan);
    }
}
