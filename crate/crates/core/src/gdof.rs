//! Exact sum-GDoF characterization: the optimal value, the weighted
//! converse bounds and the bound family whose average certifies it, and the
//! finite-`n` rate of the multi-layer alignment scheme.
//!
//! Everything here is exact rational arithmetic. A family is only trusted
//! after [`certify_family`] has checked its column sums and its average.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaProfile;
use crate::error::{Error, Result};
use crate::exact::{pow2, serde_rational};

/// `(Σ α_k + α_K − α_{K−1}) / 2`.
pub fn optimal_sum_gdof(alpha: &AlphaProfile) -> BigRational {
    let k = alpha.k();
    let total: BigRational = alpha.as_slice().iter().sum();
    (total + alpha.get(k) - alpha.get(k - 1)) / BigRational::from_integer(2.into())
}

/// `⌈log₂(K/2)⌉`: the longest geometric chain a weighted bound may use,
/// and the log-size of the bound family.
pub fn max_chain_len(k: usize) -> usize {
    // smallest J with 2^(J+1) >= K
    let mut j = 0;
    while (1usize << (j + 1)) < k {
        j += 1;
    }
    j
}

/// One inequality `Σ lhs[k]·d_k ≤ Σ rhs[k]·α_k`, weights indexed by user
/// (`lhs[0]` is user 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedBound {
    #[serde(rename = "lhs")]
    pub lhs_weights: Vec<u64>,
    #[serde(rename = "rhs")]
    pub rhs_weights: Vec<u64>,
    #[serde(with = "serde_rational")]
    pub rhs_value: BigRational,
}

impl WeightedBound {
    fn from_terms(alpha: &AlphaProfile, lhs: &[(usize, u64)], rhs: &[(usize, u64)]) -> Self {
        let k = alpha.k();
        let mut lhs_weights = vec![0u64; k];
        let mut rhs_weights = vec![0u64; k];
        for &(user, w) in lhs {
            lhs_weights[user - 1] += w;
        }
        for &(user, w) in rhs {
            rhs_weights[user - 1] += w;
        }
        let rhs_value = dot(&rhs_weights, alpha);
        Self {
            lhs_weights,
            rhs_weights,
            rhs_value,
        }
    }

    /// Users with a nonzero weight on the left-hand side, ascending.
    pub fn users(&self) -> Vec<usize> {
        self.lhs_weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

fn dot(weights: &[u64], alpha: &AlphaProfile) -> BigRational {
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0)
        .map(|(i, w)| alpha.get(i + 1) * BigRational::from_integer(BigInt::from(*w)))
        .sum()
}

impl fmt::Display for WeightedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, weights: &[u64], sym: &str) -> fmt::Result {
            let mut first = true;
            for (i, &w) in weights.iter().enumerate().filter(|(_, w)| **w > 0) {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if w == 1 {
                    write!(f, "{sym}{}", i + 1)?;
                } else {
                    write!(f, "{w}{sym}{}", i + 1)?;
                }
            }
            if first {
                write!(f, "0")?;
            }
            Ok(())
        }
        side(f, &self.lhs_weights, "d")?;
        write!(f, " <= ")?;
        side(f, &self.rhs_weights, "a")
    }
}

/// The weighted bound on the `J + 2` users `subset = (l₁ < … < l_{J+2})`:
///
/// `Σ_{j≤J} 2^{J−j+1} d_{l_j} + d_{l_{J+1}} + d_{l_{J+2}} ≤ Σ_{j≤J} 2^{J−j} α_{l_j} + α_{l_{J+2}}`
pub fn make_weighted_bound(alpha: &AlphaProfile, subset: &[usize], j: usize) -> Result<WeightedBound> {
    let k = alpha.k();
    let max = max_chain_len(k);
    if j < 1 || j > max {
        return Err(Error::JOutOfRange { j, max, k });
    }
    let invalid = |reason| Error::InvalidSubset {
        subset: subset.to_vec(),
        k,
        reason,
    };
    if subset.len() != j + 2 {
        return Err(invalid("subset must have J+2 users"));
    }
    if subset.iter().any(|&u| u < 1 || u > k) {
        return Err(invalid("user index outside [1, K]"));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("users must be strictly increasing"));
    }

    let mut lhs = Vec::with_capacity(j + 2);
    let mut rhs = Vec::with_capacity(j + 1);
    for (idx, &user) in subset[..j].iter().enumerate() {
        let pos = idx + 1;
        lhs.push((user, 1u64 << (j - pos + 1)));
        rhs.push((user, 1u64 << (j - pos)));
    }
    lhs.push((subset[j], 1));
    lhs.push((subset[j + 1], 1));
    rhs.push((subset[j + 1], 1));
    Ok(WeightedBound::from_terms(alpha, &lhs, &rhs))
}

/// `d_i + d_j ≤ α_j` for `i < j`.
pub fn make_pair_bound(alpha: &AlphaProfile, i: usize, j: usize) -> Result<WeightedBound> {
    let k = alpha.k();
    if i < 1 || j > k || i >= j {
        return Err(Error::InvalidSubset {
            subset: vec![i, j],
            k,
            reason: "pair bound needs 1 <= i < j <= K",
        });
    }
    Ok(WeightedBound::from_terms(alpha, &[(i, 1), (j, 1)], &[(j, 1)]))
}

/// The `2^Jl` bounds whose average is the optimal sum GDoF.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFamily {
    pub jl: usize,
    pub bounds: Vec<WeightedBound>,
}

/// One geometric-chain term of a family member: user and chain position
/// `j ∈ [0, Jl)` (weight `2^{Jl−j}` on d, `2^{Jl−j−1}` on α).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainTerm {
    pub user: usize,
    pub position: usize,
}

/// The chain users of the ℓ-th family member (1-based ℓ), with erased
/// terms already dropped. Users K−1 and K are implicit.
pub fn family_chain(k: usize, ell: usize) -> Result<Vec<ChainTerm>> {
    if k < 3 {
        return Err(Error::FamilyNeedsThreeUsers(k));
    }
    let jl = max_chain_len(k);
    let half = 1usize << (jl - 1);
    if ell < 1 || ell > 2 * half {
        return Err(Error::Config(format!("bound index {ell} outside [1, {}]", 2 * half)));
    }
    let mut terms = Vec::with_capacity(jl);
    for j in 0..jl {
        // Σ_{l=1}^{j} 2^{Jl−l}; empty for j = 0
        let shift: usize = (1..=j).map(|l| 1usize << (jl - l)).sum();
        let user = if ell <= half {
            ell.div_ceil(1 << j) + shift
        } else {
            let raw = k - 1 - (1 << jl) + (ell - half).div_ceil(1 << j) + shift;
            // Θ: indices below 2^Jl are erased (user 0)
            if raw >= (1 << jl) {
                raw
            } else {
                0
            }
        };
        if user != 0 {
            terms.push(ChainTerm { user, position: j });
        }
    }
    Ok(terms)
}

/// Generates the full family for `K ≥ 3`. Every member carries
/// `d_{K−1} + d_K` on the left and `α_K` on the right.
pub fn converse_family(alpha: &AlphaProfile) -> Result<BoundFamily> {
    let k = alpha.k();
    if k < 3 {
        return Err(Error::FamilyNeedsThreeUsers(k));
    }
    let jl = max_chain_len(k);
    let mut bounds = Vec::with_capacity(1 << jl);
    for ell in 1..=(1usize << jl) {
        let chain = family_chain(k, ell)?;
        let mut seen = vec![false; k + 1];
        for user in chain.iter().map(|t| t.user).chain([k - 1, k]) {
            if user > k || seen[user] {
                return Err(Error::DuplicateUser { bound: ell, user });
            }
            seen[user] = true;
        }
        let mut lhs: Vec<(usize, u64)> = chain.iter().map(|t| (t.user, 1u64 << (jl - t.position))).collect();
        let mut rhs: Vec<(usize, u64)> = chain.iter().map(|t| (t.user, 1u64 << (jl - t.position - 1))).collect();
        lhs.extend([(k - 1, 1), (k, 1)]);
        rhs.push((k, 1));
        bounds.push(WeightedBound::from_terms(alpha, &lhs, &rhs));
    }
    Ok(BoundFamily { jl, bounds })
}

/// Checks the column-sum structure of `family`, that every right-hand side
/// is the dot product it claims to be, and that the average of the bounds
/// equals [`optimal_sum_gdof`]. Returns that average.
pub fn certify_family(alpha: &AlphaProfile, family: &BoundFamily) -> Result<BigRational> {
    let k = alpha.k();
    let jl = family.jl;
    if jl == 0 || jl >= 63 {
        return Err(Error::Certification(format!("Jl={jl} out of range")));
    }
    let count = 1u64 << jl;
    if family.bounds.len() as u64 != count {
        return Err(Error::Certification(format!(
            "family has {} bounds, expected 2^{jl} = {count}",
            family.bounds.len()
        )));
    }
    let mut lhs_cols = vec![0u64; k];
    let mut rhs_cols = vec![0u64; k];
    for (i, b) in family.bounds.iter().enumerate() {
        if b.lhs_weights.len() != k || b.rhs_weights.len() != k {
            return Err(Error::Certification(format!("bound {} has the wrong width", i + 1)));
        }
        if b.lhs_weights
            .iter()
            .chain(&b.rhs_weights)
            .any(|&w| w != 0 && !w.is_power_of_two())
        {
            return Err(Error::Certification(format!(
                "bound {} has a non power-of-two weight",
                i + 1
            )));
        }
        if dot(&b.rhs_weights, alpha) != b.rhs_value {
            return Err(Error::Certification(format!(
                "bound {} right-hand side does not match its weights",
                i + 1
            )));
        }
        for u in 0..k {
            lhs_cols[u] += b.lhs_weights[u];
            rhs_cols[u] += b.rhs_weights[u];
        }
    }
    for u in 1..=k {
        if lhs_cols[u - 1] != count {
            return Err(Error::Certification(format!(
                "total weight of d_{u} is {}, expected {count}",
                lhs_cols[u - 1]
            )));
        }
        let expected = match k - u {
            0 => count,
            1 => 0,
            _ => count / 2,
        };
        if rhs_cols[u - 1] != expected {
            return Err(Error::Certification(format!(
                "total weight of alpha_{u} is {}, expected {expected}",
                rhs_cols[u - 1]
            )));
        }
    }

    let total: BigRational = family.bounds.iter().map(|b| b.rhs_value.clone()).sum();
    let average = total / pow2(jl);
    let optimal = optimal_sum_gdof(alpha);
    if average != optimal {
        return Err(Error::Certification(format!(
            "family average {average} differs from the optimal sum GDoF {optimal}"
        )));
    }
    Ok(average)
}

/// Dimension counts `(N, M)` of an alignment layer serving `users` users
/// with parameter `n`: `N = n^{u(u−1)}`, `M = 2N + (u−1)·n^{u(u−1)−1} − 1`.
pub fn alignment_dims(users: usize, n: u64) -> (BigInt, BigInt) {
    debug_assert!(users >= 2 && n >= 1);
    let e = users * (users - 1);
    let base = BigInt::from(n);
    let big_n = num_traits::pow(base.clone(), e);
    let m = BigInt::from(2) * &big_n + BigInt::from(users - 1) * num_traits::pow(base, e - 1) - 1;
    (big_n, m)
}

/// Sum GDoF of the multi-layer alignment scheme with parameter `n` in the
/// `ε → 0` limit:
/// `Σ_{ℓ≤K−2} (K−ℓ+1)(α_ℓ−α_{ℓ−1})·N_ℓ/M_ℓ + (α_{K−1}−α_{K−2}) + (α_K−α_{K−1})`.
pub fn achievable_gdof(alpha: &AlphaProfile, n: u64) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::InvalidN);
    }
    Ok(achievable_with(alpha, |users| {
        let (big_n, m) = alignment_dims(users, n);
        BigRational::new(big_n, m)
    }))
}

/// The `n → ∞` value of [`achievable_gdof`], where every `N_ℓ/M_ℓ` tends
/// to `1/2`.
pub fn achievable_gdof_limit(alpha: &AlphaProfile) -> BigRational {
    achievable_with(alpha, |_| BigRational::new(1.into(), 2.into()))
}

fn achievable_with(alpha: &AlphaProfile, ratio: impl Fn(usize) -> BigRational) -> BigRational {
    let k = alpha.k();
    let mut total = BigRational::zero();
    for ell in 1..=k.saturating_sub(2) {
        let gap = alpha.gap(ell);
        if gap.is_zero() {
            continue;
        }
        let users = k - ell + 1;
        total += BigRational::from_integer(users.into()) * gap * ratio(users);
    }
    total + alpha.gap(k - 1) + alpha.gap(k)
}

impl BoundFamily {
    /// Sum of the right-hand sides divided by the family size.
    pub fn average(&self) -> BigRational {
        let total: BigRational = self.bounds.iter().map(|b| b.rhs_value.clone()).sum();
        total / pow2(self.jl)
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use num_traits::One;

    fn profile(s: &str) -> AlphaProfile {
        AlphaProfile::parse(s).unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn ones(k: usize) -> AlphaProfile {
        AlphaProfile::new(vec![BigRational::one(); k]).unwrap()
    }

    #[test]
    fn optimal_examples() {
        assert_eq!(optimal_sum_gdof(&ones(4)), q("2"));
        assert_eq!(optimal_sum_gdof(&profile("0.2,0.5,0.9")), q("1"));
        // symmetric profile c·(1,…,1) gives Kc/2
        let c = q("3/7");
        for k in 2..9 {
            let a = AlphaProfile::new(vec![c.clone(); k]).unwrap();
            assert_eq!(
                optimal_sum_gdof(&a),
                c.clone() * BigRational::from_integer(k.into()) / q("2")
            );
        }
    }

    #[test]
    fn chain_length() {
        let expected = [
            (2, 0),
            (3, 1),
            (4, 1),
            (5, 2),
            (8, 2),
            (9, 3),
            (16, 3),
            (17, 4),
            (32, 4),
            (33, 5),
        ];
        for (k, j) in expected {
            assert_eq!(max_chain_len(k), j, "K={k}");
        }
    }

    #[test]
    fn weighted_bound_examples() {
        let a8 = ones(8);
        let b = make_weighted_bound(&a8, &[1, 3, 7, 8], 2).unwrap();
        assert_eq!(b.to_string(), "4d1 + 2d3 + d7 + d8 <= 2a1 + a3 + a8");

        let a13 = ones(13);
        let b = make_weighted_bound(&a13, &[8, 10, 11, 12, 13], 3).unwrap();
        assert_eq!(b.to_string(), "8d8 + 4d10 + 2d11 + d12 + d13 <= 4a8 + 2a10 + a11 + a13");

        let a3 = profile("0.5,0.8,1");
        let b = make_weighted_bound(&a3, &[1, 2, 3], 1).unwrap();
        assert_eq!(b.lhs_weights, vec![2, 1, 1]);
        assert_eq!(b.rhs_weights, vec![1, 0, 1]);
        assert_eq!(b.rhs_value, q("3/2"));
    }

    #[test]
    fn weighted_bound_errors() {
        let a = ones(8);
        assert!(matches!(
            make_weighted_bound(&a, &[1, 2, 3, 4, 5], 3),
            Err(Error::JOutOfRange { .. })
        ));
        assert!(matches!(
            make_weighted_bound(&a, &[1, 2], 0),
            Err(Error::JOutOfRange { .. })
        ));
        assert!(matches!(
            make_weighted_bound(&a, &[1, 3, 2, 8], 2),
            Err(Error::InvalidSubset { .. })
        ));
        assert!(matches!(
            make_weighted_bound(&a, &[1, 3, 8], 2),
            Err(Error::InvalidSubset { .. })
        ));
        assert!(matches!(
            make_weighted_bound(&a, &[0, 3, 7, 8], 2),
            Err(Error::InvalidSubset { .. })
        ));
        assert!(matches!(
            make_weighted_bound(&a, &[1, 3, 7, 9], 2),
            Err(Error::InvalidSubset { .. })
        ));
        // K = 2 admits no chain at all
        assert!(make_weighted_bound(&ones(2), &[1, 2], 1).is_err());
    }

    #[test]
    fn pair_bound_examples() {
        assert_eq!(make_pair_bound(&ones(9), 8, 9).unwrap().to_string(), "d8 + d9 <= a9");
        let a2 = profile("0.3,0.7");
        let b = make_pair_bound(&a2, 1, 2).unwrap();
        assert_eq!(b.to_string(), "d1 + d2 <= a2");
        assert_eq!(b.rhs_value, optimal_sum_gdof(&a2));
        assert_eq!(make_pair_bound(&ones(5), 2, 4).unwrap().to_string(), "d2 + d4 <= a4");
        assert!(make_pair_bound(&ones(5), 4, 4).is_err());
        assert!(make_pair_bound(&ones(5), 4, 2).is_err());
        assert!(make_pair_bound(&ones(5), 1, 6).is_err());
    }

    #[test]
    fn three_user_family() {
        let a = profile("0.5,0.8,1.0");
        let fam = converse_family(&a).unwrap();
        let shown: Vec<String> = fam.bounds.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["2d1 + d2 + d3 <= a1 + a3", "d2 + d3 <= a3"]);
        assert_eq!(certify_family(&a, &fam).unwrap(), q("5/4"));
    }

    #[test]
    fn family_rejects_two_users() {
        assert!(matches!(
            converse_family(&ones(2)),
            Err(Error::FamilyNeedsThreeUsers(2))
        ));
    }

    #[test]
    fn certification_catches_tampering() {
        let a = profile("0.1,0.2,0.3,0.4,0.5,0.9");
        let fam = converse_family(&a).unwrap();
        certify_family(&a, &fam).unwrap();

        let mut bad = fam.clone();
        bad.bounds[0].rhs_value += q("1/1000");
        assert!(matches!(certify_family(&a, &bad), Err(Error::Certification(_))));

        let mut bad = fam.clone();
        bad.bounds.pop();
        assert!(certify_family(&a, &bad).is_err());

        let mut bad = fam.clone();
        bad.bounds[1].lhs_weights[0] += 4;
        assert!(certify_family(&a, &bad).is_err());

        let mut bad = fam;
        bad.bounds[0].lhs_weights[0] = 3;
        assert!(certify_family(&a, &bad).is_err());
    }

    #[test]
    fn achievable_examples() {
        let a = profile("0.5,0.8,1.0");
        assert_eq!(achievable_gdof(&a, 1).unwrap(), q("1"));
        assert_eq!(achievable_gdof_limit(&a), q("5/4"));
        assert!(matches!(achievable_gdof(&a, 0), Err(Error::InvalidN)));
        // n = 2: N = 64, M = 191
        assert_eq!(achievable_gdof(&a, 2).unwrap(), q("3/2") * q("64/191") + q("1/2"));
    }

    #[test]
    fn dims_match_closed_form() {
        assert_eq!(alignment_dims(3, 1), (1.into(), 3.into()));
        assert_eq!(alignment_dims(3, 2), (64.into(), 191.into()));
        assert_eq!(alignment_dims(4, 2), (4096.into(), (8192 + 3 * 2048 - 1).into()));
    }

    #[test]
    fn flat_layers_contribute_nothing() {
        // α₂ = α₁ leaves layer 2 empty; the finite-n value must not depend
        // on that layer's N/M.
        let a = profile("0.4,0.4,0.6,1");
        let direct = q("4") * q("0.4") * q("1/4") // layer 1, K_1 = 4, n = 1: N/M = 1/(2+3-1)
            + q("0.2") + q("0.4");
        assert_eq!(achievable_gdof(&a, 1).unwrap(), direct);
    }
}
