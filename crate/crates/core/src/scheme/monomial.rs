//! Monomial dimension sets over the cross-link coefficients.
//!
//! Every element is a monomial `Π h_ij^{β_ij}` stored as its exponent
//! matrix restricted to a fixed *support* (the coordinates `(i, j)` that
//! may be nonzero), plus its value on a channel realization. Rows are kept
//! in lexicographic order of the flattened K×K exponent matrix, which is
//! the order the beamforming vectors use.

use std::cmp::Ordering;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gdof::alignment_dims;
use crate::link_sim::channel::ChannelRealization;

/// Refuse to materialize sets larger than this many monomials.
pub const MAX_SET_SIZE: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DimensionKind {
    /// `V_{ℓ,n}`: the beamforming dimensions of layer ℓ.
    V,
    /// `S_{k,ℓ} = h_kk · V_{ℓ,n}`: where receiver k sees its own layer-ℓ symbols.
    S,
    /// `I_{k,ℓ}`: where receiver k sees the aligned layer-ℓ interference.
    I,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionSet {
    pub kind: DimensionKind,
    pub layer: usize,
    /// Receiver, for S and I sets.
    pub user: Option<usize>,
    k: usize,
    support: Vec<(usize, usize)>,
    exponents: Vec<u8>,
    values: Vec<f64>,
}

/// Ordered pairs `(i, j)`, `i ≠ j`, `i, j ∈ [ℓ, K]`, row-major.
pub fn cross_pairs(k: usize, ell: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in ell..=k {
        for j in ell..=k {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

impl DimensionSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> &[(usize, usize)] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Exponents of element `i` on [`support`](Self::support).
    pub fn row(&self, i: usize) -> &[u8] {
        let w = self.support.len();
        &self.exponents[i * w..(i + 1) * w]
    }

    /// Exponent of `h_{coord}` in element `i`.
    pub fn exponent(&self, i: usize, coord: (usize, usize)) -> u32 {
        self.support
            .iter()
            .position(|&c| c == coord)
            .map_or(0, |col| self.row(i)[col] as u32)
    }

    /// Element `i` as a flattened row-major K×K exponent matrix.
    pub fn full_row(&self, i: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.k * self.k];
        for (&(r, c), &e) in self.support.iter().zip(self.row(i)) {
            out[(r - 1) * self.k + c - 1] = e as u32;
        }
        out
    }

    /// Index of the element with exponents `row` (on this set's support).
    pub fn position(&self, row: &[u8]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(row) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// True when rows are strictly increasing, hence pairwise distinct.
    pub fn is_strictly_sorted(&self) -> bool {
        (1..self.len()).all(|i| self.row(i - 1) < self.row(i))
    }

    /// No exponent matrix appears in both sets. Both must be sorted.
    pub fn is_disjoint(&self, other: &DimensionSet) -> bool {
        let mut union: Vec<(usize, usize)> = self.support.iter().chain(&other.support).copied().collect();
        union.sort_unstable();
        union.dedup();
        let map = |s: &DimensionSet| -> Vec<Option<usize>> {
            union.iter().map(|c| s.support.iter().position(|x| x == c)).collect()
        };
        let (ma, mb) = (map(self), map(other));
        let cmp = |i: usize, j: usize| -> Ordering {
            let (ra, rb) = (self.row(i), other.row(j));
            for (ca, cb) in ma.iter().zip(&mb) {
                let ea = ca.map_or(0, |c| ra[c]);
                let eb = cb.map_or(0, |c| rb[c]);
                match ea.cmp(&eb) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            match cmp(i, j) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }
}

fn monomial_value(channel: &ChannelRealization, support: &[(usize, usize)], row: &[u8]) -> f64 {
    support
        .iter()
        .zip(row)
        .filter(|(_, &e)| e > 0)
        .map(|(&(i, j), &e)| channel.h(i, j).powi(e as i32))
        .product()
}

/// All `base^dims` exponent rows with digits in `[0, base)`, lexicographic.
fn enumerate_box(dims: usize, base: u8, out: &mut Vec<u8>) {
    let count = (base as usize).pow(dims as u32);
    out.reserve(count * dims);
    let mut digits = vec![0u8; dims];
    for _ in 0..count {
        out.extend_from_slice(&digits);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
    }
}

fn check_layer(channel: &ChannelRealization, ell: usize, n: u64) -> Result<u8> {
    let k = channel.k();
    if ell < 1 || ell + 2 > k {
        return Err(Error::LayerOutOfRange { layer: ell, k });
    }
    if n < 1 {
        return Err(Error::InvalidN);
    }
    // I-set exponents reach n itself
    u8::try_from(n).map_err(|_| Error::Config(format!("n={n} too large for monomial sets")))
}

fn check_user(k: usize, user: usize, ell: usize) -> Result<()> {
    if user < ell || user > k {
        return Err(Error::UserOutOfRange { user, layer: ell, k });
    }
    Ok(())
}

fn guard_size(expected: &num_bigint::BigInt, ell: usize, user: usize) -> Result<usize> {
    match expected.to_usize() {
        Some(v) if v <= MAX_SET_SIZE => Ok(v),
        _ => Err(Error::EnumerationCap {
            user,
            layer: ell,
            log10_size: expected
                .to_f64()
                .map_or(expected.bits() as f64 * 2f64.log10(), f64::log10),
            cap: MAX_SET_SIZE as f64,
        }),
    }
}

/// `V_{ℓ,n}`: all monomials over the cross links among users `ℓ..=K` with
/// exponents in `[0, n−1]`, in lexicographic order. The first element is
/// the constant monomial 1.
pub fn monomial_set(channel: &ChannelRealization, ell: usize, n: u64) -> Result<DimensionSet> {
    let n8 = check_layer(channel, ell, n)?;
    let k = channel.k();
    let (big_n, _) = alignment_dims(k - ell + 1, n);
    guard_size(&big_n, ell, 0)?;
    let support = cross_pairs(k, ell);
    let mut exponents = Vec::new();
    enumerate_box(support.len(), n8, &mut exponents);
    let values = exponents
        .chunks(support.len())
        .map(|row| monomial_value(channel, &support, row))
        .collect();
    Ok(DimensionSet {
        kind: DimensionKind::V,
        layer: ell,
        user: None,
        k,
        support,
        exponents,
        values,
    })
}

/// `S_{k,ℓ} = h_kk · V_{ℓ,n}`, elementwise and in the same order as V.
pub fn desired_set(channel: &ChannelRealization, user: usize, ell: usize, n: u64) -> Result<DimensionSet> {
    let v = monomial_set(channel, ell, n)?;
    check_user(channel.k(), user, ell)?;
    Ok(desired_from(channel, &v, user))
}

pub(crate) fn desired_from(channel: &ChannelRealization, v: &DimensionSet, user: usize) -> DimensionSet {
    let mut support = v.support.clone();
    let at = support.partition_point(|&c| c < (user, user));
    support.insert(at, (user, user));
    let width = support.len();
    let mut exponents = Vec::with_capacity(v.len() * width);
    for i in 0..v.len() {
        let row = v.row(i);
        exponents.extend_from_slice(&row[..at]);
        exponents.push(1);
        exponents.extend_from_slice(&row[at..]);
    }
    let hkk = channel.h(user, user);
    let values = v.values.iter().map(|x| hkk * x).collect();
    DimensionSet {
        kind: DimensionKind::S,
        layer: v.layer,
        user: Some(user),
        k: v.k,
        support,
        exponents,
        values,
    }
}

/// `I_{k,ℓ}`: the union over interferers `l ≠ k` of
/// `{h_kl^n · Π_{(i,j)≠(k,l)} h_ij^{β_ij}}` with `V_{ℓ,n} \ {1}`, sorted
/// and deduplicated by exponent matrix. Fails if the result does not have
/// exactly `M_ℓ − N_ℓ` elements.
pub fn interference_set(channel: &ChannelRealization, user: usize, ell: usize, n: u64) -> Result<DimensionSet> {
    let v = monomial_set(channel, ell, n)?;
    check_user(channel.k(), user, ell)?;
    interference_from(channel, &v, user, n)
}

pub(crate) fn interference_from(
    channel: &ChannelRealization,
    v: &DimensionSet,
    user: usize,
    n: u64,
) -> Result<DimensionSet> {
    let k = channel.k();
    let ell = v.layer;
    let n8 = n as u8;
    let (big_n, m) = alignment_dims(k - ell + 1, n);
    let expected = guard_size(&(m - &big_n), ell, user)?;
    let support = v.support.clone();
    let width = support.len();

    let mut raw: Vec<u8> = Vec::with_capacity((expected + 1) * width);
    let mut rest = Vec::new();
    for l in (ell..=k).filter(|&l| l != user) {
        let col = support
            .iter()
            .position(|&c| c == (user, l))
            .expect("cross pair present");
        rest.clear();
        enumerate_box(width - 1, n8, &mut rest);
        for r in rest.chunks(width - 1) {
            raw.extend_from_slice(&r[..col]);
            raw.push(n8);
            raw.extend_from_slice(&r[col..]);
        }
    }
    // V \ {1}; the all-zero row is V's first element
    raw.extend_from_slice(&v.exponents[width..]);

    let count = raw.len() / width;
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_unstable_by(|&a, &b| raw[a * width..(a + 1) * width].cmp(&raw[b * width..(b + 1) * width]));
    let mut exponents = Vec::with_capacity(raw.len());
    let mut last: Option<usize> = None;
    for idx in order {
        let row = &raw[idx * width..(idx + 1) * width];
        if let Some(prev) = last {
            if &raw[prev * width..(prev + 1) * width] == row {
                continue;
            }
        }
        exponents.extend_from_slice(row);
        last = Some(idx);
    }
    let got = exponents.len() / width;
    if got != expected || count != expected {
        return Err(Error::Cardinality {
            set: "I",
            got,
            expected,
        });
    }
    let values = exponents
        .chunks(width)
        .map(|row| monomial_value(channel, &support, row))
        .collect();
    Ok(DimensionSet {
        kind: DimensionKind::I,
        layer: ell,
        user: Some(user),
        k,
        support,
        exponents,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link_sim::channel::sample_channel;

    fn chan(k: usize) -> ChannelRealization {
        sample_channel(k, 0.5, 2.0, 42).unwrap()
    }

    #[test]
    fn v_with_n1_is_the_constant() {
        let ch = chan(3);
        let v = monomial_set(&ch, 1, 1).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.values(), &[1.0]);
        assert!(v.row(0).iter().all(|&e| e == 0));
    }

    #[test]
    fn v_is_an_enumeration_of_the_exponent_box() {
        // independent oracle: every 0/1 assignment to the 6 cross links
        let ch = chan(3);
        let v = monomial_set(&ch, 1, 2).unwrap();
        assert_eq!(v.len(), 64);
        assert_eq!(v.support(), &[(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)]);
        assert!(v.is_strictly_sorted());
        for mask in 0u32..64 {
            let row: Vec<u8> = (0..6).rev().map(|b| ((mask >> b) & 1) as u8).collect();
            let idx = v.position(&row).expect("every assignment present");
            assert_eq!(idx, mask as usize);
            let expected: f64 = v
                .support()
                .iter()
                .zip(&row)
                .filter(|(_, &e)| e == 1)
                .map(|(&(i, j), _)| ch.h(i, j))
                .product();
            assert!((v.values()[idx] - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn v_on_a_later_layer_uses_only_its_users() {
        let ch = chan(4);
        let v = monomial_set(&ch, 2, 2).unwrap();
        assert_eq!(v.len(), 64);
        assert!(v.support().iter().all(|&(i, j)| i >= 2 && j >= 2));
        assert!(monomial_set(&ch, 3, 1).is_err());
    }

    #[test]
    fn interference_n1() {
        let ch = chan(3);
        let i1 = interference_set(&ch, 1, 1, 1).unwrap();
        let mut got: Vec<f64> = i1.values().to_vec();
        got.sort_by(f64::total_cmp);
        let mut want = vec![ch.h(1, 2), ch.h(1, 3)];
        want.sort_by(f64::total_cmp);
        assert_eq!(got, want);

        let i3 = interference_set(&ch, 3, 1, 1).unwrap();
        assert_eq!(i3.len(), 2);
        assert_eq!(i3.exponent(0, (3, 2)) + i3.exponent(1, (3, 2)), 1);
        assert_eq!(i3.exponent(0, (3, 1)) + i3.exponent(1, (3, 1)), 1);
    }

    #[test]
    fn interference_contains_every_aligned_product() {
        // each h_kj · V(i) must land on an element of I
        let ch = chan(3);
        let n = 2;
        let v = monomial_set(&ch, 1, n).unwrap();
        for k in 1..=3 {
            let iset = interference_set(&ch, k, 1, n).unwrap();
            assert_eq!(iset.len(), 127);
            for j in (1..=3).filter(|&j| j != k) {
                let col = v.support().iter().position(|&c| c == (k, j)).unwrap();
                for i in 0..v.len() {
                    let mut row = v.row(i).to_vec();
                    row[col] += 1;
                    let pos = iset.position(&row).expect("aligned");
                    let want = ch.h(k, j) * v.values()[i];
                    assert!((iset.values()[pos] - want).abs() <= 1e-12 * want.abs());
                }
            }
        }
    }

    #[test]
    fn desired_has_hkk_once() {
        let ch = chan(3);
        let s = desired_set(&ch, 2, 1, 1).unwrap();
        assert_eq!(s.values(), &[ch.h(2, 2)]);
        let s = desired_set(&ch, 1, 1, 2).unwrap();
        assert_eq!(s.len(), 64);
        assert!(s.is_strictly_sorted());
        assert!((0..s.len()).all(|i| s.exponent(i, (1, 1)) == 1));
        let i = interference_set(&ch, 1, 1, 2).unwrap();
        assert!(s.is_disjoint(&i));
        assert!(!s.is_disjoint(&s));
    }

    #[test]
    fn user_and_layer_checks() {
        let ch = chan(4);
        assert!(matches!(desired_set(&ch, 1, 2, 1), Err(Error::UserOutOfRange { .. })));
        assert!(matches!(
            interference_set(&ch, 5, 1, 1),
            Err(Error::UserOutOfRange { .. })
        ));
        assert!(matches!(
            interference_set(&ch, 4, 3, 1),
            Err(Error::LayerOutOfRange { .. })
        ));
    }

    #[test]
    fn oversized_sets_are_refused() {
        let ch = chan(6);
        // K_1 = 6: 2^30 monomials
        assert!(matches!(monomial_set(&ch, 1, 2), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn full_row_layout() {
        let ch = chan(3);
        let s = desired_set(&ch, 3, 1, 1).unwrap();
        let m = s.full_row(0);
        assert_eq!(m.len(), 9);
        assert_eq!(m.iter().sum::<u32>(), 1);
        assert_eq!(m[8], 1);
    }
}
