#![allow(dead_code)]

use mlia::AlphaProfile;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A sorted profile of `k` rationals `p/q` in (0, 1] with `q ≤ 97`.
pub fn random_alpha<R: Rng>(k: usize, rng: &mut R) -> AlphaProfile {
    let mut v: Vec<BigRational> = (0..k)
        .map(|_| {
            let q = rng.random_range(1..=97i64);
            let p = rng.random_range(1..=q);
            rat(p, q)
        })
        .collect();
    v.sort();
    AlphaProfile::new(v).unwrap()
}

/// `(Σα + α_K − α_{K−1}) / 2`, summed independently of the library.
pub fn optimum_closed_form(alpha: &AlphaProfile) -> BigRational {
    let a = alpha.as_slice();
    let k = a.len();
    let mut total = rat(0, 1);
    for x in a {
        total += x;
    }
    total += &a[k - 1];
    total -= &a[k - 2];
    total / rat(2, 1)
}

/// Bound listings transcribed by hand, one string per bound.
pub fn listing(k: usize) -> Vec<&'static str> {
    match k {
        8 => vec![
            "4d1 + 2d3 + d7 + d8 <= 2a1 + a3 + a8",
            "4d2 + 2d3 + d7 + d8 <= 2a2 + a3 + a8",
            "4d4 + 2d6 + d7 + d8 <= 2a4 + a6 + a8",
            "4d5 + 2d6 + d7 + d8 <= 2a5 + a6 + a8",
        ],
        9 => vec![
            "8d1 + 4d5 + 2d7 + d8 + d9 <= 4a1 + 2a5 + a7 + a9",
            "8d2 + 4d5 + 2d7 + d8 + d9 <= 4a2 + 2a5 + a7 + a9",
            "8d3 + 4d6 + 2d7 + d8 + d9 <= 4a3 + 2a6 + a7 + a9",
            "8d4 + 4d6 + 2d7 + d8 + d9 <= 4a4 + 2a6 + a7 + a9",
            "d8 + d9 <= a9",
            "d8 + d9 <= a9",
            "d8 + d9 <= a9",
            "d8 + d9 <= a9",
        ],
        10 => vec![
            "8d1 + 4d5 + 2d7 + d9 + d10 <= 4a1 + 2a5 + a7 + a10",
            "8d2 + 4d5 + 2d7 + d9 + d10 <= 4a2 + 2a5 + a7 + a10",
            "8d3 + 4d6 + 2d7 + d9 + d10 <= 4a3 + 2a6 + a7 + a10",
            "8d4 + 4d6 + 2d7 + d9 + d10 <= 4a4 + 2a6 + a7 + a10",
            "2d8 + d9 + d10 <= a8 + a10",
            "2d8 + d9 + d10 <= a8 + a10",
            "2d8 + d9 + d10 <= a8 + a10",
            "2d8 + d9 + d10 <= a8 + a10",
        ],
        13 => vec![
            "8d1 + 4d5 + 2d7 + d12 + d13 <= 4a1 + 2a5 + a7 + a13",
            "8d2 + 4d5 + 2d7 + d12 + d13 <= 4a2 + 2a5 + a7 + a13",
            "8d3 + 4d6 + 2d7 + d12 + d13 <= 4a3 + 2a6 + a7 + a13",
            "8d4 + 4d6 + 2d7 + d12 + d13 <= 4a4 + 2a6 + a7 + a13",
            "4d9 + 2d11 + d12 + d13 <= 2a9 + a11 + a13",
            "4d9 + 2d11 + d12 + d13 <= 2a9 + a11 + a13",
            "4d10 + 2d11 + d12 + d13 <= 2a10 + a11 + a13",
            "8d8 + 4d10 + 2d11 + d12 + d13 <= 4a8 + 2a10 + a11 + a13",
        ],
        16 => vec![
            "8d1 + 4d5 + 2d7 + d15 + d16 <= 4a1 + 2a5 + a7 + a16",
            "8d2 + 4d5 + 2d7 + d15 + d16 <= 4a2 + 2a5 + a7 + a16",
            "8d3 + 4d6 + 2d7 + d15 + d16 <= 4a3 + 2a6 + a7 + a16",
            "8d4 + 4d6 + 2d7 + d15 + d16 <= 4a4 + 2a6 + a7 + a16",
            "8d8 + 4d12 + 2d14 + d15 + d16 <= 4a8 + 2a12 + a14 + a16",
            "8d9 + 4d12 + 2d14 + d15 + d16 <= 4a9 + 2a12 + a14 + a16",
            "8d10 + 4d13 + 2d14 + d15 + d16 <= 4a10 + 2a13 + a14 + a16",
            "8d11 + 4d13 + 2d14 + d15 + d16 <= 4a11 + 2a13 + a14 + a16",
        ],
        _ => panic!("no listing for K={k}"),
    }
}

/// Parses one listing line into `(lhs, rhs)` weight vectors of length `k`.
pub fn parse_listing_line(line: &str, k: usize) -> (Vec<u64>, Vec<u64>) {
    let (l, r) = line.split_once("<=").unwrap();
    let side = |s: &str, sym: char| {
        let mut w = vec![0u64; k];
        for term in s.split('+') {
            let term = term.trim();
            let (coef, user) = term.split_once(sym).unwrap();
            let coef = if coef.is_empty() { 1 } else { coef.parse().unwrap() };
            w[user.parse::<usize>().unwrap() - 1] += coef;
        }
        w
    };
    (side(l, 'd'), side(r, 'a'))
}
