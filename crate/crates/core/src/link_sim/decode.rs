//! Exhaustive nearest-point decoding and minimum distances.
//!
//! Both searches walk every assignment of all coefficients but the last
//! in lexicographic order and solve for the last one by rounding, which
//! gives the same answer as enumerating the full box at a fraction of the
//! cost.

use super::codebook::LayerCodebook;
use crate::error::{Error, Result};

/// `per_dim(r)` is the number of values one coordinate of range `r` takes.
fn cap_check(cb: &LayerCodebook, per_dim: fn(i64) -> f64, cap: f64) -> Result<()> {
    let log10_size: f64 = cb.ranges.iter().map(|&r| per_dim(r).log10()).sum();
    if log10_size > cap.log10() {
        return Err(Error::EnumerationCap {
            user: cb.user,
            layer: cb.layer,
            log10_size,
            cap,
        });
    }
    Ok(())
}

/// Advances `digits` through `[−r_i, r_i]` lexicographically; false once exhausted.
fn advance(digits: &mut [i64], ranges: &[i64]) -> bool {
    for (d, &r) in digits.iter_mut().zip(ranges).rev() {
        if *d < r {
            *d += 1;
            return true;
        }
        *d = -r;
    }
    false
}

/// Minimizes `|target − scale·Σ values_i c_i|` over `|c_i| ≤ ranges_i`,
/// optionally excluding `c = 0`. Ties go to the lexicographically
/// smallest `c`.
fn nearest(target: f64, values: &[f64], ranges: &[i64], scale: f64, exclude_zero: bool) -> Option<(Vec<i64>, f64)> {
    let d = values.len();
    if d == 0 {
        return None;
    }
    let last = d - 1;
    let (v_last, r_last) = (values[last], ranges[last]);
    let mut prefix: Vec<i64> = ranges[..last].iter().map(|&r| -r).collect();
    let mut best: Option<(Vec<i64>, f64)> = None;
    loop {
        let mut s = 0.0;
        for (v, &c) in values[..last].iter().zip(&prefix) {
            s += v * c as f64;
        }
        let zero_prefix = exclude_zero && prefix.iter().all(|&c| c == 0);
        let t = ((target / scale - s) / v_last).round();
        let c = if t.is_finite() {
            t.clamp(-(r_last as f64), r_last as f64) as i64
        } else {
            0
        };
        let lo = (c - 1).max(-r_last);
        let hi = (c + 1).min(r_last);
        let mut extra = [None, None];
        if zero_prefix && lo >= 0 {
            extra[0] = Some(-1);
        }
        if zero_prefix && hi <= 0 {
            extra[1] = Some(1);
        }
        let cands = extra[0].into_iter().chain(lo..=hi).chain(extra[1]);
        for x in cands {
            if (zero_prefix && x == 0) || x.abs() > r_last {
                continue;
            }
            let dist = (target - scale * (s + v_last * x as f64)).abs();
            if best.as_ref().is_none_or(|(_, b)| dist < *b) {
                let mut full = prefix.clone();
                full.push(x);
                best = Some((full, dist));
            }
        }
        if !advance(&mut prefix, &ranges[..last]) {
            break;
        }
    }
    best
}

/// The decision `(q, q')` closest to `obs`, concatenated as the
/// codebook's dimensions. Empty for an inactive layer.
pub fn decode_layer(obs: f64, cb: &LayerCodebook, cap: f64) -> Result<Vec<i64>> {
    cap_check(cb, |r| (2 * r + 1) as f64, cap)?;
    Ok(nearest(obs, &cb.values, &cb.ranges, cb.scale, false)
        .map(|(c, _)| c)
        .unwrap_or_default())
}

/// Reference decoder that scores every point of the box. Same output as
/// [`decode_layer`], far slower.
pub fn decode_layer_exhaustive(obs: f64, cb: &LayerCodebook, cap: f64) -> Result<Vec<i64>> {
    cap_check(cb, |r| (2 * r + 1) as f64, cap)?;
    if cb.dims() == 0 {
        return Ok(Vec::new());
    }
    let mut c: Vec<i64> = cb.ranges.iter().map(|&r| -r).collect();
    let mut best = (c.clone(), f64::INFINITY);
    loop {
        let mut s = 0.0;
        for (v, &q) in cb.values.iter().zip(&c) {
            s += v * q as f64;
        }
        let dist = (obs - cb.scale * s).abs();
        if dist < best.1 {
            best = (c.clone(), dist);
        }
        if !advance(&mut c, &cb.ranges) {
            break;
        }
    }
    Ok(best.0)
}

/// Minimum distance between two received constellation points of the
/// layer: `min |scale·Σ values_i d_i|` over nonzero differences
/// `|d_i| ≤ 2·ranges_i`. Zero dimensions give `+∞`.
pub fn dmin_bruteforce(cb: &LayerCodebook, cap: f64) -> Result<f64> {
    cap_check(cb, |r| (4 * r + 1) as f64, cap)?;
    let ranges: Vec<i64> = cb.ranges.iter().map(|&r| 2 * r).collect();
    Ok(nearest(0.0, &cb.values, &ranges, cb.scale, true).map_or(f64::INFINITY, |(_, d)| d))
}

/// Same minimum by scoring every difference vector.
pub fn dmin_exhaustive(cb: &LayerCodebook, cap: f64) -> Result<f64> {
    cap_check(cb, |r| (4 * r + 1) as f64, cap)?;
    if cb.dims() == 0 {
        return Ok(f64::INFINITY);
    }
    let ranges: Vec<i64> = cb.ranges.iter().map(|&r| 2 * r).collect();
    let mut d: Vec<i64> = ranges.iter().map(|&r| -r).collect();
    let mut best = f64::INFINITY;
    loop {
        if d.iter().any(|&x| x != 0) {
            let mut s = 0.0;
            for (v, &q) in cb.values.iter().zip(&d) {
                s += v * q as f64;
            }
            best = best.min((cb.scale * s).abs());
        }
        if !advance(&mut d, &ranges) {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb(values: Vec<f64>, ranges: Vec<i64>, scale: f64) -> LayerCodebook {
        LayerCodebook {
            user: 1,
            layer: 1,
            active: true,
            n_desired: 1,
            values,
            ranges,
            scale,
            routes: Vec::new(),
        }
    }

    #[test]
    fn single_dimension() {
        let c = cb(vec![1.5], vec![3], 2.0);
        assert_eq!(decode_layer(6.1, &c, 1e6).unwrap(), vec![2]);
        assert_eq!(decode_layer(100.0, &c, 1e6).unwrap(), vec![3]);
        assert_eq!(decode_layer(-100.0, &c, 1e6).unwrap(), vec![-3]);
        assert_eq!(dmin_bruteforce(&c, 1e6).unwrap(), 3.0);
    }

    #[test]
    fn ties_prefer_lexicographically_smallest() {
        // 0.5 is equidistant from labels 0 and 1
        let c = cb(vec![1.0], vec![2], 1.0);
        assert_eq!(decode_layer(0.5, &c, 1e6).unwrap(), vec![0]);
        assert_eq!(decode_layer_exhaustive(0.5, &c, 1e6).unwrap(), vec![0]);
        // (1, 0) and (0, 1) both hit 1.0 exactly
        let c = cb(vec![1.0, 1.0], vec![1, 1], 1.0);
        assert_eq!(decode_layer(1.0, &c, 1e6).unwrap(), vec![0, 1]);
        assert_eq!(decode_layer_exhaustive(1.0, &c, 1e6).unwrap(), vec![0, 1]);
    }

    #[test]
    fn fast_and_exhaustive_agree() {
        let c = cb(vec![1.0, 2f64.sqrt(), 3f64.sqrt()], vec![2, 5, 5], 0.7);
        for i in 0..400 {
            let obs = -9.0 + 0.045 * i as f64;
            assert_eq!(
                decode_layer(obs, &c, 1e6).unwrap(),
                decode_layer_exhaustive(obs, &c, 1e6).unwrap()
            );
        }
        assert_eq!(dmin_bruteforce(&c, 1e9).unwrap(), dmin_exhaustive(&c, 1e9).unwrap());
    }

    #[test]
    fn dmin_of_dependent_dimensions_is_zero() {
        let c = cb(vec![1.0, 2.0], vec![2, 2], 1.0);
        assert_eq!(dmin_bruteforce(&c, 1e6).unwrap(), 0.0);
    }

    #[test]
    fn cap_is_enforced() {
        let c = cb(vec![1.0, 2.0, 3.0], vec![10, 10, 10], 1.0);
        let err = decode_layer(0.0, &c, 1000.0).unwrap_err();
        assert!(
            matches!(err, Error::EnumerationCap { log10_size, .. } if (log10_size - 9261f64.log10()).abs() < 1e-12)
        );
        assert!(dmin_bruteforce(&c, 1e4).is_err());
    }

    #[test]
    fn empty_codebook() {
        let c = cb(Vec::new(), Vec::new(), 1.0);
        assert!(decode_layer(3.0, &c, 1.0).unwrap().is_empty());
        assert_eq!(dmin_bruteforce(&c, 1.0).unwrap(), f64::INFINITY);
    }
}
