use rand::Rng;
use serde::{Deserialize, Serialize};

/// PAM set `Ω(ξ, Q) = {ξa : a ∈ ℤ, |a| ≤ Q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub xi: f64,
    pub q: u64,
}

impl Constellation {
    pub fn new(xi: f64, q: u64) -> Self {
        Self { xi, q }
    }

    pub fn size(&self) -> u64 {
        2 * self.q + 1
    }

    pub fn point(&self, a: i64) -> f64 {
        self.xi * a as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let q = self.q as i64;
        (-q..=q).map(move |a| self.point(a))
    }

    /// Mean of `x²` under a uniform draw: `ξ²Q(Q+1)/3`.
    pub fn average_power(&self) -> f64 {
        let q = self.q as f64;
        self.xi * self.xi * q * (q + 1.0) / 3.0
    }

    /// Uniform integer label in `[−Q, Q]`.
    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> i64 {
        let q = self.q as i64;
        rng.random_range(-q..=q)
    }

    /// Label of `x` if it lies on the grid (up to a relative tolerance).
    pub fn index_of(&self, x: f64) -> Option<i64> {
        let a = (x / self.xi).round();
        let tol = 1e-9 * a.abs().max(1.0);
        (a.abs() <= self.q as f64 && (x / self.xi - a).abs() <= tol).then_some(a as i64)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.index_of(x).is_some()
    }

    /// The set containing every sum of `m` members: `Ω(ξ, mQ)`.
    pub fn sumset(&self, m: u64) -> Constellation {
        Constellation::new(self.xi, self.q * m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link_sim::rng::seeded;

    #[test]
    fn points_and_power() {
        let c = Constellation::new(0.5, 2);
        let pts: Vec<f64> = c.points().collect();
        assert_eq!(pts, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let mean = pts.iter().map(|x| x * x).sum::<f64>() / pts.len() as f64;
        assert!((mean - c.average_power()).abs() < 1e-12);
    }

    #[test]
    fn membership() {
        let c = Constellation::new(0.3, 4);
        assert_eq!(c.index_of(c.point(-4)), Some(-4));
        assert!(!c.contains(0.3 * 5.0));
        assert!(!c.contains(0.15));
        assert!(c.sumset(3).contains(0.3 * 12.0));
    }

    #[test]
    fn draws_stay_in_range() {
        let c = Constellation::new(1.0, 3);
        let mut rng = seeded(9);
        for _ in 0..1000 {
            assert!(c.sample_index(&mut rng).abs() <= 3);
        }
    }
}
