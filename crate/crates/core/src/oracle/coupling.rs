use serde::Serialize;

use crate::error::{MecError, Result};
use crate::prob::{mutual_information, JointPmf};

/// Feasible range of `theta = P(X=1, Y=1)` for Bernoulli marginals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrechetInterval {
    pub lower: f64,
    pub upper: f64,
}

impl FrechetInterval {
    pub fn new(q_x: f64, q_y: f64) -> Result<Self> {
        for (name, q) in [("q_X", q_x), ("q_Y", q_y)] {
            if !(0.0..=1.0).contains(&q) {
                return Err(MecError::Domain {
                    name,
                    value: q,
                    expected: "[0, 1]",
                });
            }
        }
        Ok(Self {
            lower: (q_x + q_y - 1.0).max(0.0),
            upper: q_x.min(q_y),
        })
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lower - 1e-15 && theta <= self.upper + 1e-15
    }

    /// `points` evenly spaced values from `lower` to `upper`, both included.
    pub fn grid(&self, points: usize) -> impl Iterator<Item = f64> + '_ {
        let step = (self.upper - self.lower) / (points - 1) as f64;
        (0..points).map(move |i| {
            if i + 1 == points {
                self.upper
            } else {
                self.lower + step * i as f64
            }
        })
    }
}

/// `I(X;Y)` of the Bernoulli coupling with `P(X=1, Y=1) = theta`.
pub fn coupling_information(q_x: f64, q_y: f64, theta: f64) -> Result<f64> {
    let interval = FrechetInterval::new(q_x, q_y)?;
    if !interval.contains(theta) {
        return Err(MecError::Domain {
            name: "theta",
            value: theta,
            expected: "the Frechet-Hoeffding interval",
        });
    }
    let theta = theta.clamp(interval.lower, interval.upper);
    Ok(mutual_information(&JointPmf::bernoulli_coupling(
        q_x, q_y, theta,
    )?))
}

/// Grid search of `I(theta)` over the Frechet-Hoeffding interval. Returns the
/// maximizing `theta` and its information in bits. Values within `1e-14` of
/// the running best count as ties and move the maximizer to the larger
/// `theta`; at `q_Y = 1/2` both endpoints carry the same information.
pub fn coupling_oracle_theta(q_x: f64, q_y: f64, grid: usize) -> Result<(f64, f64)> {
    if grid < 2 {
        return Err(MecError::Domain {
            name: "grid",
            value: grid as f64,
            expected: "at least 2 points",
        });
    }
    let interval = FrechetInterval::new(q_x, q_y)?;
    let mut best = (interval.lower, f64::NEG_INFINITY);
    for theta in interval.grid(grid) {
        let v = coupling_information(q_x, q_y, theta)?;
        if v >= best.1 - 1e-14 {
            best = (theta, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::binary_entropy;

    #[test]
    fn perfect_coupling_on_diagonal() {
        let (theta, v) = coupling_oracle_theta(0.3, 0.3, 101).unwrap();
        assert_eq!(theta, 0.3);
        assert!((v - binary_entropy(0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn independence_point_carries_nothing() {
        assert!(coupling_information(0.2, 0.3, 0.06).unwrap() < 1e-15);
        assert!(coupling_information(0.2, 0.3, 0.25).is_err());
    }

    #[test]
    fn endpoint_matches_closed_form() {
        let (theta, v) = coupling_oracle_theta(0.2, 0.3, 1001).unwrap();
        let closed = binary_entropy(0.3).unwrap() - 0.8 * binary_entropy(0.125).unwrap();
        assert_eq!(theta, 0.2);
        assert!((v - closed).abs() < 1e-12);
    }

    #[test]
    fn interval_bounds() {
        let i = FrechetInterval::new(0.7, 0.6).unwrap();
        assert!((i.lower - 0.3).abs() < 1e-15);
        assert_eq!(i.upper, 0.6);
        assert_eq!(i.grid(5).count(), 5);
        assert!(coupling_oracle_theta(0.2, 0.3, 1).is_err());
    }

    #[test]
    fn symmetric_target_ties_resolve_upward() {
        let (theta, _) = coupling_oracle_theta(0.05, 0.5, 1001).unwrap();
        assert_eq!(theta, 0.05);
    }
}
