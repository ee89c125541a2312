//! Distributions over the four deterministic maps `{0,1} -> {0,1}`.

use serde::Serialize;

use crate::error::{MecError, Result};
use crate::prob::{binary_entropy_unchecked, renormalize, JointPmf};
use crate::real::Real;

/// The four deterministic binary maps, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BinaryMap {
    /// `f1(x) = x`
    Identity,
    /// `f2(x) = 1 - x`
    Flip,
    /// `f3(x) = 0`
    Zero,
    /// `f4(x) = 1`
    One,
}

impl BinaryMap {
    pub const ALL: [BinaryMap; 4] = [
        BinaryMap::Identity,
        BinaryMap::Flip,
        BinaryMap::Zero,
        BinaryMap::One,
    ];

    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        match self {
            BinaryMap::Identity => x,
            BinaryMap::Flip => 1 - x,
            BinaryMap::Zero => 0,
            BinaryMap::One => 1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_bijective(self) -> bool {
        matches!(self, BinaryMap::Identity | BinaryMap::Flip)
    }
}

/// Which symbols were swapped when a problem outside `(0, 1/2]` was reflected
/// into the canonical domain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Relabeling {
    pub x: bool,
    pub y: bool,
}

impl Relabeling {
    pub fn is_identity(self) -> bool {
        !self.x && !self.y
    }
}

/// Weights `(p1, p2, p3, p4)` on the maps `f1..f4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapMixture<T> {
    weights: [T; 4],
}

impl<T: Real> MapMixture<T> {
    /// Validates the simplex constraint. Weights within `PROB_TOL` below zero
    /// are clamped and the vector renormalized.
    pub fn new(weights: [T; 4]) -> Result<Self> {
        let mut total = T::zero();
        for &w in &weights {
            if !w.is_finite() || w < -T::PROB_TOL {
                return Err(MecError::InvalidPmf(format!(
                    "map weight {w} is negative or not finite"
                )));
            }
            total = total + w;
        }
        if (total - T::one()).abs() > T::PROB_TOL {
            return Err(MecError::InvalidPmf(format!("map weights sum to {total}")));
        }
        Ok(Self::project(weights))
    }

    /// Clamp-and-renormalize projection onto the simplex, for candidate points
    /// that are feasible only up to the slack tolerance.
    pub(crate) fn project(weights: [T; 4]) -> Self {
        let v = renormalize(weights.to_vec());
        Self {
            weights: [v[0], v[1], v[2], v[3]],
        }
    }

    pub fn pure(map: BinaryMap) -> Self {
        let mut weights = [T::zero(); 4];
        weights[map.index()] = T::one();
        Self { weights }
    }

    pub fn weights(&self) -> [T; 4] {
        self.weights
    }

    pub fn weight(&self, map: BinaryMap) -> T {
        self.weights[map.index()]
    }

    /// Mass on the bijective maps, `p1 + p2`.
    pub fn bijective_mass(&self) -> T {
        self.weights[0] + self.weights[1]
    }

    /// `d = p1 - p2`; the objective depends on the mixture only through it.
    pub fn difference(&self) -> T {
        self.weights[0] - self.weights[1]
    }

    /// Induced `P(Y = 1) = q_X p1 + (1 - q_X) p2 + p4`.
    pub fn induced_q_y(&self, q_x: T) -> T {
        let [p1, p2, _, p4] = self.weights;
        q_x * p1 + (T::one() - q_x) * p2 + p4
    }

    /// `P(Y = 1 | X = x)`.
    pub fn prob_one_given(&self, x: u8) -> T {
        let [p1, p2, _, p4] = self.weights;
        if x == 0 {
            p2 + p4
        } else {
            p1 + p4
        }
    }

    /// Joint pmf of `(X, Y)` when `X ~ Bern(q_x)` and `Y = f_U(X)`.
    pub fn joint(&self, q_x: T) -> Result<JointPmf<T>> {
        let one = T::one();
        let px = [one - q_x, q_x];
        let mut table = Vec::with_capacity(4);
        for (x, &mass) in px.iter().enumerate() {
            let p1 = self.prob_one_given(x as u8).min(one);
            table.push(mass * (one - p1));
            table.push(mass * p1);
        }
        JointPmf::new(2, 2, table)
    }

    /// `I(X;Y) = H_b(q_Y) - (1-q_X) H_b(p2 + p4) - q_X H_b(p1 + p4)` with
    /// `q_Y` the induced marginal.
    pub fn information(&self, q_x: T) -> T {
        let q_y = self.induced_q_y(q_x);
        let v = binary_entropy_unchecked(q_y)
            - (T::one() - q_x) * binary_entropy_unchecked(self.prob_one_given(0))
            - q_x * binary_entropy_unchecked(self.prob_one_given(1));
        v.max(T::zero())
    }

    /// Rate row `H_b(q_X) (p1 + p2)`, i.e. `H(Y | U)`.
    pub fn rate(&self, q_x: T) -> T {
        binary_entropy_unchecked(q_x) * self.bijective_mass()
    }

    /// The same mixture expressed in the original labels of a reflected problem.
    pub fn unreflect(&self, relabel: Relabeling) -> Self {
        let [p1, p2, p3, p4] = self.weights;
        let weights = match (relabel.x, relabel.y) {
            (false, false) => [p1, p2, p3, p4],
            (true, false) => [p2, p1, p3, p4],
            (false, true) => [p2, p1, p4, p3],
            (true, true) => [p1, p2, p4, p3],
        };
        Self { weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::mutual_information;

    #[test]
    fn maps_in_canonical_order() {
        let table: Vec<(u8, u8)> = BinaryMap::ALL
            .iter()
            .map(|m| (m.apply(0), m.apply(1)))
            .collect();
        assert_eq!(table, vec![(0, 1), (1, 0), (0, 0), (1, 1)]);
    }

    #[test]
    fn information_matches_joint_route() {
        let m = MapMixture::new([0.5, 0.1, 0.15, 0.25]).unwrap();
        let q_x = 0.2_f64;
        let via_joint = mutual_information(&m.joint(q_x).unwrap());
        assert!((m.information(q_x) - via_joint).abs() < 1e-12);
        let marg = m.joint(q_x).unwrap().marginal(crate::prob::Axis::Col);
        assert!((marg.masses()[1] - m.induced_q_y(q_x)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(MapMixture::new([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(MapMixture::new([0.5, 0.5, 0.1, 0.0]).is_err());
        let m = MapMixture::new([1.0 + 1e-13, 0.0, -1e-13, 0.0]).unwrap();
        assert_eq!(m.weights()[2], 0.0);
    }

    #[test]
    fn unreflect_preserves_information() {
        let m = MapMixture::new([0.4, 0.1, 0.3, 0.2]).unwrap();
        let q_x = 0.3;
        // Reflecting X: the original source is Bern(1 - q_x).
        let back = m.unreflect(Relabeling { x: true, y: false });
        assert!((back.information(1.0_f64 - q_x) - m.information(q_x)).abs() < 1e-12);
        assert!((back.induced_q_y(1.0_f64 - q_x) - m.induced_q_y(q_x)).abs() < 1e-12);
        let back = m.unreflect(Relabeling { x: false, y: true });
        assert!((back.induced_q_y(q_x) - (1.0_f64 - m.induced_q_y(q_x))).abs() < 1e-12);
        assert!((back.information(q_x) - m.information(q_x)).abs() < 1e-12);
    }
}
