//! Closed-form rate-constrained Bernoulli coupling.
//!
//! With `X ~ Bern(q_X)`, `Y ~ Bern(q_Y)` and shared randomness `U` selecting
//! one of the four binary maps, the problem is
//!
//! ```text
//! max  H_b(q_Y) - (1-q_X) H_b(p2+p4) - q_X H_b(p1+p4)
//! s.t. H_b(q_X) (p1+p2) <= R
//!      q_X p1 + (1-q_X) p2 + p4 = q_Y
//!      p in the simplex
//! ```
//!
//! The objective depends on `d = p1 - p2` only and is convex in `d` with its
//! minimum at `d = 0`, so the optimum sits at one end of the feasible range of
//! `d`. The positive end (`p2 = 0`, `p1 = alpha`) is the textbook branch; the
//! negative end (`p1 = 0`) uses the flip map and wins at low rates, so both are
//! evaluated.

use crate::error::{MecError, Result};
use crate::mixture::{MapMixture, Relabeling};
use crate::prob::binary_entropy_unchecked as hb;
use crate::real::Real;
use crate::solution::{CaseLabel, Coupling, SolverResult};

/// Validates a probability against the canonical domain `(0, 1/2]`.
pub(crate) fn check_canonical<T: Real>(name: &'static str, q: T) -> Result<T> {
    if !(q > T::zero() && q <= T::half() + T::PROB_TOL) {
        return Err(MecError::Domain {
            name,
            value: q.to_f64().unwrap_or(f64::NAN),
            expected: "(0, 1/2]",
        });
    }
    Ok(q.min(T::half()))
}

pub(crate) fn check_budget<T: Real>(name: &'static str, b: T) -> Result<T> {
    if b.is_nan() || b < T::zero() {
        return Err(MecError::Domain {
            name,
            value: b.to_f64().unwrap_or(f64::NAN),
            expected: "[0, inf)",
        });
    }
    Ok(b)
}

/// Maps `q` in `(1/2, 1)` to `1 - q`, reporting whether it flipped.
pub(crate) fn reflect<T: Real>(name: &'static str, q: T) -> Result<(T, bool)> {
    if !(q > T::zero() && q < T::one()) {
        return Err(MecError::Domain {
            name,
            value: q.to_f64().unwrap_or(f64::NAN),
            expected: "(0, 1)",
        });
    }
    if q > T::half() + T::PROB_TOL {
        Ok((T::one() - q, true))
    } else {
        Ok((q.min(T::half()), false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateProblem<T> {
    pub q_x: T,
    pub q_y: T,
    pub rate: T,
}

impl<T: Real> RateProblem<T> {
    /// Requires `0 < q_x, q_y <= 1/2` and `rate >= 0` (`+inf` allowed).
    pub fn new(q_x: T, q_y: T, rate: T) -> Result<Self> {
        Ok(Self {
            q_x: check_canonical("q_X", q_x)?,
            q_y: check_canonical("q_Y", q_y)?,
            rate: check_budget("R", rate)?,
        })
    }

    /// Accepts `q_x, q_y` anywhere in `(0, 1)`, relabeling symbols so the
    /// returned problem lies in the canonical domain.
    pub fn reflected(q_x: T, q_y: T, rate: T) -> Result<(Self, Relabeling)> {
        let (q_x, x) = reflect("q_X", q_x)?;
        let (q_y, y) = reflect("q_Y", q_y)?;
        Ok((Self::new(q_x, q_y, rate)?, Relabeling { x, y }))
    }

    /// Largest usable mass on `f1` allowed by the marginal constraint.
    pub fn positive_cap(&self) -> T {
        (self.q_y / self.q_x).min((T::one() - self.q_y) / (T::one() - self.q_x))
    }

    /// Largest usable mass on `f2` allowed by the marginal constraint.
    pub fn negative_cap(&self) -> T {
        (self.q_y / (T::one() - self.q_x)).min((T::one() - self.q_y) / self.q_x)
    }

    /// `R / H_b(q_X)`: the bijective mass the rate budget can pay for.
    pub fn rate_cap(&self) -> T {
        self.rate / hb(self.q_x)
    }
}

/// `alpha = min{R / H_b(q_X), q_Y/q_X}` if `q_Y <= q_X`, else
/// `min{R / H_b(q_X), (1-q_Y)/(1-q_X)}`.
pub fn alpha<T: Real>(q_x: T, q_y: T, rate: T) -> T {
    let marginal = if q_y <= q_x {
        q_y / q_x
    } else {
        (T::one() - q_y) / (T::one() - q_x)
    };
    (rate / hb(q_x)).min(marginal)
}

/// Rate beyond which the marginal cap, not the rate, fixes `alpha`.
pub fn saturation_rate<T: Real>(q_x: T, q_y: T) -> T {
    hb(q_x) * (q_y / q_x).min((T::one() - q_y) / (T::one() - q_x))
}

/// Objective at `d` for the canonical problem. `d = 0` is the independent
/// coupling and returns exactly zero.
pub(crate) fn objective_at<T: Real>(q_x: T, q_y: T, d: T) -> T {
    if d == T::zero() {
        return T::zero();
    }
    let one = T::one();
    (hb(q_y) - (one - q_x) * hb(q_y - q_x * d) - q_x * hb(q_y + (one - q_x) * d)).max(T::zero())
}

/// The positive-coupling branch: `p* = (alpha, 0, 1-q_Y-(1-q_X)alpha, q_Y-q_X alpha)`.
pub fn positive_branch<T: Real>(p: &RateProblem<T>) -> SolverResult<T> {
    let one = T::one();
    let a = alpha(p.q_x, p.q_y, p.rate);
    let mixture = MapMixture::project([
        a,
        T::zero(),
        one - p.q_y - (one - p.q_x) * a,
        p.q_y - p.q_x * a,
    ]);
    let case_label = if p.rate == T::zero() {
        CaseLabel::Degenerate
    } else if p.rate_cap() < p.positive_cap() {
        CaseLabel::RateBound(Coupling::Positive)
    } else {
        CaseLabel::MarginalBound(Coupling::Positive)
    };
    SolverResult {
        value: objective_at(p.q_x, p.q_y, a),
        mixture,
        case_label,
        alpha: Some(a),
        relabeling: Relabeling::default(),
    }
}

/// The negative-coupling branch: `p* = (0, beta, 1-q_Y-q_X beta, q_Y-(1-q_X)beta)`.
pub fn negative_branch<T: Real>(p: &RateProblem<T>) -> SolverResult<T> {
    let one = T::one();
    let beta = p.rate_cap().min(p.negative_cap());
    let mixture = MapMixture::project([
        T::zero(),
        beta,
        one - p.q_y - p.q_x * beta,
        p.q_y - (one - p.q_x) * beta,
    ]);
    let case_label = if p.rate == T::zero() {
        CaseLabel::Degenerate
    } else if p.rate_cap() < p.negative_cap() {
        CaseLabel::RateBound(Coupling::Negative)
    } else {
        CaseLabel::MarginalBound(Coupling::Negative)
    };
    SolverResult {
        value: objective_at(p.q_x, p.q_y, -beta),
        mixture,
        case_label,
        alpha: None,
        relabeling: Relabeling::default(),
    }
}

/// Optimal rate-constrained coupling. The positive branch is kept on ties.
pub fn solve_mecbr<T: Real>(p: &RateProblem<T>) -> SolverResult<T> {
    let pos = positive_branch(p);
    if p.rate == T::zero() {
        return pos;
    }
    let neg = negative_branch(p);
    if neg.value > pos.value + T::PROB_TOL {
        neg
    } else {
        pos
    }
}

/// Solves for `q_x, q_y` in `(0, 1)` by reflecting into `(0, 1/2]`; the
/// returned mixture is in the original labels and the relabeling is recorded.
pub fn solve_mecbr_reflected<T: Real>(q_x: T, q_y: T, rate: T) -> Result<SolverResult<T>> {
    let (p, relabel) = RateProblem::reflected(q_x, q_y, rate)?;
    let mut r = solve_mecbr(&p);
    r.mixture = r.mixture.unreflect(relabel);
    r.relabeling = relabel;
    Ok(r)
}
