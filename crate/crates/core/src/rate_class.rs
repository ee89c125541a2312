//! Closed-form Bernoulli coupling under a rate budget and a classification budget.
//!
//! The label is `S = X xor S1` with `S1 ~ Bern(q_S1)`. Under the map mixture the
//! classification cost is linear in the weights,
//!
//! ```text
//! (p1 + p2) H_b(q_S1) + (p3 + p4) H_b(m) <= C,   m = (1-q_X)(1-q_S1) + q_X q_S1,
//! ```
//!
//! and since `H_b(m) >= H_b(q_S1)` this row is a *lower* bound on the bijective
//! mass `s = p1 + p2`, while the rate row is an upper bound on it. After
//! eliminating `p3, p4` through the marginal and simplex rows the feasible set
//! is a polygon in `(p1, p2)` cut out by six lines:
//!
//! | edge         | line                                   |
//! |--------------|----------------------------------------|
//! | `NoIdentity` | `p1 = 0`                               |
//! | `NoFlip`     | `p2 = 0`                               |
//! | `NoZero`     | `(1-q_X) p1 + q_X p2 = 1 - q_Y`        |
//! | `NoOne`      | `q_X p1 + (1-q_X) p2 = q_Y`            |
//! | `Rate`       | `p1 + p2 = R / H_b(q_X)`               |
//! | `Class`      | `p1 + p2 = (C - H_b(m)) / (H_b(q_S1) - H_b(m))` |
//!
//! The objective is convex in `d = p1 - p2`, so the optimum is a vertex. Every
//! vertex is the intersection of two edges; each candidate below is one such
//! intersection written out in closed form, and the solver keeps the best
//! feasible one.

use serde::Serialize;

use crate::error::{MecError, Result};
use crate::mixture::{MapMixture, Relabeling};
use crate::prob::binary_entropy_unchecked as hb;
use crate::rate::{check_budget, check_canonical, objective_at, reflect, solve_mecbr, RateProblem};
use crate::real::Real;
use crate::solution::{CaseLabel, Coupling, KktCase, Part, SolverResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateClassProblem<T> {
    pub q_x: T,
    pub q_y: T,
    pub q_s1: T,
    pub rate: T,
    pub cclass: T,
}

impl<T: Real> RateClassProblem<T> {
    pub fn new(q_x: T, q_y: T, q_s1: T, rate: T, cclass: T) -> Result<Self> {
        Ok(Self {
            q_x: check_canonical("q_X", q_x)?,
            q_y: check_canonical("q_Y", q_y)?,
            q_s1: check_canonical("q_S1", q_s1)?,
            rate: check_budget("R", rate)?,
            cclass: check_budget("C", cclass)?,
        })
    }

    /// Reflects `q_x, q_y, q_s1` from `(0, 1)` into `(0, 1/2]`. Relabeling `X`
    /// or `S1` only relabels `S`, which leaves `H(S|Y)` unchanged.
    pub fn reflected(q_x: T, q_y: T, q_s1: T, rate: T, cclass: T) -> Result<(Self, Relabeling)> {
        let (q_x, x) = reflect("q_X", q_x)?;
        let (q_y, y) = reflect("q_Y", q_y)?;
        let (q_s1, _) = reflect("q_S1", q_s1)?;
        Ok((
            Self::new(q_x, q_y, q_s1, rate, cclass)?,
            Relabeling { x, y },
        ))
    }

    pub fn rate_problem(&self) -> RateProblem<T> {
        RateProblem {
            q_x: self.q_x,
            q_y: self.q_y,
            rate: self.rate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedLabelParams<T> {
    /// `P(S = 1) = q_X + q_S1 - 2 q_X q_S1`.
    pub q_s: T,
    /// `P(S = 0) = (1-q_X)(1-q_S1) + q_X q_S1`; note `m = 1 - q_S`.
    pub m: T,
    pub hb_m: T,
    pub hb_qs1: T,
}

impl<T: Real> DerivedLabelParams<T> {
    /// Classification cost `(p1+p2) H_b(q_S1) + (p3+p4) H_b(m)` of a weight vector.
    pub fn classification_cost(&self, w: &[T; 4]) -> T {
        (w[0] + w[1]) * self.hb_qs1 + (w[2] + w[3]) * self.hb_m
    }

    /// Whether `H_b(m) = H_b(q_S1)`, which happens exactly at `q_S1 = 1/2`.
    pub fn is_degenerate(&self) -> bool {
        (self.hb_m - self.hb_qs1).abs() <= T::PROB_TOL
    }

    /// Bijective mass at which the classification row is tight,
    /// `(C - H_b(m)) / (H_b(q_S1) - H_b(m))`.
    pub fn class_threshold(&self, cclass: T) -> T {
        (cclass - self.hb_m) / (self.hb_qs1 - self.hb_m)
    }
}

pub fn label_params<T: Real>(p: &RateClassProblem<T>) -> DerivedLabelParams<T> {
    let one = T::one();
    let q_s = p.q_x + p.q_s1 - T::two() * p.q_x * p.q_s1;
    let m = (one - p.q_x) * (one - p.q_s1) + p.q_x * p.q_s1;
    let params = DerivedLabelParams {
        q_s,
        m,
        hb_m: hb(m),
        hb_qs1: hb(p.q_s1),
    };
    debug_assert!(params.hb_m >= params.hb_qs1 - T::PROB_TOL);
    params
}

/// Necessary condition `C >= H_b(q_S1)`: no reconstruction can tell more
/// about `S` than `X` itself does. It is not sufficient; a small rate budget
/// can still make the problem infeasible (see [`solve_mecbrc`]).
pub fn feasibility<T: Real>(p: &RateClassProblem<T>) -> bool {
    p.cclass >= hb(p.q_s1) - T::PROB_TOL
}

/// One side of the feasible polygon in `(p1, p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Edge {
    /// `p1 = 0`
    NoIdentity,
    /// `p2 = 0`
    NoFlip,
    /// `p3 = 0`
    NoZero,
    /// `p4 = 0`
    NoOne,
    /// rate row tight
    Rate,
    /// classification row tight
    Class,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintSlacks<T> {
    /// `R - H_b(q_X)(p1+p2)`.
    pub rate: T,
    /// `C - classification cost`.
    pub classification: T,
    /// `|q_X p1 + (1-q_X) p2 + p4 - q_Y|`.
    pub marginal: T,
    /// `|p1 + p2 + p3 + p4 - 1|`.
    pub simplex: T,
    /// `min_i p_i`.
    pub min_weight: T,
}

impl<T: Real> ConstraintSlacks<T> {
    pub fn satisfied(&self) -> bool {
        let tol = T::SLACK_TOL;
        self.rate >= -tol
            && self.classification >= -tol
            && self.marginal <= tol
            && self.simplex <= tol
            && self.min_weight >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSolution<T> {
    pub edges: (Edge, Edge),
    /// Projected onto the simplex; raw weights may be off by the slack tolerance.
    pub mixture: MapMixture<T>,
    pub value: T,
    pub branch: CaseLabel,
    pub feasible: bool,
    pub slacks: ConstraintSlacks<T>,
}

struct Raw<T> {
    edges: (Edge, Edge),
    weights: [T; 4],
}

/// Weights with `p2 = 0` and `p1 = x`.
fn identity_only<T: Real>(p: &RateClassProblem<T>, x: T) -> [T; 4] {
    let one = T::one();
    [
        x,
        T::zero(),
        one - p.q_y - (one - p.q_x) * x,
        p.q_y - p.q_x * x,
    ]
}

/// Weights with `p1 = 0` and `p2 = x`.
fn flip_only<T: Real>(p: &RateClassProblem<T>, x: T) -> [T; 4] {
    let one = T::one();
    [
        T::zero(),
        x,
        one - p.q_y - p.q_x * x,
        p.q_y - (one - p.q_x) * x,
    ]
}

/// Bijective mass `s` with `p3 = 0`.
fn mixed_no_zero<T: Real>(p: &RateClassProblem<T>, s: T) -> [T; 4] {
    let one = T::one();
    let p1 = (one - p.q_y - p.q_x * s) / (one - T::two() * p.q_x);
    [p1, s - p1, T::zero(), one - s]
}

/// Bijective mass `s` with `p4 = 0`.
fn mixed_no_one<T: Real>(p: &RateClassProblem<T>, s: T) -> [T; 4] {
    let one = T::one();
    let p1 = ((one - p.q_x) * s - p.q_y) / (one - T::two() * p.q_x);
    [p1, s - p1, one - s, T::zero()]
}

fn raw_candidates<T: Real>(p: &RateClassProblem<T>, lp: &DerivedLabelParams<T>) -> Vec<Raw<T>> {
    use Edge::*;
    let one = T::one();
    let rate_mass = p.rate / hb(p.q_x);
    let class_mass = lp.class_threshold(p.cclass);
    let mut out = Vec::with_capacity(14);
    let mut push = |edges, weights: [T; 4]| {
        if weights.iter().all(|w| w.is_finite()) {
            out.push(Raw { edges, weights });
        }
    };

    // Identity-map branch (p2 = 0).
    push((NoFlip, Rate), identity_only(p, rate_mass));
    push((NoFlip, Class), identity_only(p, class_mass));
    push((NoFlip, NoOne), identity_only(p, p.q_y / p.q_x));
    push(
        (NoFlip, NoZero),
        identity_only(p, (one - p.q_y) / (one - p.q_x)),
    );

    // Flip-map branch (p1 = 0).
    push((NoIdentity, Rate), flip_only(p, rate_mass));
    push((NoIdentity, Class), flip_only(p, class_mass));
    push((NoIdentity, NoOne), flip_only(p, p.q_y / (one - p.q_x)));
    push((NoIdentity, NoZero), flip_only(p, (one - p.q_y) / p.q_x));

    // Both bijections in use. At q_X = 1/2 the marginal edges are parallel to
    // the budget edges and these vertices do not exist.
    if (one - T::two() * p.q_x).abs() > T::PROB_TOL {
        push((Rate, NoZero), mixed_no_zero(p, rate_mass));
        push((Rate, NoOne), mixed_no_one(p, rate_mass));
        push((Class, NoZero), mixed_no_zero(p, class_mass));
        push((Class, NoOne), mixed_no_one(p, class_mass));
        push((NoZero, NoOne), mixed_no_zero(p, one));
    }

    // Constant maps only.
    push(
        (NoIdentity, NoFlip),
        [T::zero(), T::zero(), one - p.q_y, p.q_y],
    );
    out
}

fn slacks_of<T: Real>(
    p: &RateClassProblem<T>,
    lp: &DerivedLabelParams<T>,
    w: &[T; 4],
) -> ConstraintSlacks<T> {
    let one = T::one();
    let [p1, p2, p3, p4] = *w;
    ConstraintSlacks {
        rate: p.rate - hb(p.q_x) * (p1 + p2),
        classification: p.cclass - lp.classification_cost(w),
        marginal: (p.q_x * p1 + (one - p.q_x) * p2 + p4 - p.q_y).abs(),
        simplex: (p1 + p2 + p3 + p4 - one).abs(),
        min_weight: p1.min(p2).min(p3).min(p4),
    }
}

fn evaluate<T: Real>(
    p: &RateClassProblem<T>,
    lp: &DerivedLabelParams<T>,
    raw: Raw<T>,
) -> CandidateSolution<T> {
    let slacks = slacks_of(p, lp, &raw.weights);
    let feasible = slacks.satisfied();
    let mixture = MapMixture::project(raw.weights);
    let d = mixture.difference();
    let part = if d >= T::zero() { Part::I } else { Part::II };
    let tol = T::SLACK_TOL;
    let case = KktCase::from_activity(slacks.rate.abs() <= tol, slacks.classification.abs() <= tol);
    CandidateSolution {
        edges: raw.edges,
        mixture,
        value: objective_at(p.q_x, p.q_y, d),
        branch: CaseLabel::Kkt(part, case),
        feasible,
        slacks,
    }
}

/// Every vertex candidate of the feasible polygon, feasible or not.
///
/// Fails with [`MecError::DegenerateDenominator`] when `H_b(q_S1) = H_b(m)`,
/// where the classification row no longer depends on the mixture.
pub fn candidate_solutions<T: Real>(p: &RateClassProblem<T>) -> Result<Vec<CandidateSolution<T>>> {
    let lp = label_params(p);
    if lp.is_degenerate() {
        return Err(MecError::DegenerateDenominator(
            lp.hb_m.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(raw_candidates(p, &lp)
        .into_iter()
        .map(|raw| evaluate(p, &lp, raw))
        .collect())
}

fn kkt_label(label: CaseLabel) -> CaseLabel {
    let part = |c| match c {
        Coupling::Positive => Part::I,
        Coupling::Negative => Part::II,
    };
    match label {
        CaseLabel::RateBound(c) => CaseLabel::Kkt(part(c), KktCase::Case1),
        CaseLabel::MarginalBound(c) => CaseLabel::Kkt(part(c), KktCase::Case4),
        CaseLabel::Degenerate => CaseLabel::Kkt(Part::I, KktCase::Case1),
        other => other,
    }
}

/// Optimal coupling under both budgets.
///
/// Errors with [`MecError::BelowLabelNoise`] when `C < H_b(q_S1)` and with
/// [`MecError::BudgetConflict`] when the rate budget cannot afford the
/// bijective mass the classification budget demands.
pub fn solve_mecbrc<T: Real>(p: &RateClassProblem<T>) -> Result<SolverResult<T>> {
    let lp = label_params(p);
    if !feasibility(p) {
        return Err(MecError::BelowLabelNoise {
            c: p.cclass.to_f64().unwrap_or(f64::NAN),
            floor: lp.hb_qs1.to_f64().unwrap_or(f64::NAN),
        });
    }
    if lp.is_degenerate() {
        // Classification cost is H_b(m) for every mixture, and C >= H_b(q_S1) = H_b(m).
        let mut r = solve_mecbr(&p.rate_problem());
        r.case_label = kkt_label(r.case_label);
        return Ok(r);
    }
    let best = candidate_solutions(p)?
        .into_iter()
        .filter(|c| c.feasible)
        .fold(None::<CandidateSolution<T>>, |best, c| match best {
            Some(b) if c.value <= b.value + T::PROB_TOL => Some(b),
            _ => Some(c),
        });
    let best = best.ok_or_else(|| MecError::BudgetConflict {
        rate: p.rate.to_f64().unwrap_or(f64::NAN),
        c: p.cclass.to_f64().unwrap_or(f64::NAN),
    })?;
    let alpha = match best.branch {
        CaseLabel::Kkt(Part::I, _) => Some(best.mixture.weights()[0]),
        _ => None,
    };
    Ok(SolverResult {
        value: best.value,
        mixture: best.mixture,
        case_label: best.branch,
        alpha,
        relabeling: Relabeling::default(),
    })
}

/// Solves with `q_x, q_y, q_s1` anywhere in `(0, 1)` by reflection.
pub fn solve_mecbrc_reflected<T: Real>(
    q_x: T,
    q_y: T,
    q_s1: T,
    rate: T,
    cclass: T,
) -> Result<SolverResult<T>> {
    let (p, relabel) = RateClassProblem::reflected(q_x, q_y, q_s1, rate, cclass)?;
    let mut r = solve_mecbrc(&p)?;
    r.mixture = r.mixture.unreflect(relabel);
    r.relabeling = relabel;
    Ok(r)
}

/// Branch of the piecewise KKT expression whose condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PiecewiseBranch {
    /// Identity map, rate tight.
    IdentityRate,
    /// Flip map, rate tight.
    FlipRate,
    /// Identity map, classification tight.
    IdentityClass,
    /// Flip map, classification tight.
    FlipClass,
    /// Unconstrained positive-dependence coupling.
    Unconstrained,
}

/// The piecewise closed form of the KKT analysis, evaluated literally: returns the first
/// branch whose condition holds strictly, with its value.
///
/// This is kept for comparison against [`solve_mecbrc`]. The conditions do
/// not partition the parameter space, and the classification branches can
/// return points that violate the rate row. The last branch needs
/// `H_b(q_S) < C < H_b(m)`, which never holds because `m = 1 - q_S`.
pub fn piecewise_value<T: Real>(p: &RateClassProblem<T>) -> Option<(PiecewiseBranch, T)> {
    let one = T::one();
    let lp = label_params(p);
    let hx = hb(p.q_x);
    let r = p.rate / hx;
    let pos_cap = (p.q_y / p.q_x).min((one - p.q_y) / (one - p.q_x));
    let neg_cap = (p.q_y / (one - p.q_x)).min((one - p.q_y) / p.q_x);
    let class_at_rate = r * (lp.hb_qs1 - lp.hb_m) + lp.hb_m;
    let c = p.cclass;
    let t = if lp.is_degenerate() {
        T::nan()
    } else {
        lp.class_threshold(c)
    };

    if class_at_rate < c && c < lp.hb_m && p.rate <= hx * pos_cap {
        return Some((PiecewiseBranch::IdentityRate, objective_at(p.q_x, p.q_y, r)));
    }
    if class_at_rate < c && c < lp.hb_m && p.rate <= hx * neg_cap {
        return Some((PiecewiseBranch::FlipRate, objective_at(p.q_x, p.q_y, -r)));
    }
    let class_floor = |cap: T| lp.hb_m - (lp.hb_m - lp.hb_qs1) * cap;
    if lp.hb_qs1 <= c && c <= class_at_rate && c >= class_floor(pos_cap) && t.is_finite() {
        return Some((
            PiecewiseBranch::IdentityClass,
            objective_at(p.q_x, p.q_y, t),
        ));
    }
    if lp.hb_qs1 <= c && c <= class_at_rate && c >= class_floor(neg_cap) && t.is_finite() {
        return Some((PiecewiseBranch::FlipClass, objective_at(p.q_x, p.q_y, -t)));
    }
    if hb(lp.q_s) < c && c < lp.hb_m && p.rate > hx {
        return Some((
            PiecewiseBranch::Unconstrained,
            objective_at(p.q_x, p.q_y, pos_cap),
        ));
    }
    None
}
