use std::fmt;

use serde::Serialize;

use crate::mixture::{MapMixture, Relabeling};

/// Direction of the bijective component of an optimal mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coupling {
    /// Mass on `f1(x) = x` (`d >= 0`).
    Positive,
    /// Mass on `f2(x) = 1 - x` (`d < 0`).
    Negative,
}

/// Sign of `d = p1 - p2` at a classification-constrained candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    I,
    II,
}

/// Which budget rows are active at a classification-constrained candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KktCase {
    /// Rate active, classification inactive.
    Case1,
    /// Classification active, rate inactive.
    Case2,
    /// Both active.
    Case3,
    /// Neither active; the point sits on a marginal (non-negativity) bound.
    Case4,
}

impl KktCase {
    pub fn from_activity(rate_active: bool, class_active: bool) -> Self {
        match (rate_active, class_active) {
            (true, false) => KktCase::Case1,
            (false, true) => KktCase::Case2,
            (true, true) => KktCase::Case3,
            (false, false) => KktCase::Case4,
        }
    }

    pub fn rate_active(self) -> bool {
        matches!(self, KktCase::Case1 | KktCase::Case3)
    }

    pub fn class_active(self) -> bool {
        matches!(self, KktCase::Case2 | KktCase::Case3)
    }
}

/// Analytic branch that produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// The rate budget limits the bijective mass.
    RateBound(Coupling),
    /// The marginal constraint limits the bijective mass; the curve is flat in `R`.
    MarginalBound(Coupling),
    /// Zero rate: only constant maps are usable and the value is 0.
    Degenerate,
    /// Classification-constrained candidate.
    Kkt(Part, KktCase),
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |c: &Coupling| match c {
            Coupling::Positive => "",
            Coupling::Negative => "_anti",
        };
        match self {
            CaseLabel::RateBound(c) => write!(f, "rate_bound{}", suffix(c)),
            CaseLabel::MarginalBound(c) => write!(f, "marginal_bound{}", suffix(c)),
            CaseLabel::Degenerate => f.write_str("degenerate"),
            CaseLabel::Kkt(part, case) => {
                let p = match part {
                    Part::I => 1,
                    Part::II => 2,
                };
                let c = match case {
                    KktCase::Case1 => 1,
                    KktCase::Case2 => 2,
                    KktCase::Case3 => 3,
                    KktCase::Case4 => 4,
                };
                write!(f, "part{p}_case{c}")
            }
        }
    }
}

/// Optimal value in bits, its optimizing mixture, and the branch that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult<T> {
    pub value: T,
    pub mixture: MapMixture<T>,
    pub case_label: CaseLabel,
    /// The closed-form `alpha` when the positive-coupling branch is selected.
    pub alpha: Option<T>,
    /// Non-identity when the inputs were reflected into `(0, 1/2]`.
    pub relabeling: Relabeling,
}
