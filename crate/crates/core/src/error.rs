use thiserror::Error;

/// Why a constrained problem has no feasible map mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum InfeasibleReason {
    /// The classification budget is below the label noise floor `H_b(q_S1)`.
    BelowLabelNoise,
    /// The rate budget cannot buy enough bijective-map mass to meet the
    /// classification budget (or the marginal constraint forbids it).
    BudgetConflict,
    /// No vertex of the generic polytope satisfies every row.
    EmptyPolytope,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MecError {
    #[error("{name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("not a probability distribution: {0}")]
    InvalidPmf(String),
    #[error("infeasible: classification budget C = {c} bits is below H_b(q_S1) = {floor} bits")]
    BelowLabelNoise { c: f64, floor: f64 },
    #[error("infeasible: no mixture meets rate R = {rate} bits and classification C = {c} bits together")]
    BudgetConflict { rate: f64, c: f64 },
    #[error("infeasible: the constraint polytope has no feasible vertex")]
    EmptyPolytope,
    #[error("classification row is degenerate: H_b(q_S1) = H_b(m) = {0}")]
    DegenerateDenominator(f64),
    #[error("map table would hold {requested} maps, cap is {cap}")]
    DimensionCap { requested: u128, cap: usize },
}

impl MecError {
    pub fn is_infeasible(&self) -> bool {
        self.infeasible_reason().is_some()
    }

    pub fn infeasible_reason(&self) -> Option<InfeasibleReason> {
        match self {
            MecError::BelowLabelNoise { .. } => Some(InfeasibleReason::BelowLabelNoise),
            MecError::BudgetConflict { .. } => Some(InfeasibleReason::BudgetConflict),
            MecError::EmptyPolytope => Some(InfeasibleReason::EmptyPolytope),
            _ => None,
        }
    }
}

pub type Result<T, E = MecError> = std::result::Result<T, E>;
