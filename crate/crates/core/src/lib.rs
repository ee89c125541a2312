//! Maximum-information couplings of Bernoulli sources under rate and
//! classification budgets, with brute-force oracles and a Monte Carlo check.
//!
//! The closed-form solvers are generic over [`Real`]; the `*64` aliases below
//! fix the scalar to `f64`.

pub mod error;
pub mod mixture;
pub mod oracle;
pub mod prob;
pub mod rate;
pub mod rate_class;
pub mod real;
pub mod sim;
pub mod solution;

pub use error::{InfeasibleReason, MecError, Result};
pub use mixture::{BinaryMap, MapMixture, Relabeling};
pub use prob::{
    binary_entropy, binary_entropy_derivative, conditional_entropy, entropy, joint_entropy,
    mutual_information, Axis, JointPmf, Pmf,
};
pub use rate::{alpha, saturation_rate, solve_mecbr, solve_mecbr_reflected, RateProblem};
pub use rate_class::{
    candidate_solutions, feasibility, label_params, piecewise_value, solve_mecbrc,
    solve_mecbrc_reflected, CandidateSolution, ConstraintSlacks, DerivedLabelParams,
    PiecewiseBranch, RateClassProblem,
};
pub use real::Real;
pub use sim::{simulate, verify_constraints, ConstraintCheck, SimConfig, SimReport};
pub use solution::{CaseLabel, Coupling, KktCase, Part, SolverResult};

pub type Pmf64 = Pmf<f64>;
pub type JointPmf64 = JointPmf<f64>;
pub type MapMixture64 = MapMixture<f64>;
pub type SolverResult64 = SolverResult<f64>;
pub type RateProblem64 = RateProblem<f64>;
pub type RateClassProblem64 = RateClassProblem<f64>;
pub type SolverResult32 = SolverResult<f32>;
pub type RateProblem32 = RateProblem<f32>;
pub type RateClassProblem32 = RateClassProblem<f32>;
