//! Scalar abstraction shared by the probability primitives and the closed-form solvers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the solvers: `f32` or `f64`.
///
/// Tolerances scale with the precision of the type. The values for `f64`
/// are the ones the rest of the crate is written against.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Slack allowed on probability validity (non-negativity, unit total mass).
    const PROB_TOL: Self;
    /// Slack allowed on linear constraint rows when filtering candidate points.
    const SLACK_TOL: Self;
    /// Tolerance on reported objective agreement (value vs. recomputed value).
    const VALUE_TOL: Self;

    /// Converts an `f64` literal. Panics only if the target type cannot hold it,
    /// which does not happen for `f32`/`f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f64 {
    const PROB_TOL: f64 = 1e-12;
    const SLACK_TOL: f64 = 1e-9;
    const VALUE_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const PROB_TOL: f32 = 1e-6;
    const SLACK_TOL: f32 = 1e-5;
    const VALUE_TOL: f32 = 1e-5;
}
