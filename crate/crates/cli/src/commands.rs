use mec_core::oracle::{coupling_oracle_theta, solve_bernoulli_vertex};
use mec_core::{
    solve_mecbr, solve_mecbr_reflected, solve_mecbrc, solve_mecbrc_reflected, verify_constraints,
    BinaryMap, MapMixture, RateClassProblem, RateProblem, SimConfig, SolverResult,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{OracleArgs, ProblemArgs, SimulateArgs, SolveArgs, SweepArgs, SweepVar};
use crate::error::CliError;
use crate::output::{emit, tool_version, CurvePoint, PointInputs};

/// Tolerance for the sweep monotonicity assertion and the oracle agreement check.
pub const MONOTONE_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-8;

fn require(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

fn class_inputs(p: &ProblemArgs) -> Result<Option<(f64, f64)>, CliError> {
    match (p.qs1, p.cclass) {
        (Some(q), Some(c)) => Ok(Some((q, c))),
        (None, None) => Ok(None),
        _ => Err(CliError::Usage(
            "--qs1 and --cclass must be given together".into(),
        )),
    }
}

/// Solves with the classification row when `--qs1/--cclass` are present.
pub fn solve_point(inputs: PointInputs, reflect: bool) -> Result<SolverResult<f64>, CliError> {
    let PointInputs { qx, qy, rate, .. } = inputs;
    let res = match inputs.qs1.zip(inputs.cclass) {
        Some((qs1, c)) if reflect => solve_mecbrc_reflected(qx, qy, qs1, rate, c)?,
        Some((qs1, c)) => solve_mecbrc(&RateClassProblem::new(qx, qy, qs1, rate, c)?)?,
        None if reflect => solve_mecbr_reflected(qx, qy, rate)?,
        None => solve_mecbr(&RateProblem::new(qx, qy, rate)?),
    };
    Ok(res)
}

fn point_inputs(p: &ProblemArgs) -> Result<PointInputs, CliError> {
    class_inputs(p)?;
    Ok(PointInputs {
        qx: require("qx", p.qx)?,
        qy: require("qy", p.qy)?,
        qs1: p.qs1,
        rate: require("rate", p.rate)?,
        cclass: p.cclass,
    })
}

#[derive(Serialize)]
struct SolveJson<'a> {
    tool: String,
    point: &'a CurvePoint,
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let inputs = point_inputs(&args.problem)?;
    let res = solve_point(inputs, args.problem.reflect)?;
    let point = CurvePoint::solved(inputs, &res);
    let meta = [
        ("tool", tool_version()),
        (
            "relabeling",
            format!("x={} y={}", res.relabeling.x, res.relabeling.y),
        ),
    ];
    emit(
        &args.out,
        &meta,
        std::slice::from_ref(&point),
        &SolveJson {
            tool: tool_version(),
            point: &point,
        },
    )
}

/// `steps` evenly spaced values from `start` to `stop`, both included exactly.
pub fn sweep_values(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                stop
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// First feasible point whose value drops below its feasible predecessor.
pub fn first_decrease(points: &[CurvePoint], tol: f64) -> Option<(f64, f64, f64)> {
    let mut prev: Option<f64> = None;
    for p in points {
        let Some(v) = p.value_bits else { continue };
        if let Some(before) = prev {
            if v < before - tol {
                return Some((p.rate, before, v));
            }
        }
        prev = Some(v);
    }
    None
}

#[derive(Serialize)]
struct SweepJson<'a> {
    tool: String,
    variable: &'static str,
    points: &'a [CurvePoint],
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    if args.start.is_nan() || args.stop.is_nan() || args.start > args.stop {
        return Err(CliError::Usage("--from must not exceed --to".into()));
    }
    let p = &args.problem;
    let qx = require("qx", p.qx)?;
    let qy = require("qy", p.qy)?;
    let (variable, base) = match args.var {
        SweepVar::Rate => {
            class_inputs(p)?;
            (
                "rate",
                PointInputs {
                    qx,
                    qy,
                    qs1: p.qs1,
                    rate: 0.0,
                    cclass: p.cclass,
                },
            )
        }
        SweepVar::Cclass => {
            let qs1 = require("qs1", p.qs1)?;
            (
                "cclass",
                PointInputs {
                    qx,
                    qy,
                    qs1: Some(qs1),
                    rate: require("rate", p.rate)?,
                    cclass: None,
                },
            )
        }
    };
    let values = sweep_values(args.start, args.stop, args.steps);
    let points = values
        .par_iter()
        .map(|&v| {
            let inputs = match args.var {
                SweepVar::Rate => PointInputs { rate: v, ..base },
                SweepVar::Cclass => PointInputs {
                    cclass: Some(v),
                    ..base
                },
            };
            match solve_point(inputs, p.reflect) {
                Ok(res) => Ok(CurvePoint::solved(inputs, &res)),
                Err(CliError::Solver(e)) if e.is_infeasible() => Ok(CurvePoint::infeasible(inputs)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if args.var == SweepVar::Rate {
        if let Some((at, previous, value)) = first_decrease(&points, MONOTONE_TOL) {
            return Err(CliError::Monotonicity {
                at,
                previous,
                value,
            });
        }
    }
    let meta = [
        ("tool", tool_version()),
        (
            "sweep",
            format!(
                "{variable} from {} to {} in {} steps",
                args.start, args.stop, args.steps
            ),
        ),
    ];
    emit(
        &args.out,
        &meta,
        &points,
        &SweepJson {
            tool: tool_version(),
            variable,
            points: &points,
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub closed_form: Option<f64>,
    pub vertex: Option<f64>,
    pub abs_diff: Option<f64>,
    pub theta_star: f64,
    pub theta_value: f64,
    pub grid: usize,
    pub verdict: &'static str,
}

pub fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    let inputs = point_inputs(&args.problem)?;
    let closed = match solve_point(inputs, false) {
        Ok(res) => Some(res.value + args.perturb),
        Err(CliError::Solver(e)) if e.is_infeasible() => None,
        Err(e) => return Err(e),
    };
    let vertex = match solve_bernoulli_vertex(
        inputs.qx,
        inputs.qy,
        inputs.rate,
        class_inputs(&args.problem)?,
    ) {
        Ok(v) => Some(v.value),
        Err(e) if e.is_infeasible() => None,
        Err(e) => return Err(e.into()),
    };
    let (theta_star, theta_value) = coupling_oracle_theta(inputs.qx, inputs.qy, args.grid)?;
    let abs_diff = closed.zip(vertex).map(|(a, b)| (a - b).abs());
    let verdict = match (closed, vertex, abs_diff) {
        (Some(_), Some(_), Some(d)) if d <= ORACLE_TOL => "agree",
        (None, None, _) => "both_infeasible",
        _ => "mismatch",
    };
    let row = OracleRow {
        closed_form: closed,
        vertex,
        abs_diff,
        theta_star,
        theta_value,
        grid: args.grid,
        verdict,
    };
    emit(
        &args.out,
        &[("tool", tool_version())],
        std::slice::from_ref(&row),
        &row,
    )?;
    match (closed, vertex) {
        (Some(c), Some(v)) if (c - v).abs() > ORACLE_TOL => Err(CliError::OracleMismatch {
            closed_form: c,
            vertex: v,
        }),
        (Some(_), Some(_)) => Ok(()),
        (None, None) => Err(CliError::Solver(mec_core::MecError::EmptyPolytope)),
        (Some(_), None) => Err(CliError::OracleVerdict(
            "closed form feasible, vertex oracle infeasible".into(),
        )),
        (None, Some(_)) => Err(CliError::OracleVerdict(
            "closed form infeasible, vertex oracle feasible".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateRow {
    pub samples: u64,
    pub seed: u64,
    pub q_y_hat: f64,
    pub q_y_std_error: f64,
    pub mi_xy: f64,
    pub analytic_bits: f64,
    pub h_y_given_u: f64,
    pub h_y_given_xu: f64,
    pub h_s_given_y: Option<f64>,
    pub h_s_given_yu: Option<f64>,
    pub mi_xu: f64,
    pub rate_slack: Option<f64>,
    pub class_slack_y: Option<f64>,
    pub class_slack_yu: Option<f64>,
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    tool: String,
    mixture: [f64; 4],
    summary: &'a SimulateRow,
    report: &'a mec_core::SimReport,
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let p = &args.problem;
    let qx = require("qx", p.qx)?;
    class_inputs(p)?;
    let mixture = if args.constant_map {
        MapMixture::pure(BinaryMap::Zero)
    } else if let Some(w) = &args.mixture {
        let w: [f64; 4] = w
            .as_slice()
            .try_into()
            .map_err(|_| CliError::Usage(format!("--mixture needs 4 weights, got {}", w.len())))?;
        MapMixture::new(w)?
    } else {
        let inputs = point_inputs(p)?;
        solve_point(inputs, false)?.mixture
    };
    let cfg = SimConfig::new(qx, p.qs1, mixture, args.samples, args.seed)?;
    let report = mec_core::simulate(&cfg);
    let check = p.rate.map(|r| verify_constraints(&report, r, p.cclass));
    let summary = SimulateRow {
        samples: report.samples,
        seed: report.seed,
        q_y_hat: report.q_y_hat,
        q_y_std_error: report.q_y_std_error,
        mi_xy: report.mi_xy,
        analytic_bits: mixture.information(qx),
        h_y_given_u: report.h_y_given_u,
        h_y_given_xu: report.h_y_given_xu,
        h_s_given_y: report.h_s_given_y,
        h_s_given_yu: report.h_s_given_yu,
        mi_xu: report.mi_xu,
        rate_slack: check.map(|c| c.rate_slack),
        class_slack_y: check.and_then(|c| c.class_slack_y),
        class_slack_yu: check.and_then(|c| c.class_slack_yu),
    };
    let meta = [
        ("tool", tool_version()),
        ("seed", args.seed.to_string()),
        ("generator", report.generator.clone()),
        ("mixture", format!("{:?}", mixture.weights())),
    ];
    let json = SimulateJson {
        tool: tool_version(),
        mixture: mixture.weights(),
        summary: &summary,
        report: &report,
    };
    emit(&args.out, &meta, std::slice::from_ref(&summary), &json)
}
