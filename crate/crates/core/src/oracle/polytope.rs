//! Brute-force maximization of `I(X;Y)` over mixtures of deterministic maps.
//!
//! The feasible mixtures form a polytope (simplex, output-marginal rows, the
//! rate row and an optional classification row). `I(X;Y)` is convex in the
//! mixture weights once the output marginal is pinned, so its maximum is
//! attained at a vertex. Vertices are enumerated as basic feasible solutions of
//! the slack-augmented system: every column subset of full rank is solved with
//! partial pivoting and kept if non-negative.

use itertools::Itertools;
use serde::Serialize;

use super::maps::MapTable;
use crate::error::{MecError, Result};
use crate::prob::{mutual_information, JointPmf, Pmf};

/// Pivots below this magnitude mark the active set as rank deficient.
pub const PIVOT_TOL: f64 = 1e-11;
/// Row tolerance for accepting a basic solution.
pub const ROW_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budgets {
    pub rate: f64,
    pub cclass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowKind {
    Simplex,
    Marginal(usize),
    Rate,
    Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub kind: RowKind,
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `A_eq w = b_eq`, `A_in w <= b_in`, `w >= 0` over the map weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearPolytope {
    pub dim: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl LinearPolytope {
    /// Rows for target output marginal `q_y`. A classification budget requires
    /// the table to carry classification terms.
    pub fn from_maps(maps: &MapTable, q_y: &Pmf<f64>, budgets: &Budgets) -> Result<Self> {
        if q_y.len() != maps.k {
            return Err(MecError::InvalidPmf(format!(
                "target marginal has {} symbols, maps produce {}",
                q_y.len(),
                maps.k
            )));
        }
        let dim = maps.len();
        let mut equalities = vec![Row {
            kind: RowKind::Simplex,
            coeffs: vec![1.0; dim],
            rhs: 1.0,
        }];
        for (y, &target) in q_y.masses().iter().enumerate() {
            equalities.push(Row {
                kind: RowKind::Marginal(y),
                coeffs: maps.maps.iter().map(|m| m.output_pmf[y]).collect(),
                rhs: target,
            });
        }
        // An infinite budget is no row at all.
        let mut inequalities = Vec::new();
        if budgets.rate.is_finite() {
            inequalities.push(Row {
                kind: RowKind::Rate,
                coeffs: maps.maps.iter().map(|m| m.output_entropy).collect(),
                rhs: budgets.rate,
            });
        }
        if let Some(c) = budgets.cclass.filter(|c| c.is_finite()) {
            let coeffs = maps
                .maps
                .iter()
                .map(|m| {
                    m.class_term.ok_or_else(|| {
                        MecError::InvalidPmf(
                            "classification budget given but the map table has no label model"
                                .into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            inequalities.push(Row {
                kind: RowKind::Classification,
                coeffs,
                rhs: c,
            });
        }
        Ok(Self {
            dim,
            equalities,
            inequalities,
        })
    }

    /// Largest equality residual and smallest inequality / sign slack at `w`.
    pub fn residuals(&self, w: &[f64]) -> (f64, f64) {
        let dot = |r: &Row| r.coeffs.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        let eq = self
            .equalities
            .iter()
            .map(|r| (dot(r) - r.rhs).abs())
            .fold(0.0, f64::max);
        let ineq = self
            .inequalities
            .iter()
            .map(|r| r.rhs - dot(r))
            .chain(w.iter().copied())
            .fold(f64::INFINITY, f64::min);
        (eq, ineq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexResult {
    pub value: f64,
    pub weights: Vec<f64>,
    /// Objective at every feasible vertex found, in enumeration order.
    pub vertex_values: Vec<f64>,
    pub bases_tried: usize,
}

impl VertexResult {
    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|&&w| w > ROW_TOL).count()
    }
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for (offset, row) in tail.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                row[col..]
                    .iter_mut()
                    .zip(&pivot_row[col..])
                    .for_each(|(r, p)| *r -= f * p);
                b[col + 1 + offset] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Drops equality rows that are linear combinations of earlier ones (the
/// marginal rows always sum to the simplex row). Fails if a dropped row is
/// inconsistent with the rows kept.
fn independent_equalities(rows: &[Row]) -> Result<Vec<Row>> {
    let mut basis: Vec<(Vec<f64>, f64, usize)> = Vec::new();
    let mut kept = Vec::new();
    for row in rows {
        let mut v = row.coeffs.clone();
        let mut rhs = row.rhs;
        for (b, b_rhs, pivot) in &basis {
            let f = v[*pivot] / b[*pivot];
            if f != 0.0 {
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= f * y);
                rhs -= f * b_rhs;
            }
        }
        let (pivot, mag) = v
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        if mag > PIVOT_TOL {
            basis.push((v, rhs, pivot));
            kept.push(row.clone());
        } else if rhs.abs() > ROW_TOL {
            return Err(MecError::EmptyPolytope);
        }
    }
    Ok(kept)
}

/// Joint of `(X, Y)` for mixture `w` over the maps.
pub fn induced_joint(maps: &MapTable, p_x: &Pmf<f64>, w: &[f64]) -> Result<JointPmf<f64>> {
    let mut table = vec![0.0; maps.n * maps.k];
    for (entry, &wu) in maps.maps.iter().zip(w) {
        if wu == 0.0 {
            continue;
        }
        for (x, &y) in entry.outputs.iter().enumerate() {
            table[x * maps.k + y] += p_x.masses()[x] * wu;
        }
    }
    JointPmf::new(maps.n, maps.k, table)
}

pub fn solve_vertex(
    polytope: &LinearPolytope,
    maps: &MapTable,
    p_x: &Pmf<f64>,
) -> Result<VertexResult> {
    let equalities = independent_equalities(&polytope.equalities)?;
    let dim = polytope.dim;
    let n_slack = polytope.inequalities.len();
    let cols = dim + n_slack;
    let m = equalities.len() + n_slack;

    // Slack-augmented rows: [coeffs | slack identity] = rhs.
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for row in &equalities {
        let mut r = row.coeffs.clone();
        r.resize(cols, 0.0);
        a.push(r);
        b.push(row.rhs);
    }
    for (i, row) in polytope.inequalities.iter().enumerate() {
        let mut r = row.coeffs.clone();
        r.resize(cols, 0.0);
        r[dim + i] = 1.0;
        a.push(r);
        b.push(row.rhs);
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut vertex_values = Vec::new();
    let mut bases_tried = 0;
    for basis in (0..cols).combinations(m) {
        bases_tried += 1;
        let sub: Vec<Vec<f64>> = a
            .iter()
            .map(|r| basis.iter().map(|&j| r[j]).collect())
            .collect();
        let Some(x) = solve_dense(sub, b.clone()) else {
            continue;
        };
        if x.iter().any(|&v| v < -ROW_TOL || !v.is_finite()) {
            continue;
        }
        let mut w = vec![0.0; dim];
        for (&j, &v) in basis.iter().zip(&x) {
            if j < dim {
                w[j] = v.max(0.0);
            }
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            continue;
        }
        w.iter_mut().for_each(|v| *v /= total);
        let (eq, ineq) = polytope.residuals(&w);
        if eq > ROW_TOL || ineq < -ROW_TOL {
            continue;
        }
        let value = mutual_information(&induced_joint(maps, p_x, &w)?);
        vertex_values.push(value);
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, w));
        }
    }
    let (value, weights) = best.ok_or(MecError::EmptyPolytope)?;
    Ok(VertexResult {
        value,
        weights,
        vertex_values,
        bases_tried,
    })
}

/// Vertex oracle for the Bernoulli problem: `X ~ Bern(q_x)`, `Y ~ Bern(q_y)`,
/// with an optional `(q_s1, C)` classification row for `S = X xor S1`.
pub fn solve_bernoulli_vertex(
    q_x: f64,
    q_y: f64,
    rate: f64,
    class: Option<(f64, f64)>,
) -> Result<VertexResult> {
    let p_x = Pmf::bernoulli(q_x)?;
    let label = class
        .map(|(q_s1, _)| super::maps::LabelModel::xor_noise(q_s1))
        .transpose()?;
    let maps = super::maps::enumerate_maps(2, 2, &p_x, label.as_ref())?;
    let budgets = Budgets {
        rate,
        cclass: class.map(|(_, c)| c),
    };
    let poly = LinearPolytope::from_maps(&maps, &Pmf::bernoulli(q_y)?, &budgets)?;
    solve_vertex(&poly, &maps, &p_x)
}
