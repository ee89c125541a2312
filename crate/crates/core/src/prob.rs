//! Finite-alphabet probability primitives. All information quantities are in bits.

use crate::error::{MecError, Result};
use crate::real::Real;

/// `-p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn neg_xlog2x<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}

fn check_unit<T: Real>(name: &'static str, t: T) -> Result<T> {
    if !t.is_finite() || t < -T::PROB_TOL || t > T::one() + T::PROB_TOL {
        return Err(MecError::Domain {
            name,
            value: t.to_f64().unwrap_or(f64::NAN),
            expected: "[0, 1]",
        });
    }
    Ok(t.max(T::zero()).min(T::one()))
}

/// Binary entropy `H_b(t) = -t log2 t - (1-t) log2 (1-t)`.
pub fn binary_entropy<T: Real>(t: T) -> Result<T> {
    let t = check_unit("t", t)?;
    Ok(binary_entropy_unchecked(t))
}

/// `H_b` on an argument already known to lie in `[0, 1]` up to rounding.
/// Out-of-range inputs are clamped.
#[inline]
pub(crate) fn binary_entropy_unchecked<T: Real>(t: T) -> T {
    let t = t.max(T::zero()).min(T::one());
    neg_xlog2x(t) + neg_xlog2x(T::one() - t)
}

/// `H_b'(t) = log2((1-t)/t)`, defined on the open interval `(0, 1)`.
pub fn binary_entropy_derivative<T: Real>(t: T) -> Result<T> {
    if !(t > T::zero() && t < T::one()) {
        return Err(MecError::Domain {
            name: "t",
            value: t.to_f64().unwrap_or(f64::NAN),
            expected: "(0, 1)",
        });
    }
    Ok(((T::one() - t) / t).log2())
}

/// A probability mass function over `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    masses: Vec<T>,
}

impl<T: Real> Pmf<T> {
    /// Validates and renormalizes. Masses within `PROB_TOL` of zero are
    /// clamped; the total must be within `PROB_TOL` of one.
    pub fn new(masses: Vec<T>) -> Result<Self> {
        if masses.is_empty() {
            return Err(MecError::InvalidPmf("empty support".into()));
        }
        let mut total = T::zero();
        for &m in &masses {
            if !m.is_finite() || m < -T::PROB_TOL {
                return Err(MecError::InvalidPmf(format!(
                    "mass {m} is negative or not finite"
                )));
            }
            total = total + m;
        }
        if (total - T::one()).abs() > T::PROB_TOL {
            return Err(MecError::InvalidPmf(format!(
                "total mass {total} differs from 1"
            )));
        }
        let masses = renormalize(masses);
        Ok(Self { masses })
    }

    pub fn bernoulli(q: T) -> Result<Self> {
        let q = check_unit("q", q)?;
        Ok(Self {
            masses: vec![T::one() - q, q],
        })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform pmf needs a non-empty support");
        let w = T::one() / T::from_usize(n).unwrap();
        Self { masses: vec![w; n] }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut masses = vec![T::zero(); n];
        masses[at] = T::one();
        Self { masses }
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        if self.len() != other.len() {
            return Err(MecError::InvalidPmf("support sizes differ".into()));
        }
        let lambda = check_unit("lambda", lambda)?;
        let masses = self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(&a, &b)| lambda * a + (T::one() - lambda) * b)
            .collect();
        Pmf::new(masses)
    }
}

pub(crate) fn renormalize<T: Real>(mut masses: Vec<T>) -> Vec<T> {
    for m in masses.iter_mut() {
        if *m < T::zero() {
            *m = T::zero();
        }
    }
    let total = masses.iter().fold(T::zero(), |acc, &m| acc + m);
    if total > T::zero() && total != T::one() {
        for m in masses.iter_mut() {
            *m = *m / total;
        }
    }
    masses
}

/// Which variable of a joint table is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// The row variable (`X`).
    Row,
    /// The column variable (`Y`).
    Col,
}

/// Joint pmf over `(x, y)`, stored row-major with `rows` X-symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    rows: usize,
    cols: usize,
    table: Vec<T>,
}

impl<T: Real> JointPmf<T> {
    pub fn new(rows: usize, cols: usize, table: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || table.len() != rows * cols {
            return Err(MecError::InvalidPmf(format!(
                "table of {} cells does not match {rows}x{cols}",
                table.len()
            )));
        }
        let flat = Pmf::new(table)?;
        Ok(Self {
            rows,
            cols,
            table: flat.masses,
        })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MecError::InvalidPmf("ragged joint table".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Independent coupling `p(x) q(y)`.
    pub fn product(p: &Pmf<T>, q: &Pmf<T>) -> Self {
        let table = p
            .masses()
            .iter()
            .flat_map(|&a| q.masses().iter().map(move |&b| a * b))
            .collect();
        Self {
            rows: p.len(),
            cols: q.len(),
            table,
        }
    }

    /// Binary coupling of `Bern(q_x)` and `Bern(q_y)` with `theta = P(X=1, Y=1)`.
    pub fn bernoulli_coupling(q_x: T, q_y: T, theta: T) -> Result<Self> {
        let one = T::one();
        Self::new(
            2,
            2,
            vec![one - q_x - q_y + theta, q_y - theta, q_x - theta, theta],
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.table[x * self.cols + y]
    }

    pub fn cells(&self) -> &[T] {
        &self.table
    }

    /// Marginal of the variable on `axis`.
    pub fn marginal(&self, axis: Axis) -> Pmf<T> {
        let masses = match axis {
            Axis::Row => (0..self.rows)
                .map(|x| (0..self.cols).fold(T::zero(), |acc, y| acc + self.get(x, y)))
                .collect(),
            Axis::Col => (0..self.cols)
                .map(|y| (0..self.rows).fold(T::zero(), |acc, x| acc + self.get(x, y)))
                .collect(),
        };
        Pmf {
            masses: renormalize(masses),
        }
    }
}

pub fn entropy<T: Real>(p: &Pmf<T>) -> T {
    entropy_of(p.masses())
}

pub(crate) fn entropy_of<T: Real>(masses: &[T]) -> T {
    masses.iter().fold(T::zero(), |acc, &m| acc + neg_xlog2x(m))
}

pub fn joint_entropy<T: Real>(j: &JointPmf<T>) -> T {
    entropy_of(j.cells())
}

/// `I(X;Y) = H(X) + H(Y) - H(X,Y)`, clamped at zero.
pub fn mutual_information<T: Real>(j: &JointPmf<T>) -> T {
    let mi = entropy(&j.marginal(Axis::Row)) + entropy(&j.marginal(Axis::Col)) - joint_entropy(j);
    mi.max(T::zero())
}

/// `H(other | given) = H(X,Y) - H(given)`, clamped at zero.
pub fn conditional_entropy<T: Real>(j: &JointPmf<T>, given: Axis) -> T {
    (joint_entropy(j) - entropy(&j.marginal(given))).max(T::zero())
}
