use serde::Serialize;

use crate::error::{MecError, Result};
use crate::prob::{conditional_entropy, entropy, Axis, JointPmf, Pmf};

pub const DEFAULT_MAP_CAP: usize = 4096;

/// Label channel `P(S = s | X = x)`, one row per source symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelModel {
    channel: Vec<Pmf<f64>>,
}

impl LabelModel {
    pub fn new(channel: Vec<Pmf<f64>>) -> Result<Self> {
        let width = channel.first().map_or(0, Pmf::len);
        if width == 0 || channel.iter().any(|row| row.len() != width) {
            return Err(MecError::InvalidPmf(
                "label channel rows differ in size".into(),
            ));
        }
        Ok(Self { channel })
    }

    /// `S = X xor S1` with `S1 ~ Bern(q_s1)`, for a binary source.
    pub fn xor_noise(q_s1: f64) -> Result<Self> {
        Self::new(vec![
            Pmf::new(vec![1.0 - q_s1, q_s1])?,
            Pmf::new(vec![q_s1, 1.0 - q_s1])?,
        ])
    }

    pub fn source_size(&self) -> usize {
        self.channel.len()
    }

    pub fn labels(&self) -> usize {
        self.channel[0].len()
    }

    /// `H(S | f(X))` for `X ~ p_x` and the map given by its output table.
    pub fn residual_entropy(&self, outputs: &[usize], k: usize, p_x: &Pmf<f64>) -> Result<f64> {
        let labels = self.labels();
        let mut table = vec![0.0; k * labels];
        for (x, &y) in outputs.iter().enumerate() {
            let px = p_x.masses()[x];
            for (s, &ps) in self.channel[x].masses().iter().enumerate() {
                table[y * labels + s] += px * ps;
            }
        }
        Ok(conditional_entropy(
            &JointPmf::new(k, labels, table)?,
            Axis::Row,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapEntry {
    /// `outputs[x] = f(x)`.
    pub outputs: Vec<usize>,
    /// Distribution of `f(X)` under `p_X`.
    pub output_pmf: Vec<f64>,
    /// `H(f(X))`, the rate cost of this map.
    pub output_entropy: f64,
    /// `H(S | f(X))` when a label model was supplied.
    pub class_term: Option<f64>,
}

/// Every deterministic map from an `n`-symbol source to a `k`-symbol output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapTable {
    pub n: usize,
    pub k: usize,
    pub maps: Vec<MapEntry>,
}

impl MapTable {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn has_label_model(&self) -> bool {
        self.maps.first().is_some_and(|m| m.class_term.is_some())
    }
}

pub fn enumerate_maps(
    n: usize,
    k: usize,
    p_x: &Pmf<f64>,
    label: Option<&LabelModel>,
) -> Result<MapTable> {
    enumerate_maps_capped(n, k, p_x, label, DEFAULT_MAP_CAP)
}

/// Enumerates the `k^n` maps. For `n = k = 2` the order is identity, flip,
/// constant 0, constant 1; otherwise maps are in lexicographic order of their
/// output tables.
pub fn enumerate_maps_capped(
    n: usize,
    k: usize,
    p_x: &Pmf<f64>,
    label: Option<&LabelModel>,
    cap: usize,
) -> Result<MapTable> {
    if n < 2 || k < 2 {
        return Err(MecError::Domain {
            name: "alphabet size",
            value: n.min(k) as f64,
            expected: "at least 2",
        });
    }
    if p_x.len() != n {
        return Err(MecError::InvalidPmf(format!(
            "p_X has {} symbols, expected {n}",
            p_x.len()
        )));
    }
    if let Some(l) = label {
        if l.source_size() != n {
            return Err(MecError::InvalidPmf(
                "label channel does not match the source alphabet".into(),
            ));
        }
    }
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(MecError::DimensionCap {
            requested: count,
            cap,
        });
    }

    let mut tables: Vec<Vec<usize>> = (0..count as usize)
        .map(|mut code| {
            let mut out = vec![0; n];
            for slot in out.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            out
        })
        .collect();
    if n == 2 && k == 2 {
        tables = vec![vec![0, 1], vec![1, 0], vec![0, 0], vec![1, 1]];
    }

    let maps = tables
        .into_iter()
        .map(|outputs| {
            let mut out_pmf = vec![0.0; k];
            for (x, &y) in outputs.iter().enumerate() {
                out_pmf[y] += p_x.masses()[x];
            }
            let output_pmf = Pmf::new(out_pmf)?;
            let class_term = label
                .map(|l| l.residual_entropy(&outputs, k, p_x))
                .transpose()?;
            Ok(MapEntry {
                output_entropy: entropy(&output_pmf),
                output_pmf: output_pmf.masses().to_vec(),
                outputs,
                class_term,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapTable { n, k, maps })
}
