use std::fmt;

use serde::Serialize;

/// A single CSV/JSON cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Flag(bool),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(i) => i as f64,
            Cell::Real(x) => x,
            Cell::Flag(b) => f64::from(u8::from(b)),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // shortest representation that round-trips
            Cell::Real(x) => write!(f, "{x}"),
            Cell::Flag(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Exp1,
    Exp2,
    Exp3Surface,
    Exp3Mix,
    Conjecture,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Exp1 => "exp1",
            ExperimentId::Exp2 => "exp2",
            ExperimentId::Exp3Surface => "exp3_surface",
            ExperimentId::Exp3Mix => "exp3_mix",
            ExperimentId::Conjecture => "conjecture",
        }
    }
}

/// One row of an experiment: sweep coordinates followed by measured values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: ExperimentId,
    pub coords: Vec<(&'static str, Cell)>,
    pub values: Vec<(&'static str, Cell)>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

impl ExperimentRecord {
    pub fn columns(&self) -> impl Iterator<Item = &(&'static str, Cell)> {
        self.coords.iter().chain(&self.values)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.columns()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c.as_f64())
    }
}

/// Global curvature interval for a CSV column, if the column holds one.
pub fn curve_bounds(column: &str) -> Option<(f64, f64)> {
    match column {
        "k_so" => Some((0.0, 0.5)),
        "k_st_canonical" => Some((0.0, 1.25)),
        "k_st_euclidean" | "max_seen" | "min_seen" => Some((-0.5, 1.0)),
        "k_grassmann" => Some((0.0, 2.0)),
        _ => None,
    }
}

/// Columns of `records` whose values leave their global interval by more than `tol`.
pub fn bound_violations(records: &[ExperimentRecord], tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    for (i, r) in records.iter().enumerate() {
        for (name, cell) in &r.values {
            if let Some((lo, hi)) = curve_bounds(name) {
                let x = cell.as_f64();
                if !(x >= lo - tol && x <= hi + tol) {
                    out.push(format!("record {i}: {name} = {x} outside [{lo}, {hi}]"));
                }
            }
        }
    }
    out
}
