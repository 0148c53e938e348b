//! Canonical JSON output, report shapes shared with the command line, and
//! Graphviz DOT export of metrized graphs.

use std::fmt::Write;

use serde::Serialize;

use crate::berk_points::{BerkPoint, PointType};
use crate::capacity::{EquilibriumResult, FrostmanReport};
use crate::exact_numbers::{KernelValue, PrimeConfig, ValExp};
use crate::metrized_graph::{DiscreteMeasure, MetrizedGraph};

fn label(x: &BerkPoint) -> String {
    match x {
        BerkPoint::Disc { center, rexp } => format!("({center}, {rexp})"),
        other => other.to_string(),
    }
}

/// The JSON writer shared by the command line and the library tests.
pub fn canonical_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// A single exact number. `exact` is the human-readable form; `approx` is
/// present only when a decimal rendering was requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scalar {
    pub quantity: String,
    pub value: KernelValue,
    pub exact: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

impl Scalar {
    pub fn new(quantity: &str, value: KernelValue, decimal: Option<usize>) -> Self {
        let approx = match (&value, decimal) {
            (KernelValue::Finite(v), Some(n)) => Some(format!("~{}", v.to_decimal(n))),
            _ => None,
        };
        Scalar {
            quantity: quantity.to_string(),
            exact: value.to_string(),
            value,
            approx,
        }
    }

    pub fn finite(quantity: &str, v: ValExp, decimal: Option<usize>) -> Self {
        Scalar::new(quantity, KernelValue::Finite(v), decimal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub point: BerkPoint,
    #[serde(rename = "type")]
    pub kind: PointType,
}

impl PointReport {
    pub fn new(x: &BerkPoint, cfg: &PrimeConfig) -> Self {
        PointReport {
            point: x.canonical(cfg),
            kind: x.classify(),
        }
    }
}

/// Result of a finite candidate search; `side` says how the candidate value
/// relates to the quantity for the whole set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub candidates: usize,
    pub result: Scalar,
    pub side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedEquilibrium {
    pub equilibrium: EquilibriumResult,
    pub certificate: FrostmanReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub point: BerkPoint,
    pub multiplicity: usize,
    pub ramification: usize,
}

/// Undirected DOT text; vertex labels are (center, rexp), edges carry their
/// lengths and vertices their masses under `measure` when given.
pub fn export_dot(
    graph: &MetrizedGraph,
    measure: Option<&DiscreteMeasure>,
    cfg: &PrimeConfig,
) -> String {
    let mut out = String::from("graph berkline {\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        let mut l = label(v);
        if let Some(m) = measure {
            let mass = m.mass_at(v, cfg);
            if !mass.is_zero() {
                write!(l, "\\nmass {mass}").unwrap();
            }
        }
        let shape = if i == graph.root { ", shape=box" } else { "" };
        writeln!(out, "  v{i} [label=\"{l}\"{shape}];").unwrap();
    }
    for e in &graph.edges {
        writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.i, e.j, e.length).unwrap();
    }
    out.push_str("}\n");
    out
}
