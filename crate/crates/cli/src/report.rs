//! Serializable run report. Field order is fixed, maps are ordered, so equal
//! runs serialize to equal bytes.

use std::collections::BTreeMap;

use orthocurv_core::Point;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metric: MetricEcho,
    pub pipelines: Vec<PipelineInfo>,
    pub components: Vec<ComponentRow>,
    pub comparisons: Vec<ComparisonRow>,
    pub verdict: Verdict,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricEcho {
    pub file: String,
    pub coords: Vec<String>,
    pub signature: Vec<i8>,
    pub params: Vec<String>,
    /// Frame factors `g_α`, keyed by coordinate, in coordinate order.
    pub g: Vec<NamedExpr>,
    pub domain: Vec<DomainEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedExpr {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainEntry {
    pub symbol: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineInfo {
    pub name: String,
    /// `full` or `diagonal-only`.
    pub coverage: String,
    pub sign_convention: Option<String>,
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub label: String,
    pub indices: [usize; 4],
    /// Pipeline name to simplified expression.
    pub symbolic: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub point: BTreeMap<String, f64>,
    /// `None` where evaluation failed or was not finite.
    pub values: BTreeMap<String, Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub left: String,
    pub right: String,
    /// `agree`, `mismatch`, `undetermined` or `not applicable`.
    pub status: String,
    pub max_residual: f64,
    pub uniform_flip: bool,
    pub components: Vec<ComponentAgreement>,
    pub worst: Option<Worst>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentAgreement {
    pub label: String,
    pub agreement: String,
    pub max_residual: f64,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Worst {
    pub label: String,
    pub point: BTreeMap<String, f64>,
    pub left: f64,
    pub right: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub command: String,
    /// `OK`, `MISMATCH`, `FLAT`, `NOT FLAT` or `UNDETERMINED`.
    pub status: String,
    pub exit_code: i32,
    pub tol: f64,
    pub samples: usize,
    pub sign_convention: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub expr: String,
    pub value: Option<f64>,
    pub point: BTreeMap<String, f64>,
}

pub(crate) fn point_map(p: &Point) -> BTreeMap<String, f64> {
    p.iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub(crate) fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
