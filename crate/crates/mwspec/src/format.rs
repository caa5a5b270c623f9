//! Instance files: UTF-8 JSON with 1-based vertex labels.
//!
//! Float payloads are JSON numbers written in shortest round-trip form;
//! rational payloads are canonical `"p/q"` strings.

use mwspec_core::graph::{Edge, Instance, MatrixWeightedGraph, MatrixWeightedTree, PdWeight};
use mwspec_core::linalg::{format_rational, parse_rational, Matrix, Tolerance};
use mwspec_core::scalar::Rational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Float,
    Rational,
}

/// A parsed instance in whichever scalar kind the file declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInstance {
    Float(Instance<f64>),
    Rational(Instance<Rational>),
}

impl AnyInstance {
    pub fn n(&self) -> usize {
        match self {
            AnyInstance::Float(i) => i.n(),
            AnyInstance::Rational(i) => i.n(),
        }
    }

    pub fn s(&self) -> usize {
        match self {
            AnyInstance::Float(i) => i.s(),
            AnyInstance::Rational(i) => i.s(),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyInstance::Float(_) => ScalarKind::Float,
            AnyInstance::Rational(_) => ScalarKind::Rational,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    s: usize,
    scalar_kind: ScalarKind,
    tree: RawGraph,
    graph: RawGraph,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    edges: Vec<RawEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: usize,
    v: usize,
    w: Vec<Vec<serde_json::Value>>,
}

pub fn parse_instance(text: &str) -> Result<AnyInstance, FormatError> {
    parse_instance_with(text, &Tolerance::default())
}

pub fn parse_instance_with(text: &str, tol: &Tolerance) -> Result<AnyInstance, FormatError> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => FormatError::Schema(e.to_string()),
        _ => FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    })?;
    if raw.n < 2 {
        return Err(FormatError::Schema("n must be ≥ 2".into()));
    }
    if raw.s < 1 {
        return Err(FormatError::Schema("s must be ≥ 1".into()));
    }
    match raw.scalar_kind {
        ScalarKind::Float => build(&raw, tol, float_entry).map(AnyInstance::Float),
        ScalarKind::Rational => build(&raw, tol, rational_entry).map(AnyInstance::Rational),
    }
}

fn float_entry(v: &serde_json::Value) -> Result<f64, String> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("expected a JSON number, found {v}"))
}

fn rational_entry(v: &serde_json::Value) -> Result<Rational, String> {
    let text = v
        .as_str()
        .ok_or_else(|| format!("expected a \"p/q\" string, found {v}"))?;
    parse_rational(text).map_err(|e| format!("{text:?}: {e}"))
}

fn build<T: mwspec_core::scalar::Scalar>(
    raw: &RawInstance,
    tol: &Tolerance,
    entry: fn(&serde_json::Value) -> Result<T, String>,
) -> Result<Instance<T>, FormatError> {
    let tree = graph_from_raw(raw, &raw.tree, "tree", entry)?;
    let graph = graph_from_raw(raw, &raw.graph, "graph", entry)?;
    let tree_check = tree.validate(true, tol);
    let graph_check = graph.validate(false, tol);
    let mut problems = Vec::new();
    if !tree_check.is_ok() {
        problems.push(format!("tree: {tree_check}"));
    }
    if !graph_check.is_ok() {
        problems.push(format!("graph: {graph_check}"));
    }
    if !problems.is_empty() {
        return Err(FormatError::Validation(problems.join("; ")));
    }
    let tree =
        MatrixWeightedTree::new(tree, tol).map_err(|e| FormatError::Validation(e.to_string()))?;
    Instance::new(tree, graph, tol).map_err(|e| FormatError::Validation(e.to_string()))
}

fn graph_from_raw<T: mwspec_core::scalar::Scalar>(
    raw: &RawInstance,
    g: &RawGraph,
    what: &str,
    entry: fn(&serde_json::Value) -> Result<T, String>,
) -> Result<MatrixWeightedGraph<T>, FormatError> {
    let s = raw.s;
    let mut edges = Vec::with_capacity(g.edges.len());
    for (k, e) in g.edges.iter().enumerate() {
        let here = || format!("{what} edge {} ({}, {})", k + 1, e.u, e.v);
        if e.u < 1 || e.u > raw.n || e.v < 1 || e.v > raw.n {
            return Err(FormatError::Schema(format!(
                "{}: vertex outside 1..={}",
                here(),
                raw.n
            )));
        }
        if e.w.len() != s || e.w.iter().any(|row| row.len() != s) {
            return Err(FormatError::Schema(format!(
                "{}: weight must be {s} x {s}",
                here()
            )));
        }
        let mut data = Vec::with_capacity(s * s);
        for row in &e.w {
            for v in row {
                data.push(entry(v).map_err(|m| FormatError::Schema(format!("{}: {m}", here())))?);
            }
        }
        let m = Matrix::new(s, s, data)
            .map_err(|err| FormatError::Schema(format!("{}: {err}", here())))?;
        let w = PdWeight::new(m)
            .map_err(|err| FormatError::Validation(format!("{}: {err}", here())))?;
        edges.push(Edge::new(e.u - 1, e.v - 1, w));
    }
    Ok(MatrixWeightedGraph::new(raw.n, s, edges))
}

fn raw_graph<T: mwspec_core::scalar::Scalar>(
    g: &MatrixWeightedGraph<T>,
    entry: impl Fn(&T) -> serde_json::Value,
) -> RawGraph {
    RawGraph {
        edges: g
            .edges()
            .iter()
            .map(|e| {
                let m = e.weight.matrix();
                RawEdge {
                    u: e.u + 1,
                    v: e.v + 1,
                    w: (0..m.rows())
                        .map(|i| m.row(i).iter().map(&entry).collect())
                        .collect(),
                }
            })
            .collect(),
    }
}

fn to_text<T: mwspec_core::scalar::Scalar>(
    inst: &Instance<T>,
    kind: ScalarKind,
    entry: impl Fn(&T) -> serde_json::Value,
) -> String {
    let raw = RawInstance {
        n: inst.n(),
        s: inst.s(),
        scalar_kind: kind,
        tree: raw_graph(inst.tree().as_graph(), &entry),
        graph: raw_graph(inst.graph(), &entry),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("instance serializes");
    text.push('\n');
    text
}

pub fn serialize_float_instance(inst: &Instance<f64>) -> String {
    to_text(inst, ScalarKind::Float, |v| serde_json::Value::from(*v))
}

pub fn serialize_rational_instance(inst: &Instance<Rational>) -> String {
    to_text(inst, ScalarKind::Rational, |v| {
        serde_json::Value::from(format_rational(v))
    })
}

pub fn serialize_instance(inst: &AnyInstance) -> String {
    match inst {
        AnyInstance::Float(i) => serialize_float_instance(i),
        AnyInstance::Rational(i) => serialize_rational_instance(i),
    }
}

/// Lowercase hex SHA-256 of the canonical serialization.
pub fn instance_hash(inst: &AnyInstance) -> String {
    content_hash(serialize_instance(inst).as_bytes())
}

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
