use alloc::string::String;

use thiserror::Error;

use crate::graph::ValidationResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("pivot block of the Schur complement is singular")]
    SingularPivot,
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("entry count {len} does not match {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("index {index} out of range for {len} blocks")]
    BadIndex { index: usize, len: usize },
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid weight profile: {0}")]
    InvalidProfile(String),
    #[error("weight on edge ({}, {}) cannot be inverted", .u + 1, .v + 1)]
    WeightInversionFailure { u: usize, v: usize },
    #[error("sum of tree weights cannot be inverted")]
    RInversionFailure,
    #[error("beta must be non-negative")]
    NegativeBeta,
    #[error("validation failed: {0}")]
    Validation(ValidationResult),
    #[error("tree is (n, s) = {tree:?} but graph is {graph:?}")]
    InstanceMismatch {
        tree: (usize, usize),
        graph: (usize, usize),
    },
}

impl Error {
    pub(crate) fn mismatch(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            op,
            left_rows: left.0,
            left_cols: left.1,
            right_rows: right.0,
            right_cols: right.1,
        }
    }
}
