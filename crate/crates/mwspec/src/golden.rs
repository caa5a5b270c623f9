//! Reproduction of the embedded four-vertex example in exact and float
//! arithmetic.

use std::fmt;

use mwspec_core::example;
use mwspec_core::linalg::{
    format_rational, inertia_of, Inertia, Matrix, RationalMatrix, Tolerance,
};
use mwspec_core::operators::{
    build_distance_matrix, build_laplacian, distance_inverse_closed_form,
};
use mwspec_core::perturbation::perturbed_pencil;
use mwspec_core::scalar::{rational_to_f64, Scalar};

/// Largest per-entry relative error allowed in float mode.
pub const FLOAT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenMode {
    Exact,
    Float,
}

impl GoldenMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GoldenMode::Exact => "exact",
            GoldenMode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenLine {
    pub mode: GoldenMode,
    pub what: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for GoldenLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "ok  " } else { "FAIL" };
        write!(
            f,
            "{tag} [{}] {}: {}",
            self.mode.as_str(),
            self.what,
            self.detail
        )
    }
}

fn line(
    mode: GoldenMode,
    what: &'static str,
    mismatch: Option<String>,
    ok_detail: String,
) -> GoldenLine {
    match mismatch {
        None => GoldenLine {
            mode,
            what,
            pass: true,
            detail: ok_detail,
        },
        Some(m) => GoldenLine {
            mode,
            what,
            pass: false,
            detail: m,
        },
    }
}

fn first_exact_mismatch(actual: &RationalMatrix, expected: &RationalMatrix) -> Option<String> {
    if actual.shape() != expected.shape() {
        return Some(format!(
            "shape {:?}, expected {:?}",
            actual.shape(),
            expected.shape()
        ));
    }
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            if actual[(i, j)] != expected[(i, j)] {
                return Some(format!(
                    "first difference at ({}, {}): expected {}, actual {}",
                    i + 1,
                    j + 1,
                    format_rational(&expected[(i, j)]),
                    format_rational(&actual[(i, j)])
                ));
            }
        }
    }
    None
}

/// Relative error of each entry (absolute where the expected entry is zero);
/// returns the worst value and the first entry beyond `tol`.
fn float_compare(
    actual: &Matrix<f64>,
    expected: &RationalMatrix,
    tol: f64,
) -> (f64, Option<String>) {
    let mut worst: f64 = 0.0;
    let mut first = None;
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            let e = rational_to_f64(&expected[(i, j)]);
            let a = actual[(i, j)];
            let err = if e == 0.0 {
                a.abs()
            } else {
                ((a - e) / e).abs()
            };
            let err = if err.is_nan() { f64::INFINITY } else { err };
            worst = worst.max(err);
            if err > tol && first.is_none() {
                first = Some(format!(
                    "first difference at ({}, {}): expected {}, actual {a:e} (relative error {err:e})",
                    i + 1,
                    j + 1,
                    format_rational(&expected[(i, j)])
                ));
            }
        }
    }
    (worst, first)
}

fn pencil_inverse<T: Scalar>(
    tree: &mwspec_core::graph::MatrixWeightedTree<T>,
    graph: &mwspec_core::graph::MatrixWeightedGraph<T>,
) -> Result<Matrix<T>, String> {
    let d_inv = distance_inverse_closed_form(tree).map_err(|e| e.to_string())?;
    let l = build_laplacian(graph).map_err(|e| e.to_string())?;
    let pencil = perturbed_pencil(&d_inv, &l, T::one()).map_err(|e| e.to_string())?;
    Ok(pencil.f.into_matrix())
}

fn inertia_line(mode: GoldenMode, f: Result<Matrix<f64>, String>, tol: &Tolerance) -> GoldenLine {
    let expected = Inertia::new(6, 0, 2);
    match f.and_then(|f| inertia_of(&f.symmetrized(), tol).map_err(|e| e.to_string())) {
        Ok(i) if i == expected => line(mode, "inertia of (D^-1 - L)^-1", None, format!("{i}")),
        Ok(i) => line(
            mode,
            "inertia of (D^-1 - L)^-1",
            Some(format!("expected {expected}, actual {i}")),
            String::new(),
        ),
        Err(e) => line(mode, "inertia of (D^-1 - L)^-1", Some(e), String::new()),
    }
}

pub fn run_golden(mode: GoldenMode) -> Vec<GoldenLine> {
    let tol = Tolerance::default();
    let (d_exp, l_exp, f_exp) = (
        example::expected_distance(),
        example::expected_laplacian(),
        example::expected_perturbed_inverse(),
    );
    let mut out = Vec::new();
    match mode {
        GoldenMode::Exact => {
            let tree = example::tree();
            let graph = example::graph();
            let d = build_distance_matrix(&tree).into_matrix();
            out.push(line(
                mode,
                "D",
                first_exact_mismatch(&d, &d_exp),
                "64/64 entries exact".into(),
            ));
            match build_laplacian(&graph) {
                Ok(l) => out.push(line(
                    mode,
                    "L(G)",
                    first_exact_mismatch(l.matrix(), &l_exp),
                    "64/64 entries exact".into(),
                )),
                Err(e) => out.push(line(mode, "L(G)", Some(e.to_string()), String::new())),
            }
            let f = pencil_inverse(&tree, &graph);
            match &f {
                Ok(f) => out.push(line(
                    mode,
                    "(D^-1 - L)^-1",
                    first_exact_mismatch(f, &f_exp),
                    format!(
                        "64/64 entries exact, (1, 1) = {}",
                        format_rational(&f[(0, 0)])
                    ),
                )),
                Err(e) => out.push(line(mode, "(D^-1 - L)^-1", Some(e.clone()), String::new())),
            }
            out.push(inertia_line(mode, f.map(|f| f.to_f64()), &tol));
        }
        GoldenMode::Float => {
            let inst = example::instance().map_scalars(rational_to_f64);
            let d = build_distance_matrix(inst.tree()).into_matrix();
            let (worst, bad) = float_compare(&d, &d_exp, FLOAT_REL_TOL);
            out.push(line(
                mode,
                "D",
                bad,
                format!("max relative error {worst:e}"),
            ));
            match build_laplacian(inst.graph()) {
                Ok(l) => {
                    let (worst, bad) = float_compare(l.matrix(), &l_exp, FLOAT_REL_TOL);
                    out.push(line(
                        mode,
                        "L(G)",
                        bad,
                        format!("max relative error {worst:e}"),
                    ));
                }
                Err(e) => out.push(line(mode, "L(G)", Some(e.to_string()), String::new())),
            }
            let f = pencil_inverse(inst.tree(), inst.graph());
            match &f {
                Ok(f) => {
                    let (worst, bad) = float_compare(f, &f_exp, FLOAT_REL_TOL);
                    out.push(line(
                        mode,
                        "(D^-1 - L)^-1",
                        bad,
                        format!("max relative error {worst:e}"),
                    ));
                }
                Err(e) => out.push(line(mode, "(D^-1 - L)^-1", Some(e.clone()), String::new())),
            }
            out.push(inertia_line(mode, f, &tol));
        }
    }
    out
}
