//! Verification reports and their JSON form.

use std::time::Instant;

use mwspec_core::linalg::Tolerance;
use mwspec_core::scalar::{rational_from_f64, rational_to_f64};
use mwspec_core::verifier::{
    verify_all, CheckResult, Evidence, Kernel, Summary, VerificationContext, VerifyOptions,
};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::format::{instance_hash, AnyInstance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceJson {
    pub rel_residual: f64,
    pub eig_zero: f64,
    pub nonzero_floor: f64,
}

impl From<&Tolerance> for ToleranceJson {
    fn from(t: &Tolerance) -> Self {
        Self {
            rel_residual: t.rel_residual,
            eig_zero: t.eig_zero,
            nonzero_floor: t.nonzero_floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckJson {
    pub id: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<Vec<usize>>,
    pub status: &'static str,
    pub pass: bool,
    pub evidence: Map<String, Value>,
    pub tolerance: ToleranceJson,
}

fn evidence_value(e: &Evidence) -> Value {
    match e {
        Evidence::Count(c) => Value::from(*c),
        Evidence::Real(x) => Value::from(*x),
        Evidence::Flag(b) => Value::from(*b),
        Evidence::Inertia(i) => Value::from(i.as_array().to_vec()),
        Evidence::Counts(v) => Value::from(v.clone()),
        Evidence::Reals(v) => Value::from(v.clone()),
        Evidence::Text(t) => Value::from(t.clone()),
    }
}

impl From<&CheckResult> for CheckJson {
    fn from(c: &CheckResult) -> Self {
        Self {
            id: c.id,
            beta: c.beta,
            alpha: c.alpha,
            index: c.index.as_ref().map(|v| v.iter().map(|i| i + 1).collect()),
            status: c.status.as_str(),
            pass: c.passed(),
            evidence: c
                .evidence
                .iter()
                .map(|(k, v)| (k.to_string(), evidence_value(v)))
                .collect(),
            tolerance: (&c.tolerance).into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SummaryJson {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub warnings: usize,
}

impl From<Summary> for SummaryJson {
    fn from(s: Summary) -> Self {
        Self {
            passed: s.passed,
            failed: s.failed,
            skipped: s.skipped,
            warnings: s.warnings,
        }
    }
}

impl SummaryJson {
    pub fn add(&mut self, other: &SummaryJson) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.warnings += other.warnings;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub instance_hash: String,
    pub n: usize,
    pub s: usize,
    pub seed: Option<u64>,
    pub betas: Vec<f64>,
    pub kernel: &'static str,
    pub weight_condition: f64,
    pub wall_time_s: f64,
    pub checks: Vec<CheckJson>,
    pub summary: SummaryJson,
}

impl VerificationReport {
    pub fn failed_ids(&self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self
            .checks
            .iter()
            .filter(|c| c.status == "fail")
            .map(|c| c.id)
            .collect();
        ids.dedup();
        ids
    }

    /// Serialized form with the wall time zeroed, for determinism checks.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_s = 0.0;
        serde_json::to_string(&copy).expect("report serializes")
    }
}

/// Optional corruption applied to `D` after the context is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePerturbation {
    /// 0-based scalar row and column.
    pub row: usize,
    pub col: usize,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("could not build the verification context: {0}")]
    Context(#[from] mwspec_core::Error),
    #[error("perturbation index ({row}, {col}) is outside the {dim} x {dim} distance matrix")]
    PerturbationOutOfRange { row: usize, col: usize, dim: usize },
    #[error("the float payload has no exact rational equivalent")]
    NotRepresentable,
}

pub fn build_context(
    inst: &AnyInstance,
    kernel: Kernel,
    tol: &Tolerance,
) -> Result<VerificationContext, VerifyError> {
    Ok(match (inst, kernel) {
        (AnyInstance::Float(i), Kernel::Float) => VerificationContext::from_float(i, tol)?,
        (AnyInstance::Rational(i), Kernel::Exact) => VerificationContext::from_exact(i, tol)?,
        (AnyInstance::Rational(i), Kernel::Float) => {
            VerificationContext::from_float(&i.map_scalars(rational_to_f64), tol)?
        }
        (AnyInstance::Float(i), Kernel::Exact) => {
            let finite = i
                .tree()
                .edges()
                .iter()
                .chain(i.graph().edges())
                .all(|e| e.weight.matrix().as_slice().iter().all(|v| v.is_finite()));
            if !finite {
                return Err(VerifyError::NotRepresentable);
            }
            let exact = i.map_scalars(|v| rational_from_f64(*v).expect("finite"));
            VerificationContext::from_exact(&exact, tol)?
        }
    })
}

pub fn apply_perturbation(
    ctx: &mut VerificationContext,
    p: &DistancePerturbation,
) -> Result<(), VerifyError> {
    let dim = ctx.n * ctx.s;
    if p.row >= dim || p.col >= dim {
        return Err(VerifyError::PerturbationOutOfRange {
            row: p.row + 1,
            col: p.col + 1,
            dim,
        });
    }
    let mut m = ctx.d.matrix().clone();
    m[(p.row, p.col)] *= p.factor;
    ctx.d = mwspec_core::operators::BlockMatrix::new(ctx.n, ctx.s, m).expect("shape unchanged");
    Ok(())
}

/// Runs every check and assembles a report with checks sorted by id.
pub fn verify_to_report(
    inst: &AnyInstance,
    ctx: &VerificationContext,
    betas: &[f64],
    seed: Option<u64>,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> VerificationReport {
    let start = Instant::now();
    let checks = verify_all(ctx, betas, opts, tol);
    let wall = start.elapsed().as_secs_f64();
    assemble(instance_hash(inst), ctx, betas, seed, checks, wall)
}

pub(crate) fn assemble(
    hash: String,
    ctx: &VerificationContext,
    betas: &[f64],
    seed: Option<u64>,
    mut checks: Vec<CheckResult>,
    wall_time_s: f64,
) -> VerificationReport {
    checks.sort_by(|a, b| a.id.cmp(b.id));
    VerificationReport {
        instance_hash: hash,
        n: ctx.n,
        s: ctx.s,
        seed,
        betas: betas.to_vec(),
        kernel: ctx.kernel.as_str(),
        weight_condition: ctx.weight_condition,
        wall_time_s,
        summary: Summary::of(&checks).into(),
        checks: checks.iter().map(CheckJson::from).collect(),
    }
}
