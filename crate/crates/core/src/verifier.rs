//! Structured verification of the preliminaries and of every part of the
//! perturbation theorem on a single instance.
//!
//! Each check yields a [`CheckResult`] carrying a frozen identifier, a status
//! and numeric evidence. Failures are data: nothing in this module returns an
//! error for a mathematical property that does not hold.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::graph::Instance;
use crate::linalg::{
    is_pd_quadratic_form, nullity_of, pinv_psd, quadratic_form_min, rank_of, sym_eigen,
    DenseMatrix, Inertia, SymEigen, Tolerance,
};
use crate::operators::{
    build_distance_matrix, build_j, build_laplacian, build_tree_laplacian, build_u,
    distance_from_pinv, distance_inverse_closed_form, nullspace_basis_j, BlockMatrix,
    NullspaceBasis,
};
use crate::perturbation::{
    bordered, gx_matrix, haynsworth_check, perturbed_pencil, principal_block_submatrix,
    BlockIndexSet, PerturbedPencil, Pivot,
};
use crate::scalar::{rational_from_f64, Rational, Scalar};

/// Frozen check identifiers.
pub mod ids {
    pub const P1: &str = "P1";
    pub const P2: &str = "P2";
    pub const P2_DENSE: &str = "P2.dense";
    pub const P3_INERTIA: &str = "P3.inertia";
    pub const P3_NULLSPACE: &str = "P3.nullspace";
    pub const P4_PSD: &str = "P4.psd";
    pub const P4_LU: &str = "P4.LU";
    pub const P4_RANK: &str = "P4.rank";
    pub const P4_COLSPACE: &str = "P4.colspace";
    pub const COR2_8: &str = "COR2.8";
    pub const THM_I: &str = "THM.i";
    pub const THM_II: &str = "THM.ii";
    pub const THM_III: &str = "THM.iii";
    pub const THM_IV: &str = "THM.iv";
    pub const THM_IV_HAYNSWORTH: &str = "THM.iv.haynsworth";
    pub const THM_V: &str = "THM.v";
    pub const THM_VI: &str = "THM.vi";
    pub const THM_VI_GX: &str = "THM.vi.gx";
    pub const THM_VI_GX_EXACT: &str = "THM.vi.gx.exact";
    pub const THM_VI_TRACE: &str = "THM.vi.trace";
    pub const THM_VI_LIMIT: &str = "THM.vi.limit";
    pub const FM_NULLITY: &str = "FM-nullity";
    pub const FM_NULLITY_DINV: &str = "FM-nullity.dinv";
    pub const KERNEL_AGREEMENT: &str = "KERNEL.agreement";
    /// The instance could not be turned into a verification context.
    pub const CONTEXT: &str = "CONTEXT";

    /// Every identifier a float-kernel run schedules for some `β > 0`.
    pub const FLOAT_RUN: [&str; 21] = [
        P1,
        P2,
        P3_INERTIA,
        P3_NULLSPACE,
        P4_PSD,
        P4_LU,
        P4_RANK,
        P4_COLSPACE,
        COR2_8,
        THM_I,
        THM_II,
        THM_III,
        THM_IV,
        THM_IV_HAYNSWORTH,
        THM_V,
        THM_VI,
        THM_VI_GX,
        THM_VI_TRACE,
        THM_VI_LIMIT,
        FM_NULLITY,
        FM_NULLITY_DINV,
    ];
}

/// Relative agreement demanded between exact-kernel and float-kernel `F`.
pub const KERNEL_AGREEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    /// A failure on an instance flagged as ill-conditioned.
    Warning,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::Warning => "warning",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Count(usize),
    Real(f64),
    Flag(bool),
    Inertia(Inertia),
    Counts(Vec<usize>),
    Reals(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    /// 0-based block indices the check is about (vertex `i`, block `(i, j)`,
    /// or the position of the test vector for `G_x`).
    pub index: Option<Vec<usize>>,
    pub status: CheckStatus,
    pub evidence: Vec<(&'static str, Evidence)>,
    pub tolerance: Tolerance,
}

impl CheckResult {
    fn new(id: &'static str, pass: bool, tol: &Tolerance) -> Self {
        Self {
            id,
            beta: None,
            alpha: None,
            index: None,
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            evidence: Vec::new(),
            tolerance: *tol,
        }
    }

    fn skipped(id: &'static str, beta: f64, reason: &str, tol: &Tolerance) -> Self {
        let mut c = Self::new(id, true, tol).beta(beta);
        c.status = CheckStatus::Skipped;
        c.evidence.push(("reason", Evidence::Text(reason.into())));
        c
    }

    fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    fn index(mut self, index: Vec<usize>) -> Self {
        self.index = Some(index);
        self
    }

    fn with(mut self, key: &'static str, value: Evidence) -> Self {
        self.evidence.push((key, value));
        self
    }

    /// A failed check carrying only an error message.
    pub fn from_error(id: &'static str, message: String, tol: &Tolerance) -> Self {
        Self::new(id, false, tol).with("error", Evidence::Text(message))
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }

    pub fn evidence(&self, key: &str) -> Option<&Evidence> {
        self.evidence
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }
}

/// Knobs that are not numerical thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Also invert `D` densely and compare with the closed form.
    pub dense_cross_check: bool,
    /// Random test vectors for `G_x`, on top of the `s` basis vectors.
    pub gx_random_vectors: usize,
    pub gx_seed: u64,
    /// `α` values at which `trace f(α) > 0` is checked.
    pub trace_alphas: Vec<f64>,
    /// Small `α` for the `trace f(α) → trace D_ij` continuity check.
    pub limit_alpha: f64,
    pub limit_rel_tol: f64,
    /// Divide `limit_alpha` by `max(1, ‖D‖∞ ‖L‖∞)`. The first-order gap is
    /// `α · trace(E_iᵀ D L D E_j)`, which a fixed `α` does not control on
    /// large instances.
    pub limit_alpha_scaled: bool,
    /// Weight condition numbers above this downgrade failures to warnings.
    pub ill_condition_threshold: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dense_cross_check: false,
            gx_random_vectors: 10,
            gx_seed: 0,
            trace_alphas: vec![0.01, 0.1, 1.0, 10.0, 100.0],
            limit_alpha: 1e-6,
            limit_rel_tol: 1e-3,
            limit_alpha_scaled: true,
            ill_condition_threshold: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Float,
    Exact,
}

impl Kernel {
    pub fn as_str(self) -> &'static str {
        match self {
            Kernel::Float => "float",
            Kernel::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ExactParts {
    d_inv: BlockMatrix<Rational>,
    graph_laplacian: BlockMatrix<Rational>,
}

/// Every matrix the checks need, built once per instance.
///
/// Fields are public so that negative-control tests can corrupt one of them
/// and watch the checks react.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationContext {
    pub n: usize,
    pub s: usize,
    /// `D(T)` from tree path sums.
    pub d: BlockMatrix<f64>,
    /// `D⁻¹` from the closed form.
    pub d_inv: BlockMatrix<f64>,
    pub tree_laplacian: BlockMatrix<f64>,
    pub graph_laplacian: BlockMatrix<f64>,
    pub u: DenseMatrix,
    pub basis: NullspaceBasis<f64>,
    /// `max(1, λ_max) / min(1, λ_min)` across all tree and graph weights.
    /// Unit scale is the reference because every zero threshold carries a
    /// `max(1, ·)` floor.
    pub weight_condition: f64,
    pub kernel: Kernel,
    exact: Option<ExactParts>,
}

impl VerificationContext {
    pub fn from_float(inst: &Instance<f64>, tol: &Tolerance) -> crate::Result<Self> {
        Self::build(inst, tol)
    }

    /// Builds the matrices in exact arithmetic, keeping `D⁻¹` and `L(G)` for
    /// the exact-kernel checks.
    pub fn from_exact(inst: &Instance<Rational>, tol: &Tolerance) -> crate::Result<Self> {
        let mut ctx = Self::build(inst, tol)?;
        ctx.kernel = Kernel::Exact;
        ctx.exact = Some(ExactParts {
            d_inv: distance_inverse_closed_form(inst.tree())?,
            graph_laplacian: build_laplacian(inst.graph())?,
        });
        Ok(ctx)
    }

    fn build<T: Scalar>(inst: &Instance<T>, tol: &Tolerance) -> crate::Result<Self> {
        let (n, s) = (inst.n(), inst.s());
        let d = build_distance_matrix(inst.tree()).to_f64();
        let d_inv = distance_inverse_closed_form(inst.tree())?.to_f64();
        let tree_laplacian = build_tree_laplacian(inst.tree())?.to_f64();
        let graph_laplacian = build_laplacian(inst.graph())?.to_f64();
        let (mut lo, mut hi) = (1.0_f64, 1.0_f64);
        for e in inst.tree().edges().iter().chain(inst.graph().edges()) {
            let eig = sym_eigen(&e.weight.matrix().to_f64(), tol)?;
            lo = lo.min(eig.min());
            hi = hi.max(eig.max());
        }
        let weight_condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        Ok(Self {
            n,
            s,
            d,
            d_inv,
            tree_laplacian,
            graph_laplacian,
            u: build_u(n, s)?,
            basis: nullspace_basis_j(n, s)?,
            weight_condition,
            kernel: Kernel::Float,
            exact: None,
        })
    }

    fn is_ill_conditioned(&self, opts: &VerifyOptions) -> bool {
        !(self.weight_condition <= opts.ill_condition_threshold)
    }

    pub fn pencil(&self, beta: f64) -> crate::Result<PerturbedPencil<f64>> {
        perturbed_pencil(&self.d_inv, &self.graph_laplacian, beta)
    }

    fn expected_inertia(&self) -> Inertia {
        Inertia::new(self.n * self.s - self.s, 0, self.s)
    }
}

fn zero_threshold(eig: &SymEigen, tol: &Tolerance) -> f64 {
    eig.zero_threshold(tol)
}

fn fail_all(id: &'static str, beta: f64, err: &crate::Error, tol: &Tolerance) -> CheckResult {
    CheckResult::new(id, false, tol)
        .beta(beta)
        .with("error", Evidence::Text(format!("{err}")))
}

/// Preliminary identities for `D(T)` and `L(G)`, plus positive definiteness
/// of `UᵀD⁻¹U`.
pub fn verify_preliminaries(
    ctx: &VerificationContext,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let (n, s) = (ctx.n, ctx.s);

    // P1: D_ij = L†_ii + L†_jj − 2 L†_ij.
    out.push(match pinv_psd(ctx.tree_laplacian.matrix(), tol) {
        Ok(pinv) => {
            let pinv = BlockMatrix::new(n, s, pinv).expect("ns x ns");
            let from_pinv = distance_from_pinv(&pinv);
            let res = from_pinv
                .matrix()
                .rel_diff(ctx.d.matrix())
                .unwrap_or(f64::INFINITY);
            CheckResult::new(ids::P1, res <= tol.rel_residual, tol)
                .with("residual", Evidence::Real(res))
        }
        Err(e) => {
            CheckResult::new(ids::P1, false, tol).with("error", Evidence::Text(format!("{e}")))
        }
    });

    // P2: closed-form D⁻¹ times D is the identity.
    let id = DenseMatrix::identity(n * s);
    let res = ctx
        .d_inv
        .matrix()
        .matmul(ctx.d.matrix())
        .and_then(|p| p.max_abs_diff(&id))
        .unwrap_or(f64::INFINITY);
    out.push(
        CheckResult::new(ids::P2, res <= tol.rel_residual, tol)
            .with("residual", Evidence::Real(res)),
    );

    if opts.dense_cross_check {
        out.push(match ctx.d.inverse() {
            Ok(dense) => {
                let diff = ctx
                    .d_inv
                    .matrix()
                    .rel_diff(dense.matrix())
                    .unwrap_or(f64::INFINITY);
                CheckResult::new(ids::P2_DENSE, diff <= tol.rel_residual, tol)
                    .with("max_rel_diff", Evidence::Real(diff))
            }
            Err(e) => CheckResult::new(ids::P2_DENSE, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        });
    }

    // P3: inertia of D and negative definiteness on the null space of J.
    match sym_eigen(ctx.d.matrix(), tol) {
        Ok(eig) => {
            let inertia = eig.inertia(tol);
            out.push(
                CheckResult::new(ids::P3_INERTIA, inertia == ctx.expected_inertia(), tol)
                    .with("inertia", Evidence::Inertia(inertia))
                    .with("expected", Evidence::Inertia(ctx.expected_inertia())),
            );
            let scale = eig.spectral_radius().max(1.0);
            out.push(
                match ctx
                    .basis
                    .restrict(ctx.d.matrix())
                    .and_then(|m| sym_eigen(&m, tol))
                {
                    Ok(r) => {
                        CheckResult::new(ids::P3_NULLSPACE, r.max() < -tol.eig_zero * scale, tol)
                            .with("max_eigenvalue", Evidence::Real(r.max()))
                    }
                    Err(e) => CheckResult::new(ids::P3_NULLSPACE, false, tol)
                        .with("error", Evidence::Text(format!("{e}"))),
                },
            );
        }
        Err(e) => {
            for id in [ids::P3_INERTIA, ids::P3_NULLSPACE] {
                out.push(
                    CheckResult::new(id, false, tol).with("error", Evidence::Text(format!("{e}"))),
                );
            }
        }
    }

    // P4: L(G) PSD, L·U = 0, rank ns − s, column space inside M.
    let l = ctx.graph_laplacian.matrix();
    let l_scale = l.max_magnitude().max(1.0);
    match sym_eigen(l, tol) {
        Ok(eig) => {
            let ok = eig.min() >= -zero_threshold(&eig, tol);
            out.push(
                CheckResult::new(ids::P4_PSD, ok, tol)
                    .with("min_eigenvalue", Evidence::Real(eig.min())),
            );
        }
        Err(e) => out.push(
            CheckResult::new(ids::P4_PSD, false, tol).with("error", Evidence::Text(format!("{e}"))),
        ),
    }
    let lu = l
        .matmul(&ctx.u)
        .map(|m| m.max_magnitude())
        .unwrap_or(f64::INFINITY);
    out.push(
        CheckResult::new(ids::P4_LU, lu <= tol.nonzero_floor * l_scale, tol)
            .with("residual", Evidence::Real(lu)),
    );
    out.push(match rank_of(l, tol) {
        Ok(rank) => CheckResult::new(ids::P4_RANK, rank == n * s - s, tol)
            .with("rank", Evidence::Count(rank))
            .with("expected", Evidence::Count(n * s - s)),
        Err(e) => {
            CheckResult::new(ids::P4_RANK, false, tol).with("error", Evidence::Text(format!("{e}")))
        }
    });
    let jl = build_j::<f64>(n, s)
        .and_then(|j| j.matrix().matmul(l))
        .map(|m| m.max_magnitude())
        .unwrap_or(f64::INFINITY);
    out.push(
        CheckResult::new(ids::P4_COLSPACE, jl <= tol.nonzero_floor * l_scale, tol)
            .with("residual", Evidence::Real(jl)),
    );

    // UᵀD⁻¹U positive definite.
    out.push(
        match ctx
            .u
            .transpose()
            .matmul(ctx.d_inv.matrix())
            .and_then(|m| m.matmul(&ctx.u))
            .and_then(|m| sym_eigen(&m.symmetrized(), tol))
        {
            Ok(eig) => CheckResult::new(ids::COR2_8, eig.min() > zero_threshold(&eig, tol), tol)
                .with("min_eigenvalue", Evidence::Real(eig.min())),
            Err(e) => CheckResult::new(ids::COR2_8, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        },
    );
    out
}

/// Parts (i)–(vi) of the theorem at one `β ≥ 0`.
pub fn verify_theorem(
    ctx: &VerificationContext,
    beta: f64,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let (n, s) = (ctx.n, ctx.s);
    let ns = n * s;
    let mut out = Vec::new();

    let pencil = match ctx.pencil(beta) {
        Ok(p) => p,
        Err(e) => {
            for id in [ids::THM_I, ids::THM_II] {
                out.push(fail_all(id, beta, &e, tol));
            }
            for i in 0..n {
                out.push(fail_all(ids::THM_III, beta, &e, tol).index(vec![i]));
            }
            for id in [
                ids::THM_IV,
                ids::THM_IV_HAYNSWORTH,
                ids::THM_V,
                ids::THM_VI,
                ids::THM_VI_GX,
            ] {
                out.push(fail_all(id, beta, &e, tol));
            }
            return out;
        }
    };
    let p = pencil.p.matrix();
    let f = &pencil.f;

    // (i) nonsingular; (ii) inertia (ns − s, 0, s).
    match sym_eigen(p, tol) {
        Ok(eig) => {
            let smallest = eig
                .values
                .iter()
                .fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
            let nonsingular = smallest > zero_threshold(&eig, tol);
            let ok = nonsingular && pencil.inversion_residual <= tol.rel_residual;
            out.push(
                CheckResult::new(ids::THM_I, ok, tol)
                    .beta(beta)
                    .with("min_abs_eigenvalue", Evidence::Real(smallest))
                    .with(
                        "inversion_residual",
                        Evidence::Real(pencil.inversion_residual),
                    ),
            );
            let inertia = eig.inertia(tol);
            out.push(
                CheckResult::new(ids::THM_II, inertia == ctx.expected_inertia(), tol)
                    .beta(beta)
                    .with("inertia", Evidence::Inertia(inertia))
                    .with("expected", Evidence::Inertia(ctx.expected_inertia())),
            );
        }
        Err(e) => {
            out.push(fail_all(ids::THM_I, beta, &e, tol));
            out.push(fail_all(ids::THM_II, beta, &e, tol));
        }
    }

    // (iii) P[[ [n] ∖ {i} ]] negative definite. At β = 0 that block is
    // D⁻¹[[Δ]], which is only negative semidefinite with nullity s.
    for i in 0..n {
        let idx = BlockIndexSet::all_but(i, n).expect("n >= 2");
        let check = principal_block_submatrix(&pencil.p, &idx)
            .and_then(|sub| sym_eigen(sub.matrix(), tol))
            .map(|eig| {
                let inertia = eig.inertia(tol);
                let dim = (n - 1) * s;
                let (ok, variant) = if beta > 0.0 {
                    (inertia == Inertia::new(dim, 0, 0), "negative definite")
                } else {
                    (
                        inertia == Inertia::new(dim - s, s, 0),
                        "negative semidefinite, nullity s (beta = 0)",
                    )
                };
                CheckResult::new(ids::THM_III, ok, tol)
                    .with("max_eigenvalue", Evidence::Real(eig.max()))
                    .with("inertia", Evidence::Inertia(inertia))
                    .with("claim", Evidence::Text(variant.into()))
            });
        out.push(
            match check {
                Ok(c) => c,
                Err(e) => CheckResult::new(ids::THM_III, false, tol)
                    .with("error", Evidence::Text(format!("{e}"))),
            }
            .beta(beta)
            .index(vec![i]),
        );
    }

    // (iv) bordered matrix inertia (ns, 0, s) and Haynsworth additivity with
    // G/F = −UᵀD⁻¹U.
    let g = bordered(f, &ctx.u).expect("U has ns rows");
    let expected_g = Inertia::new(ns, 0, s);
    out.push(
        match sym_eigen(&g.g, tol) {
            Ok(eig) => {
                let inertia = eig.inertia(tol);
                CheckResult::new(ids::THM_IV, inertia == expected_g, tol)
                    .with("inertia", Evidence::Inertia(inertia))
                    .with("expected", Evidence::Inertia(expected_g))
            }
            Err(e) => CheckResult::new(ids::THM_IV, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        }
        .beta(beta),
    );

    out.push(
        match haynsworth_check(&g.g, &Pivot::Leading(g.split), tol) {
            Ok(h) => {
                let target = ctx
                    .u
                    .transpose()
                    .matmul(ctx.d_inv.matrix())
                    .and_then(|m| m.matmul(&ctx.u))
                    .map(|m| m.neg());
                let schur_res = target
                    .and_then(|t| h.complement_matrix.rel_diff(&t))
                    .unwrap_or(f64::INFINITY);
                CheckResult::new(
                    ids::THM_IV_HAYNSWORTH,
                    h.pass && schur_res <= tol.rel_residual,
                    tol,
                )
                .with("inertia_g", Evidence::Inertia(h.whole))
                .with("inertia_f", Evidence::Inertia(h.pivot))
                .with("inertia_g_over_f", Evidence::Inertia(h.complement))
                .with("schur_residual", Evidence::Real(schur_res))
            }
            Err(e) => CheckResult::new(ids::THM_IV_HAYNSWORTH, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        }
        .beta(beta),
    );

    // (v) F negative semidefinite on the null space of J.
    let f_eig = sym_eigen(f.matrix(), tol);
    let f_radius = f_eig
        .as_ref()
        .map(|e| e.spectral_radius())
        .unwrap_or(f.matrix().norm_inf());
    out.push(
        match ctx
            .basis
            .restrict(f.matrix())
            .and_then(|m| sym_eigen(&m.symmetrized(), tol))
        {
            Ok(eig) => {
                let bound = tol.eig_zero * f_radius.max(1.0);
                CheckResult::new(ids::THM_V, eig.max() <= bound, tol)
                    .with("max_eigenvalue", Evidence::Real(eig.max()))
                    .with("strictly_negative", Evidence::Flag(eig.max() < -bound))
            }
            Err(e) => CheckResult::new(ids::THM_V, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        }
        .beta(beta),
    );

    // (vi) every block positive definite, G_x inertia (n − 1, 0, 1) with
    // off-diagonal entries bounded away from zero.
    if beta <= 0.0 {
        let reason = "diagonal blocks of D are zero at beta = 0";
        out.push(CheckResult::skipped(ids::THM_VI, beta, reason, tol));
        out.push(CheckResult::skipped(ids::THM_VI_GX, beta, reason, tol));
    } else {
        for i in 0..n {
            for j in 0..n {
                let blk = f.block(i, j);
                let c = match (
                    is_pd_quadratic_form(&blk, tol),
                    quadratic_form_min(&blk, tol),
                ) {
                    (Ok(pd), Ok(min)) => CheckResult::new(ids::THM_VI, pd, tol)
                        .with("min_symmetric_part_eigenvalue", Evidence::Real(min)),
                    (Err(e), _) | (_, Err(e)) => CheckResult::new(ids::THM_VI, false, tol)
                        .with("error", Evidence::Text(format!("{e}"))),
                };
                out.push(c.beta(beta).index(vec![i, j]));
            }
        }
        for (k, x) in gx_vectors(s, opts).iter().enumerate() {
            out.push(gx_check(f, x, f_radius, tol).beta(beta).index(vec![k]));
        }
        if let Some(exact) = &ctx.exact {
            out.extend(exact_checks(ctx, exact, &pencil, beta, tol));
        }
    }

    downgrade(ctx, opts, &mut out);
    out
}

fn gx_vectors(s: usize, opts: &VerifyOptions) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..s)
        .map(|k| (0..s).map(|q| if q == k { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.gx_seed);
    while out.len() < s + opts.gx_random_vectors {
        let x: Vec<f64> = (0..s)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let norm = libm::sqrt(DenseMatrix::dot(&x, &x));
        if norm > 1e-6 {
            out.push(x.iter().map(|v| v / norm).collect());
        }
    }
    out
}

fn gx_check(f: &BlockMatrix<f64>, x: &[f64], f_radius: f64, tol: &Tolerance) -> CheckResult {
    let n = f.n();
    let gx = match gx_matrix(f, x) {
        Ok(g) => g.gx,
        Err(e) => {
            return CheckResult::new(ids::THM_VI_GX, false, tol)
                .with("error", Evidence::Text(format!("{e}")))
        }
    };
    let min_diag = (0..n).map(|i| gx[(i, i)]).fold(f64::INFINITY, f64::min);
    let min_offdiag = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| gx[(i, j)].abs())
        .fold(f64::INFINITY, f64::min);
    let floor = tol.nonzero_floor * f_radius.max(1.0);
    match sym_eigen(&gx.symmetrized(), tol) {
        Ok(eig) => {
            let inertia = eig.inertia(tol);
            let ok = min_diag > 0.0 && inertia == Inertia::new(n - 1, 0, 1) && min_offdiag > floor;
            CheckResult::new(ids::THM_VI_GX, ok, tol)
                .with("inertia", Evidence::Inertia(inertia))
                .with("min_diagonal", Evidence::Real(min_diag))
                .with("min_abs_offdiagonal", Evidence::Real(min_offdiag))
                .with("x", Evidence::Reals(x.to_vec()))
        }
        Err(e) => CheckResult::new(ids::THM_VI_GX, false, tol)
            .with("error", Evidence::Text(format!("{e}"))),
    }
}

fn exact_checks(
    ctx: &VerificationContext,
    exact: &ExactParts,
    float_pencil: &PerturbedPencil<f64>,
    beta: f64,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let Some(beta_q) = rational_from_f64(beta) else {
        return out;
    };
    let pencil = match perturbed_pencil(&exact.d_inv, &exact.graph_laplacian, beta_q) {
        Ok(p) => p,
        Err(e) => {
            out.push(fail_all(ids::KERNEL_AGREEMENT, beta, &e, tol));
            return out;
        }
    };
    let exact_f = pencil.f.to_f64();
    let rel = float_pencil
        .f
        .matrix()
        .rel_diff(exact_f.matrix())
        .unwrap_or(f64::INFINITY);
    out.push(
        CheckResult::new(
            ids::KERNEL_AGREEMENT,
            rel <= KERNEL_AGREEMENT_TOL && pencil.inversion_residual == 0.0,
            tol,
        )
        .beta(beta)
        .with("max_rel_diff", Evidence::Real(rel)),
    );
    for k in 0..ctx.s {
        let x: Vec<Rational> = (0..ctx.s)
            .map(|q| Rational::from_i64((q == k) as i64))
            .collect();
        let c = match gx_matrix(&pencil.f, &x) {
            Ok(g) => {
                let zeros = (0..ctx.n)
                    .flat_map(|i| (0..ctx.n).map(move |j| (i, j)))
                    .filter(|&(i, j)| i != j && g.gx[(i, j)].is_zero_value())
                    .count();
                let positive_diag = (0..ctx.n).all(|i| g.gx[(i, i)] > Rational::from_i64(0));
                CheckResult::new(ids::THM_VI_GX_EXACT, zeros == 0 && positive_diag, tol)
                    .with("zero_offdiagonal_entries", Evidence::Count(zeros))
                    .with("positive_diagonal", Evidence::Flag(positive_diag))
            }
            Err(e) => CheckResult::new(ids::THM_VI_GX_EXACT, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        };
        out.push(c.beta(beta).index(vec![k]));
    }
    out
}

trait ZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl ZeroValue for Rational {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Fiedler–Markham nullity equality for `A = F(β)`, `H = A⁻¹ = P(β)`:
/// `nullity(H[[Δ]]) = nullity(A_ii)` for `Δ = [n] ∖ {i}`.
pub fn verify_fiedler_markham(
    ctx: &VerificationContext,
    beta: f64,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let n = ctx.n;
    let mut out = Vec::new();
    match ctx.pencil(beta) {
        Ok(pencil) => {
            let mut lhs = Vec::with_capacity(n);
            let mut rhs = Vec::with_capacity(n);
            let mut err = None;
            for i in 0..n {
                let idx = BlockIndexSet::all_but(i, n).expect("n >= 2");
                let q = principal_block_submatrix(&pencil.p, &idx)
                    .and_then(|q| nullity_of(q.matrix(), tol));
                let a = nullity_of(&pencil.f.block(i, i), tol);
                match (q, a) {
                    (Ok(q), Ok(a)) => {
                        lhs.push(q);
                        rhs.push(a);
                    }
                    (Err(e), _) | (_, Err(e)) => err = Some(e),
                }
            }
            out.push(
                match err {
                    None => CheckResult::new(ids::FM_NULLITY, lhs == rhs, tol)
                        .with("nullity_complement_of_inverse", Evidence::Counts(lhs))
                        .with("nullity_diagonal_block", Evidence::Counts(rhs)),
                    Some(e) => CheckResult::new(ids::FM_NULLITY, false, tol)
                        .with("error", Evidence::Text(format!("{e}"))),
                }
                .beta(beta),
            );
        }
        Err(e) => out.push(fail_all(ids::FM_NULLITY, beta, &e, tol)),
    }
    downgrade(ctx, opts, &mut out);
    out
}

/// `nullity(D⁻¹[[ [n] ∖ {i} ]]) = s` for every `i`.
pub fn verify_dinv_nullity(
    ctx: &VerificationContext,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let (n, s) = (ctx.n, ctx.s);
    let nullities: crate::Result<Vec<usize>> = (0..n)
        .map(|i| {
            let idx = BlockIndexSet::all_but(i, n).expect("n >= 2");
            principal_block_submatrix(&ctx.d_inv, &idx).and_then(|q| nullity_of(q.matrix(), tol))
        })
        .collect();
    let mut out = vec![match nullities {
        Ok(v) => CheckResult::new(ids::FM_NULLITY_DINV, v.iter().all(|&k| k == s), tol)
            .with("nullities", Evidence::Counts(v))
            .with("expected", Evidence::Count(s)),
        Err(e) => CheckResult::new(ids::FM_NULLITY_DINV, false, tol)
            .with("error", Evidence::Text(format!("{e}"))),
    }];
    downgrade(ctx, opts, &mut out);
    out
}

/// `trace f(α) > 0` on the `α` grid and `trace f(α) → trace D_ij` as `α ↓ 0`,
/// for every off-diagonal block.
pub fn verify_block_traces(
    ctx: &VerificationContext,
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let n = ctx.n;
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    for &alpha in &opts.trace_alphas {
        out.push(
            match ctx.pencil(alpha) {
                Ok(p) => {
                    let min_trace = pairs
                        .iter()
                        .map(|&(i, j)| p.f.block(i, j).trace())
                        .fold(f64::INFINITY, f64::min);
                    CheckResult::new(ids::THM_VI_TRACE, min_trace > 0.0, tol)
                        .with("min_trace", Evidence::Real(min_trace))
                }
                Err(e) => CheckResult::new(ids::THM_VI_TRACE, false, tol)
                    .with("error", Evidence::Text(format!("{e}"))),
            }
            .alpha(alpha),
        );
    }
    let limit_alpha = if opts.limit_alpha_scaled {
        let scale = ctx.d.matrix().norm_inf() * ctx.graph_laplacian.matrix().norm_inf();
        opts.limit_alpha / scale.max(1.0)
    } else {
        opts.limit_alpha
    };
    out.push(
        match ctx.pencil(limit_alpha) {
            Ok(p) => {
                let worst = pairs
                    .iter()
                    .map(|&(i, j)| {
                        let target = ctx.d.block(i, j).trace();
                        (p.f.block(i, j).trace() - target).abs() / target.max(1.0)
                    })
                    .fold(0.0, f64::max);
                CheckResult::new(ids::THM_VI_LIMIT, worst <= opts.limit_rel_tol, tol)
                    .with("max_rel_trace_gap", Evidence::Real(worst))
            }
            Err(e) => CheckResult::new(ids::THM_VI_LIMIT, false, tol)
                .with("error", Evidence::Text(format!("{e}"))),
        }
        .alpha(limit_alpha),
    );
    downgrade(ctx, opts, &mut out);
    out
}

fn downgrade(ctx: &VerificationContext, opts: &VerifyOptions, checks: &mut [CheckResult]) {
    if ctx.is_ill_conditioned(opts) {
        for c in checks.iter_mut().filter(|c| c.status == CheckStatus::Fail) {
            c.status = CheckStatus::Warning;
            c.evidence
                .push(("weight_condition", Evidence::Real(ctx.weight_condition)));
        }
    }
}

/// Runs every check on one instance for every `β` in `betas`.
pub fn verify_all(
    ctx: &VerificationContext,
    betas: &[f64],
    opts: &VerifyOptions,
    tol: &Tolerance,
) -> Vec<CheckResult> {
    let mut out = verify_preliminaries(ctx, opts, tol);
    downgrade(ctx, opts, &mut out);
    out.extend(verify_dinv_nullity(ctx, opts, tol));
    out.extend(verify_block_traces(ctx, opts, tol));
    for &beta in betas {
        out.extend(verify_theorem(ctx, beta, opts, tol));
        out.extend(verify_fiedler_markham(ctx, beta, opts, tol));
    }
    out
}

/// Pass / fail / skipped / warning counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub warnings: usize,
}

impl Summary {
    pub fn of(checks: &[CheckResult]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.status {
                CheckStatus::Pass => s.passed += 1,
                CheckStatus::Fail => s.failed += 1,
                CheckStatus::Skipped => s.skipped += 1,
                CheckStatus::Warning => s.warnings += 1,
            }
        }
        s
    }
}
