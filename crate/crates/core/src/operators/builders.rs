//! Constructors for the Laplacian, the tree distance matrix, the closed-form
//! distance inverse and the structural matrices `J`, `U`, `E_i`.

use alloc::format;
use alloc::vec::Vec;

use super::block::BlockMatrix;
use crate::error::{Error, Result};
use crate::graph::{MatrixWeightedGraph, MatrixWeightedTree};
use crate::linalg::{pinv_psd, DenseMatrix, Matrix, Tolerance};
use crate::scalar::Scalar;

/// Block Laplacian: `-W_ij⁻¹` off the diagonal on edges, the sum of incident
/// inverted weights on the diagonal.
pub fn build_laplacian<T: Scalar>(g: &MatrixWeightedGraph<T>) -> Result<BlockMatrix<T>> {
    let s = g.s();
    let mut l = BlockMatrix::zeros(g.n(), s);
    for e in g.edges() {
        let inv = e
            .weight
            .matrix()
            .inverse()
            .map_err(|_| Error::WeightInversionFailure { u: e.u, v: e.v })?;
        // Inverse of a symmetric matrix is symmetric; remove float round-off.
        let inv = inv.add(&inv.transpose())?.scale(&T::half());
        let neg = inv.neg();
        l.add_to_block(e.u, e.u, &inv);
        l.add_to_block(e.v, e.v, &inv);
        l.set_block(e.u, e.v, &neg);
        l.set_block(e.v, e.u, &neg);
    }
    Ok(l)
}

/// Laplacian of the tree itself, as used by the closed-form inverse.
pub fn build_tree_laplacian<T: Scalar>(t: &MatrixWeightedTree<T>) -> Result<BlockMatrix<T>> {
    build_laplacian(t.as_graph())
}

/// Distance matrix of a weighted tree: block `(i, j)` is the sum of the edge
/// weights on the path between `i` and `j`; diagonal blocks are zero.
///
/// One depth-first traversal per root accumulates path sums, `O(n² s²)`.
pub fn build_distance_matrix<T: Scalar>(t: &MatrixWeightedTree<T>) -> BlockMatrix<T> {
    let n = t.n();
    let s = t.s();
    let adj = t.as_graph().adjacency();
    let edges = t.edges();
    let mut d = BlockMatrix::zeros(n, s);
    let mut stack: Vec<(usize, usize, Matrix<T>)> = Vec::new();
    for root in 0..n {
        stack.clear();
        stack.push((root, usize::MAX, Matrix::zeros(s, s)));
        while let Some((x, parent, acc)) = stack.pop() {
            if x != root {
                d.set_block(root, x, &acc);
            }
            for &(y, k) in &adj[x] {
                if y != parent {
                    let next = acc
                        .add(edges[k].weight.matrix())
                        .expect("weights share order s");
                    stack.push((y, x, next));
                }
            }
        }
    }
    if !T::EXACT {
        // Forward and reverse path sums may differ in the last bit.
        let sym = d.matrix().add(&d.matrix().transpose()).expect("square");
        d = BlockMatrix::new(n, s, sym.scale(&T::half())).expect("same shape");
    }
    d
}

/// `J`: every block equal to `I_s`.
pub fn build_j<T: Scalar>(n: usize, s: usize) -> Result<BlockMatrix<T>> {
    check_size(n, s)?;
    let ones = Matrix::from_fn(n, n, |_, _| T::one());
    BlockMatrix::new(n, s, ones.kron(&Matrix::identity(s)))
}

/// `U = e ⊗ I_s`, an `ns x s` stack of identities.
pub fn build_u<T: Scalar>(n: usize, s: usize) -> Result<Matrix<T>> {
    check_size(n, s)?;
    Ok(Matrix::from_fn(n * s, s, |r, c| {
        if r % s == c {
            T::one()
        } else {
            T::zero()
        }
    }))
}

/// `E_i = e_i ⊗ I_s` (0-based `i`).
pub fn build_e<T: Scalar>(n: usize, s: usize, i: usize) -> Result<Matrix<T>> {
    check_size(n, s)?;
    if i >= n {
        return Err(Error::BadIndex { index: i, len: n });
    }
    Ok(Matrix::from_fn(n * s, s, |r, c| {
        if r / s == i && r % s == c {
            T::one()
        } else {
            T::zero()
        }
    }))
}

fn check_size(n: usize, s: usize) -> Result<()> {
    if n < 2 || s < 1 {
        return Err(Error::InvalidSize(format!(
            "need n ≥ 2 and s ≥ 1, got n = {n}, s = {s}"
        )));
    }
    Ok(())
}

/// Basis of the null space of `J` with columns `(e_i − e_n) ⊗ I_s`,
/// `i = 1..n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullspaceBasis<T> {
    pub basis: Matrix<T>,
}

impl<T: Scalar> NullspaceBasis<T> {
    /// `Bᵀ·A·B`, the quadratic form of `A` restricted to the null space of `J`.
    pub fn restrict(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        self.basis.transpose().matmul(a)?.matmul(&self.basis)
    }
}

pub fn nullspace_basis_j<T: Scalar>(n: usize, s: usize) -> Result<NullspaceBasis<T>> {
    check_size(n, s)?;
    let last = (n - 1) * s;
    let basis = Matrix::from_fn(n * s, (n - 1) * s, |r, c| {
        if r == c {
            T::one()
        } else if r >= last && r - last == c % s {
            -T::one()
        } else {
            T::zero()
        }
    });
    Ok(NullspaceBasis { basis })
}

/// `τ`, `Δ = τ ⊗ I_s`, `R` and `U` of a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralVectors<T> {
    /// `τ_i = 2 − deg(i)`.
    pub tau: Vec<i64>,
    pub delta: Matrix<T>,
    /// Sum of all tree edge weights.
    pub r: Matrix<T>,
    pub u: Matrix<T>,
    n: usize,
    s: usize,
}

impl<T: Scalar> StructuralVectors<T> {
    pub fn e(&self, i: usize) -> Result<Matrix<T>> {
        build_e(self.n, self.s, i)
    }
}

pub fn structural_vectors<T: Scalar>(t: &MatrixWeightedTree<T>) -> StructuralVectors<T> {
    let n = t.n();
    let s = t.s();
    let tau: Vec<i64> = t
        .as_graph()
        .degrees()
        .iter()
        .map(|&d| 2 - d as i64)
        .collect();
    let tau_col = Matrix::from_fn(n, 1, |i, _| T::from_i64(tau[i]));
    let delta = tau_col.kron(&Matrix::identity(s));
    let mut r = Matrix::zeros(s, s);
    for e in t.edges() {
        r = r.add(e.weight.matrix()).expect("weights share order s");
    }
    let u = Matrix::from_fn(
        n * s,
        s,
        |row, c| if row % s == c { T::one() } else { T::zero() },
    );
    StructuralVectors {
        tau,
        delta,
        r,
        u,
        n,
        s,
    }
}

/// `D⁻¹ = −½·L(T) + ½·Δ·R⁻¹·Δᵀ` with `L(T)` the tree's own Laplacian.
pub fn distance_inverse_closed_form<T: Scalar>(
    t: &MatrixWeightedTree<T>,
) -> Result<BlockMatrix<T>> {
    let l = build_tree_laplacian(t)?;
    let sv = structural_vectors(t);
    let r_inv = sv.r.inverse().map_err(|_| Error::RInversionFailure)?;
    let r_inv = r_inv.add(&r_inv.transpose())?.scale(&T::half());
    let correction = sv.delta.matmul(&r_inv)?.matmul(&sv.delta.transpose())?;
    let half = T::half();
    let m = correction.sub(l.matrix())?.scale(&half);
    BlockMatrix::new(t.n(), t.s(), m)
}

/// Distance matrix recovered from the Laplacian pseudoinverse:
/// `D_ij = L†_ii + L†_jj − 2·L†_ij`.
pub fn distance_from_laplacian_pinv<T: Scalar>(
    t: &MatrixWeightedTree<T>,
    tol: &Tolerance,
) -> Result<BlockMatrix<f64>> {
    let l = build_tree_laplacian(t)?.to_f64();
    let pinv = BlockMatrix::new(t.n(), t.s(), pinv_psd(l.matrix(), tol)?)?;
    Ok(distance_from_pinv(&pinv))
}

/// `D_ij = L†_ii + L†_jj − 2·L†_ij` for an arbitrary block matrix `L†`.
pub fn distance_from_pinv(pinv: &BlockMatrix<f64>) -> BlockMatrix<f64> {
    let n = pinv.n();
    let s = pinv.s();
    let diag: Vec<DenseMatrix> = (0..n).map(|i| pinv.block(i, i)).collect();
    let mut d = BlockMatrix::zeros(n, s);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pij = pinv.block(i, j);
            let blk = DenseMatrix::from_fn(s, s, |a, b| {
                diag[i][(a, b)] + diag[j][(a, b)] - 2.0 * pij[(a, b)]
            });
            d.set_block(i, j, &blk);
        }
    }
    d
}

/// Dense inversion of `D`, the baseline the closed form is checked against.
pub fn distance_inverse_dense<T: Scalar>(d: &BlockMatrix<T>) -> Result<BlockMatrix<T>> {
    d.inverse()
}
