//! The Laplacian-perturbed pencil `P(β) = D⁻¹ − β·L`, its inverse `F(β)`,
//! and the matrices the structural argument about `F` is built from: the
//! bordered matrix, Schur complements, Haynsworth inertia additivity, the
//! scalar compression `G_x` and the block function `f(α)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{inertia_of, DenseMatrix, Inertia, Matrix, Tolerance};
use crate::operators::{build_e, BlockMatrix};
use crate::scalar::Scalar;

/// `P = D⁻¹ − β·L` together with `F = P⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedPencil<T> {
    pub beta: T,
    pub p: BlockMatrix<T>,
    pub f: BlockMatrix<T>,
    /// `‖P·F − I‖_max`; exactly zero for the exact kernel.
    pub inversion_residual: f64,
}

pub fn perturbed_pencil<T: Scalar>(
    d_inv: &BlockMatrix<T>,
    l: &BlockMatrix<T>,
    beta: T,
) -> Result<PerturbedPencil<T>> {
    if beta < T::zero() {
        return Err(Error::NegativeBeta);
    }
    let mut p = d_inv.sub(&l.scale(&beta))?;
    let mut f = p.inverse()?;
    if !T::EXACT {
        p = symmetrize(&p);
        f = symmetrize(&f);
    }
    let prod = p.matrix().matmul(f.matrix())?.to_f64();
    let inversion_residual = prod.max_abs_diff(&DenseMatrix::identity(prod.rows()))?;
    Ok(PerturbedPencil {
        beta,
        p,
        f,
        inversion_residual,
    })
}

fn symmetrize<T: Scalar>(a: &BlockMatrix<T>) -> BlockMatrix<T> {
    let m = a
        .matrix()
        .add(&a.matrix().transpose())
        .expect("square")
        .scale(&T::half());
    BlockMatrix::new(a.n(), a.s(), m).expect("same shape")
}

/// Nonempty, duplicate-free set of 0-based block indices, kept in the order
/// given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndexSet {
    indices: Vec<usize>,
}

impl BlockIndexSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSize(
                "block index set must be nonempty".into(),
            ));
        }
        for (k, &i) in indices.iter().enumerate() {
            if i >= n || indices[..k].contains(&i) {
                return Err(Error::BadIndex { index: i, len: n });
            }
        }
        Ok(Self { indices })
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
        }
    }

    /// `[n] ∖ {i}`.
    pub fn all_but(i: usize, n: usize) -> Result<Self> {
        Self::new((0..n).filter(|&k| k != i).collect(), n)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Scalar row/column indices covered by these blocks.
    pub fn scalar_indices(&self, s: usize) -> Vec<usize> {
        self.indices
            .iter()
            .flat_map(|&b| b * s..(b + 1) * s)
            .collect()
    }
}

/// `A[[idx]]`: the blocks in `idx x idx`.
pub fn principal_block_submatrix<T: Scalar>(
    a: &BlockMatrix<T>,
    idx: &BlockIndexSet,
) -> Result<BlockMatrix<T>> {
    if let Some(&bad) = idx.indices().iter().find(|&&i| i >= a.n()) {
        return Err(Error::BadIndex {
            index: bad,
            len: a.n(),
        });
    }
    let rows = idx.scalar_indices(a.s());
    BlockMatrix::new(idx.len(), a.s(), a.matrix().select(&rows, &rows)?)
}

/// `[[F, U], [Uᵀ, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderedMatrix<T> {
    pub g: Matrix<T>,
    /// Dimension of the leading `F` block.
    pub split: usize,
}

pub fn bordered<T: Scalar>(f: &BlockMatrix<T>, u: &Matrix<T>) -> Result<BorderedMatrix<T>> {
    let ns = f.matrix().rows();
    if u.rows() != ns {
        return Err(Error::mismatch("bordered", f.matrix().shape(), u.shape()));
    }
    let k = u.cols();
    let mut g = Matrix::zeros(ns + k, ns + k);
    g.set_window(0, 0, f.matrix());
    g.set_window(0, ns, u);
    g.set_window(ns, 0, &u.transpose());
    Ok(BorderedMatrix { g, split: ns })
}

/// Which rows/columns form the pivot block of a Schur complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pivot {
    /// The leading `k x k` block.
    Leading(usize),
    /// Arbitrary scalar indices.
    Indices(Vec<usize>),
}

impl Pivot {
    fn split(&self, dim: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let pivot: Vec<usize> = match self {
            Pivot::Leading(k) => {
                if *k > dim {
                    return Err(Error::BadIndex {
                        index: *k,
                        len: dim,
                    });
                }
                (0..*k).collect()
            }
            Pivot::Indices(ix) => {
                for (k, &i) in ix.iter().enumerate() {
                    if i >= dim || ix[..k].contains(&i) {
                        return Err(Error::BadIndex { index: i, len: dim });
                    }
                }
                ix.clone()
            }
        };
        let rest = (0..dim).filter(|i| !pivot.contains(i)).collect();
        Ok((pivot, rest))
    }
}

/// `M / M₁₁ = M₂₂ − M₂₁·M₁₁⁻¹·M₁₂`, also returning the pivot block `M₁₁`.
pub fn schur_complement_parts<T: Scalar>(
    m: &Matrix<T>,
    pivot: &Pivot,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let dim = m.require_square()?;
    let (p, r) = pivot.split(dim)?;
    let m11 = m.select(&p, &p)?;
    let m12 = m.select(&p, &r)?;
    let m21 = m.select(&r, &p)?;
    let m22 = m.select(&r, &r)?;
    let inv = m11.inverse().map_err(|_| Error::SingularPivot)?;
    let complement = m22.sub(&m21.matmul(&inv)?.matmul(&m12)?)?;
    Ok((m11, complement))
}

pub fn schur_complement<T: Scalar>(m: &Matrix<T>, pivot: &Pivot) -> Result<Matrix<T>> {
    Ok(schur_complement_parts(m, pivot)?.1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaynsworthOutcome {
    /// `In(M)`.
    pub whole: Inertia,
    /// `In(M₁₁)`.
    pub pivot: Inertia,
    /// `In(M / M₁₁)`.
    pub complement: Inertia,
    pub complement_matrix: DenseMatrix,
    pub pass: bool,
}

impl HaynsworthOutcome {
    pub fn rhs_sum(&self) -> Inertia {
        self.pivot + self.complement
    }
}

/// Checks `In(M) = In(M₁₁) + In(M / M₁₁)` componentwise.
pub fn haynsworth_check(
    m: &DenseMatrix,
    pivot: &Pivot,
    tol: &Tolerance,
) -> Result<HaynsworthOutcome> {
    let (m11, complement) = schur_complement_parts(m, pivot)?;
    let complement = complement.symmetrized();
    let whole = inertia_of(m, tol)?;
    let pivot_in = inertia_of(&m11.symmetrized(), tol)?;
    let complement_in = inertia_of(&complement, tol)?;
    let pass = whole == pivot_in + complement_in;
    Ok(HaynsworthOutcome {
        whole,
        pivot: pivot_in,
        complement: complement_in,
        complement_matrix: complement,
        pass,
    })
}

/// `G_x = [xᵀ A_ij x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GxMatrix<T> {
    pub x: Vec<T>,
    pub gx: Matrix<T>,
}

pub fn gx_matrix<T: Scalar>(a: &BlockMatrix<T>, x: &[T]) -> Result<GxMatrix<T>> {
    let s = a.s();
    if x.len() != s {
        return Err(Error::mismatch("gx_matrix", (s, 1), (x.len(), 1)));
    }
    if x.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let m = a.matrix();
    let gx = Matrix::from_fn(a.n(), a.n(), |i, j| {
        let mut acc = T::zero();
        for p in 0..s {
            for q in 0..s {
                acc = acc + x[p].clone() * m[(i * s + p, j * s + q)].clone() * x[q].clone();
            }
        }
        acc
    });
    Ok(GxMatrix { x: x.to_vec(), gx })
}

/// `f(α) = E_iᵀ (D⁻¹ − α·L)⁻¹ E_j` for `i ≠ j`, `α > 0`.
pub fn f_alpha_block<T: Scalar>(
    d_inv: &BlockMatrix<T>,
    l: &BlockMatrix<T>,
    i: usize,
    j: usize,
    alpha: T,
) -> Result<Matrix<T>> {
    if i == j {
        return Err(Error::InvalidSize(
            "f(α) is defined for off-diagonal blocks only".into(),
        ));
    }
    if !(alpha > T::zero()) {
        return Err(Error::NegativeBeta);
    }
    let pencil = perturbed_pencil(d_inv, l, alpha)?;
    let (n, s) = (d_inv.n(), d_inv.s());
    let ei = build_e::<T>(n, s, i)?;
    let ej = build_e::<T>(n, s, j)?;
    ei.transpose().matmul(pencil.f.matrix())?.matmul(&ej)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, RationalMatrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn negative_beta_is_rejected() {
        let d = BlockMatrix::new(
            2,
            1,
            DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let l = BlockMatrix::<f64>::zeros(2, 1);
        assert_eq!(perturbed_pencil(&d, &l, -1.0), Err(Error::NegativeBeta));
    }

    #[test]
    fn schur_of_two_by_two() {
        let m = DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]).unwrap();
        let c = schur_complement(&m, &Pivot::Leading(1)).unwrap();
        assert!((c[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn schur_of_block_diagonal_is_the_other_block() {
        let a =
            RationalMatrix::from_rows(&[[ratio(2, 1), ratio(1, 1)], [ratio(1, 1), ratio(3, 1)]])
                .unwrap();
        let b =
            RationalMatrix::from_rows(&[[ratio(-1, 2), ratio(1, 3)], [ratio(1, 3), ratio(7, 1)]])
                .unwrap();
        let mut m = RationalMatrix::zeros(4, 4);
        m.set_window(0, 0, &a);
        m.set_window(2, 2, &b);
        assert_eq!(schur_complement(&m, &Pivot::Leading(2)).unwrap(), b);
        assert_eq!(
            schur_complement(&m, &Pivot::Indices(alloc::vec![2, 3])).unwrap(),
            a
        );
    }

    #[test]
    fn singular_pivot_is_reported() {
        let m = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(
            schur_complement(&m, &Pivot::Leading(1)),
            Err(Error::SingularPivot)
        );
    }

    #[test]
    fn haynsworth_on_diagonal() {
        let m = DenseMatrix::diagonal(&[1.0, -1.0]);
        let out = haynsworth_check(&m, &Pivot::Indices(alloc::vec![0]), &tol()).unwrap();
        assert!(out.pass);
        assert_eq!(out.whole, Inertia::new(1, 0, 1));
        assert_eq!(out.pivot, Inertia::new(0, 0, 1));
        assert_eq!(out.complement, Inertia::new(1, 0, 0));
    }

    #[test]
    fn single_edge_bordered_inertia() {
        // β = 0, F = D = [[0, 1], [1, 0]], U = [1, 1]ᵀ.
        let d = BlockMatrix::new(
            2,
            1,
            DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let u = DenseMatrix::from_rows(&[[1.0], [1.0]]).unwrap();
        let g = bordered(&d, &u).unwrap();
        assert!(g.g.is_symmetric_exact());
        assert_eq!(g.g[(2, 2)], 0.0);
        assert_eq!(inertia_of(&g.g, &tol()).unwrap(), Inertia::new(2, 0, 1));
        assert!(bordered(&d, &DenseMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn index_sets() {
        assert!(BlockIndexSet::new(alloc::vec![], 3).is_err());
        assert!(BlockIndexSet::new(alloc::vec![0, 0], 3).is_err());
        assert!(BlockIndexSet::new(alloc::vec![3], 3).is_err());
        assert_eq!(BlockIndexSet::all_but(1, 3).unwrap().indices(), &[0, 2]);
        assert_eq!(
            BlockIndexSet::new(alloc::vec![2, 0], 3)
                .unwrap()
                .scalar_indices(2),
            alloc::vec![4, 5, 0, 1]
        );
    }

    #[test]
    fn gx_scalar_case_is_identity_map() {
        let a = BlockMatrix::new(
            2,
            1,
            DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 5.0]]).unwrap(),
        )
        .unwrap();
        let g = gx_matrix(&a, &[1.0]).unwrap();
        assert_eq!(&g.gx, a.matrix());
        assert_eq!(gx_matrix(&a, &[0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn full_index_submatrix_is_identity_operation() {
        let a =
            BlockMatrix::new(2, 2, DenseMatrix::from_fn(4, 4, |i, j| (i + 2 * j) as f64)).unwrap();
        assert_eq!(
            principal_block_submatrix(&a, &BlockIndexSet::full(2)).unwrap(),
            a
        );
    }
}
