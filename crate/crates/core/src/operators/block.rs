use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Matrix};
use crate::scalar::Scalar;

/// `ns x ns` matrix viewed as an `n x n` grid of `s x s` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<T> {
    n: usize,
    s: usize,
    matrix: Matrix<T>,
}

impl<T: Scalar> BlockMatrix<T> {
    pub fn new(n: usize, s: usize, matrix: Matrix<T>) -> Result<Self> {
        if matrix.shape() != (n * s, n * s) {
            return Err(Error::mismatch(
                "block matrix",
                matrix.shape(),
                (n * s, n * s),
            ));
        }
        Ok(Self { n, s, matrix })
    }

    pub fn zeros(n: usize, s: usize) -> Self {
        Self {
            n,
            s,
            matrix: Matrix::zeros(n * s, n * s),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    /// Block `(i, j)`, 0-based.
    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.matrix.window(i * self.s, j * self.s, self.s, self.s)
    }

    pub fn set_block(&mut self, i: usize, j: usize, value: &Matrix<T>) {
        assert_eq!(value.shape(), (self.s, self.s), "block must be s x s");
        self.matrix.set_window(i * self.s, j * self.s, value);
    }

    /// Adds `value` into block `(i, j)`.
    pub fn add_to_block(&mut self, i: usize, j: usize, value: &Matrix<T>) {
        for a in 0..self.s {
            for b in 0..self.s {
                let cell = &mut self.matrix[(i * self.s + a, j * self.s + b)];
                *cell = cell.clone() + value[(a, b)].clone();
            }
        }
    }

    pub fn to_f64(&self) -> BlockMatrix<f64> {
        BlockMatrix {
            n: self.n,
            s: self.s,
            matrix: self.matrix.to_f64(),
        }
    }

    fn check_same(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.n != other.n || self.s != other.s {
            return Err(Error::mismatch(op, (self.n, self.s), (other.n, other.s)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "block add")?;
        Ok(Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "block sub")?;
        Ok(Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.sub(&other.matrix)?,
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.scale(k),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "block matmul")?;
        Ok(Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.matmul(&other.matrix)?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.inverse()?,
        })
    }

    /// Applies a vertex relabelling: block `(π(i), π(j))` of the result is
    /// block `(i, j)` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let s = self.s;
        let mut inv = alloc::vec![0; self.n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let matrix = Matrix::from_fn(self.n * s, self.n * s, |r, c| {
            self.matrix[(inv[r / s] * s + r % s, inv[c / s] * s + c % s)].clone()
        });
        Self {
            n: self.n,
            s,
            matrix,
        }
    }
}

impl BlockMatrix<f64> {
    pub fn symmetrized(&self) -> Self {
        Self {
            n: self.n,
            s: self.s,
            matrix: self.matrix.symmetrized(),
        }
    }

    pub fn from_dense(n: usize, s: usize, matrix: DenseMatrix) -> Result<Self> {
        Self::new(n, s, matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_addressing() {
        let m = DenseMatrix::from_fn(6, 6, |i, j| (i * 6 + j) as f64);
        let b = BlockMatrix::new(3, 2, m).unwrap();
        let blk = b.block(1, 2);
        assert_eq!(blk.as_slice(), &[16.0, 17.0, 22.0, 23.0]);
        assert!(BlockMatrix::new(2, 2, DenseMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn permutation_moves_blocks() {
        let mut b = BlockMatrix::<f64>::zeros(3, 1);
        b.set_block(0, 1, &DenseMatrix::identity(1));
        let p = b.permute(&[2, 0, 1]);
        assert_eq!(p.block(2, 0)[(0, 0)], 1.0);
        assert_eq!(p.block(0, 1)[(0, 0)], 0.0);
    }
}
