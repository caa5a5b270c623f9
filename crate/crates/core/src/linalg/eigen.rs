//! Symmetric eigendecomposition and the spectral predicates built on it.
//!
//! The solver reduces the matrix to tridiagonal form with Householder
//! reflections and then runs implicit QL iterations with Wilkinson-style
//! shifts, accumulating the orthogonal transform as it goes. Eigenvalues
//! come back in ascending order with matching eigenvector columns.

use alloc::vec;
use alloc::vec::Vec;

use super::inertia::Inertia;
use super::matrix::DenseMatrix;
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 64;

#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: DenseMatrix,
}

impl SymEigen {
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `|λ|` at or below this is classified as zero.
    pub fn zero_threshold(&self, tol: &Tolerance) -> f64 {
        tol.eig_zero * self.spectral_radius().max(1.0)
    }

    pub fn inertia(&self, tol: &Tolerance) -> Inertia {
        let zero = self.zero_threshold(tol);
        let mut out = Inertia::default();
        for &v in &self.values {
            if v.abs() <= zero {
                out.n_zero += 1;
            } else if v < 0.0 {
                out.n_minus += 1;
            } else {
                out.n_plus += 1;
            }
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V·diag(values)·Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)])
                .sum()
        })
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Asymmetry up to `rel_residual · max(1, ‖A‖_max)` is accepted and removed by
/// symmetrizing before the decomposition.
pub fn sym_eigen(a: &DenseMatrix, tol: &Tolerance) -> Result<SymEigen> {
    let n = a.require_square()?;
    let asym = a.asymmetry();
    if asym > tol.rel_residual * a.max_magnitude().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: DenseMatrix::zeros(0, 0),
        });
    }
    let mut v = a.symmetrized();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEigen { values, vectors })
}

/// Householder reduction to tridiagonal form. On return `v` holds the
/// accumulated orthogonal transform, `d` the diagonal and `e[1..]` the
/// subdiagonal.
fn tridiagonalize(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`, rotating the columns of `v`.
fn tridiagonal_ql(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > f64::EPSILON * tst1 {
            m += 1;
        }

        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let vh = v[(k, i + 1)];
                        let vi = v[(k, i)];
                        v[(k, i + 1)] = s * vi + c * vh;
                        v[(k, i)] = c * vi - s * vh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= f64::EPSILON * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Inertia with the relative zero threshold of `tol`.
pub fn inertia_of(a: &DenseMatrix, tol: &Tolerance) -> Result<Inertia> {
    Ok(sym_eigen(a, tol)?.inertia(tol))
}

/// Moore-Penrose inverse of a symmetric positive semidefinite matrix.
pub fn pinv_psd(a: &DenseMatrix, tol: &Tolerance) -> Result<DenseMatrix> {
    let eig = sym_eigen(a, tol)?;
    let zero = eig.zero_threshold(tol);
    if eig.min() < -zero {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    let n = eig.values.len();
    let inv: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l > zero { 1.0 / l } else { 0.0 })
        .collect();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| eig.vectors[(i, k)] * inv[k] * eig.vectors[(j, k)])
            .sum()
    }))
}

/// `xᵀAx > 0` for every nonzero `x`, i.e. the symmetric part of `A` is
/// positive definite beyond `eig_zero · max(1, ‖A‖_F)`.
pub fn is_pd_quadratic_form(a: &DenseMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(quadratic_form_min(a, tol)? > tol.eig_zero * a.norm_fro().max(1.0))
}

/// Smallest eigenvalue of the symmetric part `(A + Aᵀ)/2`.
pub fn quadratic_form_min(a: &DenseMatrix, tol: &Tolerance) -> Result<f64> {
    a.require_square()?;
    Ok(sym_eigen(&a.symmetrized(), tol)?.min())
}

const MAX_JACOBI_SWEEPS: usize = 60;

/// Singular values by one-sided Jacobi rotations on the columns, in no
/// particular order.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    let mut w = if n > m { a.transpose() } else { a.clone() };
    let (rows, cols) = w.shape();
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    gamma += w[(i, p)] * w[(i, q)];
                }
                if gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = c * t;
                for i in 0..rows {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - sn * y;
                    w[(i, q)] = sn * x + c * y;
                }
            }
        }
        if !rotated {
            return Ok((0..cols)
                .map(|j| libm::sqrt((0..rows).map(|i| w[(i, j)] * w[(i, j)]).sum()))
                .collect());
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_JACOBI_SWEEPS,
    })
}

/// Numerical rank: singular values above `eig_zero · max(1, σ_max)`.
///
/// Symmetric input uses `|λ|`; anything else uses one-sided Jacobi.
pub fn rank_of(a: &DenseMatrix, tol: &Tolerance) -> Result<usize> {
    let singular: Vec<f64> =
        if a.is_square() && a.asymmetry() <= tol.rel_residual * a.max_magnitude().max(1.0) {
            sym_eigen(a, tol)?.values.iter().map(|v| v.abs()).collect()
        } else {
            singular_values(a)?
        };
    let largest = singular.iter().fold(0.0_f64, |acc, v| acc.max(*v));
    let cut = tol.eig_zero * largest.max(1.0);
    Ok(singular.iter().filter(|&&v| v > cut).count())
}

/// `n − rank` for a square matrix.
pub fn nullity_of(a: &DenseMatrix, tol: &Tolerance) -> Result<usize> {
    let n = a.require_square()?;
    Ok(n - rank_of(a, tol)?)
}
