//! Dense real and exact rational linear algebra.

pub mod eigen;
pub mod inertia;
pub mod matrix;
pub mod rational;
pub mod tolerance;

pub use eigen::{
    inertia_of, is_pd_quadratic_form, nullity_of, pinv_psd, quadratic_form_min, rank_of,
    singular_values, sym_eigen, SymEigen,
};
pub use inertia::Inertia;
pub use matrix::{DenseMatrix, Matrix, RationalMatrix};
pub use rational::{format_rational, parse_rational, ratio, rational_invert, RationalParseError};
pub use tolerance::Tolerance;
