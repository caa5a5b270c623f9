//! The fundamental block matrices of a matrix-weighted tree and graph.

pub mod block;
pub mod builders;

pub use block::BlockMatrix;
pub use builders::{
    build_distance_matrix, build_e, build_j, build_laplacian, build_tree_laplacian, build_u,
    distance_from_laplacian_pinv, distance_from_pinv, distance_inverse_closed_form,
    distance_inverse_dense, nullspace_basis_j, structural_vectors, NullspaceBasis,
    StructuralVectors,
};
