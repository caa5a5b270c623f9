//! Matrix-weighted trees and graphs: distance and Laplacian operators, the
//! perturbed pencil `(D⁻¹ − βL)⁻¹` and a verifier for its inertia and
//! positivity properties.
//!
//! The crate is `no_std` with `alloc`. Dense kernels run in `f64`; an exact
//! rational kernel backs the golden example and cross-checks.

#![no_std]

extern crate alloc;

mod error;
pub mod example;
pub mod graph;
pub mod linalg;
pub mod operators;
pub mod perturbation;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result};
