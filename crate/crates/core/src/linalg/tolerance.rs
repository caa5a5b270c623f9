use alloc::format;

use crate::error::{Error, Result};

/// Numerical thresholds shared by every floating-point check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative residual allowed for identities such as `A·A⁻¹ = I`.
    pub rel_residual: f64,
    /// Eigenvalues with `|λ| ≤ eig_zero · max(1, ρ(A))` count as zero.
    pub eig_zero: f64,
    /// Relative floor below which a quantity is considered vanishing.
    pub nonzero_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_residual: 1e-8,
            eig_zero: 1e-9,
            nonzero_floor: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(rel_residual: f64, eig_zero: f64, nonzero_floor: f64) -> Result<Self> {
        let t = Self {
            rel_residual,
            eig_zero,
            nonzero_floor,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_residual", self.rel_residual),
            ("eig_zero", self.eig_zero),
            ("nonzero_floor", self.nonzero_floor),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidSize(format!(
                    "tolerance {name} = {v} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}
