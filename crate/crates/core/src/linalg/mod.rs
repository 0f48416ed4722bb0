//! Dense linear-algebra kernels with an explicit tolerance policy.
//!
//! Everything here is sized for small desk-scale problems: cyclic Jacobi
//! eigendecomposition, pseudoinverses through the Gram matrix, PSD square
//! roots, and column-space projectors.

mod dense;
mod eigen;
mod ops;

pub use dense::{Matrix, Vector};
pub use eigen::{sym_eigen, SymEigen};
pub use ops::{colspace_projector, psd_sqrt, pseudoinverse, rank_of};

use crate::error::{Error, Result};

/// Thresholds used by rank decisions, zero snapping, and approximate
/// equality throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Relative singular-value cutoff for rank and pseudoinverse decisions.
    pub tau_rank: f64,
    /// Absolute snap-to-zero threshold for computed residuals.
    pub tau_zero: f64,
    /// Tolerance for approximate equality of scalars, vectors, and matrices.
    pub tau_eq: f64,
}

impl TolerancePolicy {
    pub fn new(tau_rank: f64, tau_zero: f64, tau_eq: f64) -> Result<TolerancePolicy> {
        let p = TolerancePolicy {
            tau_rank,
            tau_zero,
            tau_eq,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_rank > 0.0 && self.tau_zero > 0.0 && self.tau_eq > 0.0) {
            return Err(Error::InvalidInput {
                reason: "tolerances must be strictly positive",
            });
        }
        if self.tau_rank >= 0.1 {
            return Err(Error::InvalidInput {
                reason: "tau_rank must be much smaller than 1",
            });
        }
        Ok(())
    }

    /// Scaled approximate equality for scalars.
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tau_eq * (1.0 + a.abs() + b.abs())
    }
}

impl Default for TolerancePolicy {
    /// Double-precision headroom at desk scale (dimensions up to ~50).
    fn default() -> TolerancePolicy {
        TolerancePolicy {
            tau_rank: 1e-10,
            tau_zero: 1e-12,
            tau_eq: 1e-9,
        }
    }
}
