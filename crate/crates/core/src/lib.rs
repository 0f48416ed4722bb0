//! Analysis of second-order cone functions f(x) = cᵀx + d − ‖Ax + b‖.
//!
//! The crate converts between the general parameterization and the
//! canonical one f(x) = cᵀx + d − √(δ² + (x−x\*)ᵀM(x−x\*)), decides strict
//! concavity, classifies boundedness and critical sets, classifies the
//! feasible region {x | f(x) ≥ 0}, and ships brute-force probes that
//! cross-check every closed-form answer by sampling.
//!
//! Modules:
//! - [`linalg`]: small dense kernels (Jacobi eigendecomposition,
//!   pseudoinverse, PSD square root, projectors) and the tolerance policy.
//! - [`form`]: the two parameterizations, evaluation, derivatives, and
//!   conversions.
//! - [`analysis`]: the classifiers and contour-grid evaluation.
//! - [`oracle`]: sampling-based verifiers and seeded instance generators.
//!
//! Batch evaluations (contour grids, grid search, probe sampling) run on
//! rayon when the default `parallel` feature is enabled and fall back to
//! identical sequential loops without it.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod form;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
pub use form::{socf_equal, AsymptoteData, CanonicalForm, GeneralForm, LineRestriction};
pub use linalg::{Matrix, TolerancePolicy, Vector};
