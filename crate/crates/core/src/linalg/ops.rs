use crate::error::{Error, Result};
use crate::linalg::eigen::sym_eigen;
use crate::linalg::{Matrix, TolerancePolicy};

/// Computed eigenvalues carry roughly `ε·λ_max` of rounding noise, so exact
/// rank deficiencies of a Gram matrix show up as eigenvalues near
/// 1e-16·λ_max rather than 0. This floor keeps them out of the numerical
/// range regardless of how small `τ_rank` is set.
const EIGENVALUE_NOISE_FLOOR: f64 = 1e-13;

fn gram_cutoff(lambda_max: f64, tol: &TolerancePolicy) -> f64 {
    (tol.tau_rank * tol.tau_rank).max(EIGENVALUE_NOISE_FLOOR) * lambda_max
}

/// Moore–Penrose pseudoinverse.
///
/// Symmetric inputs are inverted on their own spectrum; general inputs go
/// through the eigendecomposition of AᵀA, which is adequate at the small
/// scales this crate targets. Singular values below the relative cutoff are
/// treated as zero.
pub fn pseudoinverse(a: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    if a.is_symmetric_within(tol.tau_eq) {
        let eig = sym_eigen(a, tol)?;
        let sigma_max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
        if sigma_max == 0.0 {
            return Ok(Matrix::zeros(a.cols(), a.rows()));
        }
        let cut = tol.tau_rank * sigma_max;
        return Ok(eig.apply_spectral(|l| if l.abs() > cut { 1.0 / l } else { 0.0 }));
    }

    let eig = sym_eigen(&a.gram(), tol)?;
    let lambda_max = eig.lambda_max().max(0.0);
    if lambda_max == 0.0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    let cut = gram_cutoff(lambda_max, tol);
    // A⁺ = (AᵀA)⁺ Aᵀ restricted to the numerical row space.
    let gram_pinv = eig.apply_spectral(|l| if l > cut { 1.0 / l } else { 0.0 });
    Ok(gram_pinv.matmul(&a.transpose()))
}

/// Number of singular values above the relative cutoff; 0 for the zero matrix.
pub fn rank_of(a: &Matrix, tol: &TolerancePolicy) -> Result<usize> {
    if a.is_symmetric_within(tol.tau_eq) {
        let eig = sym_eigen(a, tol)?;
        let sigma_max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
        let cut = tol.tau_rank * sigma_max;
        return Ok(eig
            .eigenvalues
            .iter()
            .filter(|&&l| sigma_max > 0.0 && l.abs() > cut)
            .count());
    }
    let eig = sym_eigen(&a.gram(), tol)?;
    let lambda_max = eig.lambda_max().max(0.0);
    if lambda_max == 0.0 {
        return Ok(0);
    }
    let cut = gram_cutoff(lambda_max, tol);
    Ok(eig.eigenvalues.iter().filter(|&&l| l > cut).count())
}

/// Unique positive semidefinite square root of a PSD matrix.
///
/// Eigenvalues in `[-τ_zero, 0)` are clamped to zero; anything lower is
/// rejected as genuinely indefinite.
pub fn psd_sqrt(m: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    let eig = sym_eigen(m, tol)?;
    if eig.lambda_min() < -tol.tau_zero {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.lambda_min(),
        });
    }
    // Numerically-null eigenvalues must map to exactly 0, not to √noise:
    // the square root would otherwise promote 1e-16·λ_max of eigen noise
    // into a 1e-8-sized spurious direction.
    let floor = EIGENVALUE_NOISE_FLOOR * eig.lambda_max().max(0.0);
    Ok(eig.apply_spectral(|l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// Orthogonal projector onto the column space of a symmetric PSD matrix.
pub fn colspace_projector(m: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    let eig = sym_eigen(m, tol)?;
    if eig.lambda_min() < -tol.tau_zero {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.lambda_min(),
        });
    }
    let cut = tol.tau_rank * eig.lambda_max().max(0.0);
    Ok(eig.apply_spectral(|l| if l > cut { 1.0 } else { 0.0 }))
}
