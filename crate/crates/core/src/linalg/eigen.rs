use crate::error::{Error, Result};
use crate::linalg::{Matrix, TolerancePolicy, Vector};

/// Eigendecomposition of a symmetric matrix: `S = V diag(λ) Vᵀ` with the
/// eigenvalues in ascending order and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SymEigen {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Rebuilds `V diag(g(λ)) Vᵀ` for a spectral function `g`.
    pub fn apply_spectral<F: Fn(f64) -> f64>(&self, g: F) -> Matrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for (k, &lam) in self.eigenvalues.iter().enumerate() {
                    let glam = g(lam);
                    if glam != 0.0 {
                        acc += glam * v.get(i, k) * v.get(j, k);
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> Vector {
        self.eigenvectors.column(k)
    }
}

const MAX_SWEEPS: usize = 60;

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Robust and plenty fast at the small dense sizes this crate works with.
/// The returned eigenpairs are sorted ascending and each eigenvector's sign
/// is fixed so the output is a pure function of the input.
pub fn sym_eigen(s: &Matrix, tol: &TolerancePolicy) -> Result<SymEigen> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            found: s.cols(),
        });
    }
    let asym = s.max_asymmetry();
    if asym > tol.tau_eq * (1.0 + s.max_abs()) {
        return Err(Error::NonSymmetric {
            max_asymmetry: asym,
        });
    }

    let n = s.rows();
    let mut a = s.symmetrized();
    let mut v = Matrix::identity(n);
    // Rotations below machine precision relative to the matrix scale are noise.
    let off_tol = 1e-14 * (1.0 + a.max_abs());

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).abs();
            }
        }
        if off <= off_tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= f64::EPSILON * off_tol {
                    continue;
                }
                let theta = 0.5 * (a.get(q, q) - a.get(p, p)) / apq;
                let t = {
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s_ = t * c;
                let tau = s_ / (1.0 + c);

                let h = t * apq;
                a[(p, p)] -= h;
                a[(q, q)] += h;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for j in 0..n {
                    if j != p && j != q {
                        let g = a.get(j, p);
                        let hh = a.get(j, q);
                        let gp = g - s_ * (hh + g * tau);
                        let gq = hh + s_ * (g - hh * tau);
                        a[(j, p)] = gp;
                        a[(p, j)] = gp;
                        a[(j, q)] = gq;
                        a[(q, j)] = gq;
                    }
                }
                for j in 0..n {
                    let g = v.get(j, p);
                    let hh = v.get(j, q);
                    v[(j, p)] = g - s_ * (hh + g * tau);
                    v[(j, q)] = hh + s_ * (g - hh * tau);
                }
            }
        }
    }
    if !converged {
        // One last check: the sweep loop may have hit the limit right as the
        // off-diagonal mass dropped below tolerance.
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).abs();
            }
        }
        if off > off_tol {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Matrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        eigenvalues.push(a.get(src, src));
        // Fix the sign: largest-magnitude component positive.
        let mut pivot = 0;
        let mut best = 0.0;
        for i in 0..n {
            let x = v.get(i, src).abs();
            if x > best {
                best = x;
                pivot = i;
            }
        }
        let flip = if v.get(pivot, src) < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, k)] = flip * v.get(i, src);
        }
    }

    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &SymEigen) -> Matrix {
        e.apply_spectral(|x| x)
    }

    #[test]
    fn diagonal_input_is_immediate() {
        let s = Matrix::from_rows([[2.0, 0.0], [0.0, 5.0]]).unwrap();
        let e = sym_eigen(&s, &TolerancePolicy::default()).unwrap();
        assert_eq!(e.eigenvalues, vec![2.0, 5.0]);
        assert_eq!(e.eigenvectors, Matrix::identity(2));
    }

    #[test]
    fn two_by_two_closed_form() {
        // Eigenvalues of [[2,-1],[-1,5]] are (7 ± √13)/2.
        let s = Matrix::from_rows([[2.0, -1.0], [-1.0, 5.0]]).unwrap();
        let e = sym_eigen(&s, &TolerancePolicy::default()).unwrap();
        let lo = (7.0 - 13.0f64.sqrt()) / 2.0;
        let hi = (7.0 + 13.0f64.sqrt()) / 2.0;
        assert!((e.eigenvalues[0] - lo).abs() < 1e-14);
        assert!((e.eigenvalues[1] - hi).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let s = Matrix::from_rows([
            [4.0, 1.0, -2.0, 0.5, 0.0],
            [1.0, 3.0, 0.0, 1.0, -1.0],
            [-2.0, 0.0, 5.0, 0.25, 0.75],
            [0.5, 1.0, 0.25, 1.0, 2.0],
            [0.0, -1.0, 0.75, 2.0, -2.0],
        ])
        .unwrap();
        let e = sym_eigen(&s, &TolerancePolicy::default()).unwrap();
        let r = reconstruct(&e);
        assert!(r.sub(&s).max_abs() < 1e-10);
        let vtv = e.eigenvectors.transpose().matmul(&e.eigenvectors);
        assert!(vtv.sub(&Matrix::identity(5)).max_abs() < 1e-10);
        for w in e.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let s = Matrix::from_rows([[1.0, 2.0], [0.0, 1.0]]).unwrap();
        let err = sym_eigen(&s, &TolerancePolicy::default()).unwrap_err();
        assert!(matches!(err, Error::NonSymmetric { .. }));
    }

    #[test]
    fn deterministic_output() {
        let s = Matrix::from_rows([[1.0, 2.0, 3.0], [2.0, 3.0, 2.0], [3.0, 2.0, 2.0]]).unwrap();
        let a = sym_eigen(&s, &TolerancePolicy::default()).unwrap();
        let b = sym_eigen(&s, &TolerancePolicy::default()).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }
}
