//! The two parameterizations of a second-order cone function and the
//! conversions between them.
//!
//! A function f(x) = cᵀx + d − ‖Ax + b‖ can always be rewritten as
//! f(x) = cᵀx + d − √(δ² + (x − x\*)ᵀ M (x − x\*)) with M = AᵀA positive
//! semidefinite, x\* = −A⁺b, and δ = ‖Ax\* + b‖. The general form is what
//! constraint systems are written in; the canonical form is the one the
//! classifiers in [`crate::analysis`] reason about.

use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, pseudoinverse, sym_eigen, Matrix, TolerancePolicy, Vector};

/// Corner detection threshold for gradient/Hessian smoothness checks.
/// Matches the default `tau_zero`.
const CORNER_EPS: f64 = 1e-12;

/// f(x) = cᵀx + d − ‖Ax + b‖ with A ∈ R^{m×n}, b ∈ R^m.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralForm {
    c: Vector,
    d: f64,
    a: Matrix,
    b: Vector,
}

impl GeneralForm {
    pub fn new(c: Vector, d: f64, a: Matrix, b: Vector) -> Result<GeneralForm> {
        if !d.is_finite() {
            return Err(Error::NonFinite);
        }
        if a.cols() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.cols(),
                found: c.dim(),
            });
        }
        if a.rows() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: b.dim(),
            });
        }
        Ok(GeneralForm { c, d, a, b })
    }

    /// Number of variables n.
    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn c(&self) -> &Vector {
        &self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    /// cᵀx + d − ‖Ax + b‖.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let residual = self.a.matvec(x).add(&self.b);
        Ok(self.c.dot(x) + self.d - residual.norm())
    }

    /// Rewrites the function with M = AᵀA, x\* = −A⁺b, δ = ‖Ax\* + b‖.
    ///
    /// δ is snapped to zero below `τ_zero·(1 + ‖b‖)`: it is the norm of a
    /// least-squares residual and never comes out exactly zero in floating
    /// point when b lies in col(A).
    pub fn canonicalize(&self, tol: &TolerancePolicy) -> Result<CanonicalForm> {
        let m = self.a.gram();
        let a_pinv = pseudoinverse(&self.a, tol)?;
        let x_star = a_pinv.matvec(&self.b).scale(-1.0);
        let mut delta = self.a.matvec(&x_star).add(&self.b).norm();
        if delta < tol.tau_zero * (1.0 + self.b.norm()) {
            delta = 0.0;
        }
        CanonicalForm::new(self.c.clone(), self.d, delta, m, x_star, tol)
    }

    /// Restriction to the affine subspace {x₀ + By}: an SOCF in y with
    /// c' = Bᵀc, d' = cᵀx₀ + d, A' = AB, b' = Ax₀ + b.
    pub fn restrict(&self, x0: &Vector, basis: &Matrix) -> Result<GeneralForm> {
        if x0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x0.dim(),
            });
        }
        if basis.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: basis.rows(),
            });
        }
        let c = basis.transpose().matvec(&self.c);
        let d = self.c.dot(x0) + self.d;
        let a = self.a.matmul(basis);
        let b = self.a.matvec(x0).add(&self.b);
        GeneralForm::new(c, d, a, b)
    }

    /// Restriction to the line {x₀ + tv}, reduced to one-variable data.
    ///
    /// If Av = 0 the restriction is linear and the constant norm term is
    /// folded into the intercept. Otherwise g(t) = c̃t + d̃ −
    /// √(δ̃² + ‖Av‖²(t − t\*)²) with t\* the minimizer of the radical.
    pub fn restrict_to_line(
        &self,
        x0: &Vector,
        v: &Vector,
        tol: &TolerancePolicy,
    ) -> Result<LineRestriction> {
        if x0.dim() != self.dim() || v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        if v.norm() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let av = self.a.matvec(v);
        let r0 = self.a.matvec(x0).add(&self.b);
        let slope2 = av.dot(&av);
        let c_lin = self.c.dot(v);
        if slope2 <= tol.tau_zero {
            return Ok(LineRestriction {
                coeff: c_lin,
                intercept: self.c.dot(x0) + self.d - r0.norm(),
                delta: 0.0,
                slope2: 0.0,
                t_star: 0.0,
            });
        }
        let t_star = -av.dot(&r0) / slope2;
        let delta = self.a.matvec(&x0.add(&v.scale(t_star))).add(&self.b).norm();
        Ok(LineRestriction {
            coeff: c_lin,
            intercept: self.c.dot(x0) + self.d,
            delta,
            slope2,
            t_star,
        })
    }
}

/// f(x) = cᵀx + d − √(δ² + (x − x\*)ᵀ M (x − x\*)) with M symmetric PSD
/// and δ ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    c: Vector,
    d: f64,
    delta: f64,
    m: Matrix,
    x_star: Vector,
}

impl CanonicalForm {
    /// Validates δ ≥ 0, symmetry of M within `τ_eq`, eigenvalues ≥ −`τ_zero`,
    /// and dimensional consistency. M is stored exactly symmetrized.
    pub fn new(
        c: Vector,
        d: f64,
        delta: f64,
        m: Matrix,
        x_star: Vector,
        tol: &TolerancePolicy,
    ) -> Result<CanonicalForm> {
        if !d.is_finite() || !delta.is_finite() {
            return Err(Error::NonFinite);
        }
        if delta < 0.0 {
            return Err(Error::InvalidInput {
                reason: "delta must be non-negative",
            });
        }
        let n = c.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
        if x_star.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x_star.dim(),
            });
        }
        let eig = sym_eigen(&m, tol)?;
        if eig.lambda_min() < -tol.tau_zero {
            return Err(Error::NotPsd {
                min_eigenvalue: eig.lambda_min(),
            });
        }
        Ok(CanonicalForm {
            c,
            d,
            delta,
            m: m.symmetrized(),
            x_star,
        })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn c(&self) -> &Vector {
        &self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn m(&self) -> &Matrix {
        &self.m
    }

    pub fn x_star(&self) -> &Vector {
        &self.x_star
    }

    /// δ² + (x − x\*)ᵀM(x − x\*), clamped at zero against rounding.
    fn radicand(&self, x: &Vector) -> f64 {
        let w = x.sub(&self.x_star);
        let quad = w.dot(&self.m.matvec(&w));
        (self.delta * self.delta + quad).max(0.0)
    }

    /// cᵀx + d − √(δ² + (x − x\*)ᵀM(x − x\*)).
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(self.c.dot(x) + self.d - self.radicand(x).sqrt())
    }

    /// Whether the function is differentiable at x. False only on the
    /// corner set of a δ = 0 function with M ≠ 0.
    pub fn smooth_at(&self, x: &Vector) -> Result<bool> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        if self.delta > 0.0 || self.m.max_abs() <= CORNER_EPS {
            return Ok(true);
        }
        let w = x.sub(&self.x_star);
        let quad = w.dot(&self.m.matvec(&w)).max(0.0);
        Ok(quad > CORNER_EPS)
    }

    /// c − M(x − x\*)/√(δ² + (x − x\*)ᵀM(x − x\*)) at smooth points.
    ///
    /// With δ = 0 the function has a corner where M(x − x\*) = 0; there the
    /// gradient does not exist unless M itself vanishes (linear function).
    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let w = x.sub(&self.x_star);
        let mw = self.m.matvec(&w);
        let quad = w.dot(&mw).max(0.0);
        if self.delta == 0.0 && quad <= CORNER_EPS {
            if self.m.max_abs() <= CORNER_EPS {
                return Ok(self.c.clone());
            }
            return Err(Error::NotDifferentiable);
        }
        let s = (self.delta * self.delta + quad).sqrt();
        Ok(self.c.sub(&mw.scale(1.0 / s)))
    }

    /// −M/s + (M(x − x\*))(M(x − x\*))ᵀ/s³ with s the evaluated radical;
    /// symmetric and negative semidefinite at every smooth point.
    pub fn hessian(&self, x: &Vector) -> Result<Matrix> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let n = self.dim();
        let w = x.sub(&self.x_star);
        let mw = self.m.matvec(&w);
        let quad = w.dot(&mw).max(0.0);
        if self.delta == 0.0 && quad <= CORNER_EPS {
            if self.m.max_abs() <= CORNER_EPS {
                return Ok(Matrix::zeros(n, n));
            }
            return Err(Error::NotDifferentiable);
        }
        let s = (self.delta * self.delta + quad).sqrt();
        let s3 = s * s * s;
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = -self.m.get(i, j) / s + mw[i] * mw[j] / s3;
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        Ok(h)
    }

    /// The canonical general-form parameters: A = [M^{1/2}; 0-row] and
    /// b = [−M^{1/2}x\*; δ], so that ‖Ax + b‖² = δ² + (x − x\*)ᵀM(x − x\*).
    pub fn reconstruct(&self, tol: &TolerancePolicy) -> Result<GeneralForm> {
        let n = self.dim();
        let root = psd_sqrt(&self.m, tol)?;
        let mut a = Matrix::zeros(n + 1, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = root.get(i, j);
            }
        }
        let shifted = root.matvec(&self.x_star);
        let mut b = vec![0.0; n + 1];
        for i in 0..n {
            b[i] = -shifted[i];
        }
        b[n] = self.delta;
        GeneralForm::new(self.c.clone(), self.d, a, Vector::new(b)?)
    }

    /// Slant-asymptote data of t ↦ f(vt) as t → ∞: the slope
    /// α(v) = cᵀv − √(vᵀMv) always exists; the intercept
    /// β(v) = d + vᵀMx\*/√(vᵀMv) only when vᵀMv > 0.
    pub fn asymptote(&self, v: &Vector, tol: &TolerancePolicy) -> Result<AsymptoteData> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        if v.norm() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let mv = self.m.matvec(v);
        let vmv = v.dot(&mv).max(0.0);
        let slope = self.c.dot(v) - vmv.sqrt();
        let intercept = if vmv > tol.tau_zero {
            Some(self.d + self.x_star.dot(&mv) / vmv.sqrt())
        } else {
            None
        };
        Ok(AsymptoteData { slope, intercept })
    }
}

/// One-variable restriction g(t) = c̃t + d̃ − √(δ̃² + slope2·(t − t\*)²).
///
/// `slope2` stores ‖Av‖² rather than ‖Av‖ so downstream formulas never pay
/// for a lossy square root. When `slope2 = 0` the restriction is linear and
/// the unused radical parameters are zeroed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineRestriction {
    /// c̃ = cᵀv.
    pub coeff: f64,
    /// d̃; includes the constant norm term in the linear case.
    pub intercept: f64,
    /// δ̃ ≥ 0.
    pub delta: f64,
    /// ‖Av‖² ≥ 0.
    pub slope2: f64,
    /// Minimizer of the radical along the line.
    pub t_star: f64,
}

impl LineRestriction {
    pub fn eval(&self, t: f64) -> f64 {
        let dt = t - self.t_star;
        self.coeff * t + self.intercept - (self.delta * self.delta + self.slope2 * dt * dt).sqrt()
    }

    pub fn is_linear(&self) -> bool {
        self.slope2 == 0.0
    }
}

/// Slope and (optional) intercept of the slant asymptote along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteData {
    pub slope: f64,
    pub intercept: Option<f64>,
}

/// Whether the two canonical parameter sets define the same function.
///
/// With M = 0 the parameters are degenerate: only c and d − δ matter and
/// x\* is arbitrary. With M ≠ 0 everything is pinned down except x\*, which
/// is identified only through Mx\* (unique exactly when M is positive
/// definite).
pub fn socf_equal(g1: &CanonicalForm, g2: &CanonicalForm, tol: &TolerancePolicy) -> Result<bool> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            found: g2.dim(),
        });
    }
    let vec_eq = |a: &Vector, b: &Vector| {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .all(|(&x, &y)| tol.approx_eq(x, y))
    };
    let mat_eq = |a: &Matrix, b: &Matrix| {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .all(|(&x, &y)| tol.approx_eq(x, y))
    };
    let m_zero = |m: &Matrix| m.as_slice().iter().all(|&x| tol.approx_eq(x, 0.0));

    if m_zero(g1.m()) && m_zero(g2.m()) {
        return Ok(
            vec_eq(g1.c(), g2.c()) && tol.approx_eq(g1.d() - g1.delta(), g2.d() - g2.delta())
        );
    }
    Ok(vec_eq(g1.c(), g2.c())
        && tol.approx_eq(g1.d(), g2.d())
        && tol.approx_eq(g1.delta(), g2.delta())
        && mat_eq(g1.m(), g2.m())
        && vec_eq(&g1.m().matvec(g1.x_star()), &g2.m().matvec(g2.x_star())))
}
