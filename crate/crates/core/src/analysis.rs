//! Classifiers for second-order cone functions in canonical form: strict
//! concavity, the boundedness case taxonomy, critical sets, suprema, and
//! the shape of the feasible region {x | f(x) ≥ 0}.
//!
//! A function f(x) = cᵀx + d − √(δ² + (x−x\*)ᵀM(x−x\*)) is bounded above
//! exactly when c ∈ col(M) and q = cᵀM⁺c ≤ 1. The positive definite cases
//! split six ways on (q vs 1) × (δ = 0 or not); the singular cases mirror
//! them on col(M) with everything translated along the null space, where f
//! is constant.

use crate::error::{Error, Result};
use crate::exec;
use crate::form::CanonicalForm;
use crate::linalg::{sym_eigen, SymEigen, TolerancePolicy, Vector};

/// Why a function fails to be strictly concave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcavityReason {
    /// M is singular (equivalently rank(A) < n).
    RankDeficient,
    /// δ = 0 (equivalently b ∈ col(A)).
    DeltaZero,
}

/// Strict-concavity verdict with the failed conditions when negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcavityClass {
    pub strictly_concave: bool,
    pub reasons: Vec<ConcavityReason>,
}

/// Where the function attains critical points.
#[derive(Debug, Clone, PartialEq)]
pub enum CriticalSet {
    None,
    Point {
        base: Vector,
    },
    Ray {
        base: Vector,
        direction: Vector,
    },
    /// A point translated along the null space of M.
    PointPlusNull {
        base: Vector,
        null_basis: Vec<Vector>,
    },
    /// A ray translated along the null space of M.
    RayPlusNull {
        base: Vector,
        direction: Vector,
        null_basis: Vec<Vector>,
    },
}

impl CriticalSet {
    pub fn base(&self) -> Option<&Vector> {
        match self {
            CriticalSet::None => None,
            CriticalSet::Point { base }
            | CriticalSet::Ray { base, .. }
            | CriticalSet::PointPlusNull { base, .. }
            | CriticalSet::RayPlusNull { base, .. } => Some(base),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, CriticalSet::None)
    }

    /// True when the set contains points arbitrarily far from its base.
    pub fn is_unbounded_set(&self) -> bool {
        matches!(
            self,
            CriticalSet::Ray { .. }
                | CriticalSet::PointPlusNull { .. }
                | CriticalSet::RayPlusNull { .. }
        )
    }
}

/// Which branch of the boundedness taxonomy applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// M positive definite, q < 1, δ = 0: corner maximum at x\*.
    Pd1,
    /// M positive definite, q = 1, δ = 0: maximum attained on a ray.
    Pd2,
    /// M positive definite, q > 1, δ = 0: corner critical point, unbounded.
    Pd3,
    /// M positive definite, q < 1, δ > 0: smooth maximum at x_cp.
    Pd4,
    /// M positive definite, q = 1, δ > 0: bounded, supremum not attained.
    Pd5,
    /// M positive definite, q > 1, δ > 0: unbounded, no critical points.
    Pd6,
    /// M singular and c has a component outside col(M): unbounded.
    SemiDefNotInCol,
    /// M singular, c ∈ col(M), q ≤ 1: bounded above.
    SemiDefBounded,
    /// M singular, c ∈ col(M), q > 1: unbounded.
    SemiDefUnbounded,
    /// M = 0 and c = 0: constant function.
    LinearBounded,
    /// M = 0 and c ≠ 0: unbounded linear function.
    LinearUnbounded,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Pd1 => "PD1",
            CaseTag::Pd2 => "PD2",
            CaseTag::Pd3 => "PD3",
            CaseTag::Pd4 => "PD4",
            CaseTag::Pd5 => "PD5",
            CaseTag::Pd6 => "PD6",
            CaseTag::SemiDefNotInCol => "SemiDefNotInCol",
            CaseTag::SemiDefBounded => "SemiDefBounded",
            CaseTag::SemiDefUnbounded => "SemiDefUnbounded",
            CaseTag::LinearBounded => "LinearBounded",
            CaseTag::LinearUnbounded => "LinearUnbounded",
        }
    }
}

/// Full boundedness classification of one function.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport {
    pub bounded_above: bool,
    pub case_tag: CaseTag,
    /// q = cᵀM⁺c; absent when c ∉ col(M) (there the quantity does not
    /// control boundedness).
    pub q: Option<f64>,
    /// Least upper bound; +∞ when unbounded above.
    pub supremum: f64,
    /// Whether some point actually achieves the supremum.
    pub attained: bool,
    pub critical_set: CriticalSet,
    /// Set when |q − 1| ≤ τ_eq: the classification sits on the measure-zero
    /// boundary where floating point cannot distinguish the cases.
    pub boundary_flag: bool,
}

/// Shape of the feasible region {x | f(x) ≥ 0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    Empty,
    Singleton,
    CompactWithInterior,
    UnboundedNonempty,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::Empty => "Empty",
            RegionClass::Singleton => "Singleton",
            RegionClass::CompactWithInterior => "CompactWithInterior",
            RegionClass::UnboundedNonempty => "UnboundedNonempty",
        }
    }
}

/// Magnitude scale used to make tolerance comparisons relative:
/// 1 + |d| + ‖c‖ + δ + λ_max(1 + ‖x\*‖²).
pub fn magnitude_scale(g: &CanonicalForm, lambda_max: f64) -> f64 {
    let xs = g.x_star().norm();
    1.0 + g.d().abs() + g.c().norm() + g.delta() + lambda_max.max(0.0) * (1.0 + xs * xs)
}

fn eigen_of(g: &CanonicalForm, tol: &TolerancePolicy) -> SymEigen {
    sym_eigen(g.m(), tol).expect("canonical form carries a symmetric matrix")
}

/// Strict concavity: M positive definite and δ > 0.
pub fn concavity_class(g: &CanonicalForm, tol: &TolerancePolicy) -> ConcavityClass {
    let eig = eigen_of(g, tol);
    let lambda_max = eig.lambda_max().max(0.0);
    let positive_definite = eig.lambda_min() > tol.tau_zero * lambda_max;
    let mut reasons = Vec::new();
    if !positive_definite {
        reasons.push(ConcavityReason::RankDeficient);
    }
    if g.delta() == 0.0 {
        reasons.push(ConcavityReason::DeltaZero);
    }
    ConcavityClass {
        strictly_concave: reasons.is_empty(),
        reasons,
    }
}

/// Position of q relative to 1, with a tolerance band around the boundary.
enum QCase {
    Below,
    Boundary,
    Above,
}

fn q_case(q: f64, tol: &TolerancePolicy) -> QCase {
    if (q - 1.0).abs() <= tol.tau_eq {
        QCase::Boundary
    } else if q < 1.0 {
        QCase::Below
    } else {
        QCase::Above
    }
}

/// Classifies boundedness, computes the supremum, and describes the
/// critical set.
pub fn boundedness_report(g: &CanonicalForm, tol: &TolerancePolicy) -> BoundednessReport {
    let n = g.dim();
    let eig = eigen_of(g, tol);
    let lambda_max = eig.lambda_max().max(0.0);
    let scale = magnitude_scale(g, lambda_max);
    let vertex_value = g.c().dot(g.x_star()) + g.d();

    // M = 0: the function is affine in disguise.
    if lambda_max <= tol.tau_zero {
        return if g.c().norm() <= tol.tau_eq * scale {
            BoundednessReport {
                bounded_above: true,
                case_tag: CaseTag::LinearBounded,
                q: Some(0.0),
                supremum: g.d() - g.delta(),
                attained: true,
                critical_set: CriticalSet::PointPlusNull {
                    base: g.x_star().clone(),
                    null_basis: (0..n).map(|i| Vector::basis(n, i)).collect(),
                },
                boundary_flag: false,
            }
        } else {
            BoundednessReport {
                bounded_above: false,
                case_tag: CaseTag::LinearUnbounded,
                q: None,
                supremum: f64::INFINITY,
                attained: false,
                critical_set: CriticalSet::None,
                boundary_flag: false,
            }
        };
    }

    let positive_definite = eig.lambda_min() > tol.tau_zero * lambda_max;
    let rank_cut = tol.tau_rank * lambda_max;

    if !positive_definite {
        let projector = eig.apply_spectral(|l| if l > rank_cut { 1.0 } else { 0.0 });
        let outside = g.c().sub(&projector.matvec(g.c())).norm();
        if outside > tol.tau_eq * g.c().norm() {
            return BoundednessReport {
                bounded_above: false,
                case_tag: CaseTag::SemiDefNotInCol,
                q: None,
                supremum: f64::INFINITY,
                attained: false,
                critical_set: CriticalSet::None,
                boundary_flag: false,
            };
        }
    }

    let m_pinv = eig.apply_spectral(|l| if l > rank_cut { 1.0 / l } else { 0.0 });
    let steepest = m_pinv.matvec(g.c());
    let q = g.c().dot(&steepest).max(0.0);
    let boundary_flag = (q - 1.0).abs() <= tol.tau_eq;
    let null_basis: Vec<Vector> = (0..n)
        .filter(|&k| eig.eigenvalues[k] <= rank_cut)
        .map(|k| eig.eigenvector(k))
        .collect();

    let with_null = |base: Vector| -> CriticalSet {
        if positive_definite {
            CriticalSet::Point { base }
        } else {
            CriticalSet::PointPlusNull {
                base,
                null_basis: null_basis.clone(),
            }
        }
    };
    let ray_with_null = |base: Vector, direction: Vector| -> CriticalSet {
        if positive_definite {
            CriticalSet::Ray { base, direction }
        } else {
            CriticalSet::RayPlusNull {
                base,
                direction,
                null_basis: null_basis.clone(),
            }
        }
    };
    let tag = |pd_tag: CaseTag, bounded: bool| -> CaseTag {
        if positive_definite {
            pd_tag
        } else if bounded {
            CaseTag::SemiDefBounded
        } else {
            CaseTag::SemiDefUnbounded
        }
    };

    let (case_tag, supremum, attained, critical_set) = match (q_case(q, tol), g.delta() > 0.0) {
        (QCase::Below, false) => (
            tag(CaseTag::Pd1, true),
            vertex_value,
            true,
            with_null(g.x_star().clone()),
        ),
        (QCase::Boundary, false) => (
            tag(CaseTag::Pd2, true),
            vertex_value,
            true,
            ray_with_null(g.x_star().clone(), steepest),
        ),
        (QCase::Above, false) => (
            tag(CaseTag::Pd3, false),
            f64::INFINITY,
            false,
            with_null(g.x_star().clone()),
        ),
        (QCase::Below, true) => {
            let shrink = (1.0 - q).sqrt();
            let x_cp = g.x_star().add(&steepest.scale(g.delta() / shrink));
            (
                tag(CaseTag::Pd4, true),
                vertex_value - g.delta() * shrink,
                true,
                with_null(x_cp),
            )
        }
        (QCase::Boundary, true) => (
            tag(CaseTag::Pd5, true),
            vertex_value,
            false,
            CriticalSet::None,
        ),
        (QCase::Above, true) => (
            tag(CaseTag::Pd6, false),
            f64::INFINITY,
            false,
            CriticalSet::None,
        ),
    };

    BoundednessReport {
        bounded_above: supremum.is_finite(),
        case_tag,
        q: Some(q),
        supremum,
        attained,
        critical_set,
        boundary_flag,
    }
}

/// The critical set alone; shorthand for the corresponding report field.
pub fn critical_points(g: &CanonicalForm, tol: &TolerancePolicy) -> CriticalSet {
    boundedness_report(g, tol).critical_set
}

/// Classifies the feasible region {x | f(x) ≥ 0} as empty, a single point,
/// compact with interior, or unbounded.
pub fn region_class(g: &CanonicalForm, tol: &TolerancePolicy) -> RegionClass {
    let report = boundedness_report(g, tol);
    if !report.bounded_above {
        return RegionClass::UnboundedNonempty;
    }
    let eig = eigen_of(g, tol);
    let scale = magnitude_scale(g, eig.lambda_max().max(0.0));
    let band = tol.tau_eq * scale;
    let sup = report.supremum;
    let compact_shape = matches!(report.case_tag, CaseTag::Pd1 | CaseTag::Pd4);

    if sup < -band {
        RegionClass::Empty
    } else if sup <= band {
        if !report.attained {
            RegionClass::Empty
        } else if report.critical_set.is_unbounded_set() {
            RegionClass::UnboundedNonempty
        } else {
            RegionClass::Singleton
        }
    } else if compact_shape {
        RegionClass::CompactWithInterior
    } else {
        RegionClass::UnboundedNonempty
    }
}

/// Function values on a uniform 2-D lattice, row-major with x varying
/// fastest within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    pub nx: usize,
    pub ny: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub values: Vec<f64>,
}

impl ContourGrid {
    pub fn x_at(&self, ix: usize) -> f64 {
        lerp(self.x_range, ix, self.nx)
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        lerp(self.y_range, iy, self.ny)
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }
}

fn lerp(range: (f64, f64), i: usize, n: usize) -> f64 {
    range.0 + (range.1 - range.0) * (i as f64) / ((n - 1) as f64)
}

fn contour_grid_impl(
    g: &CanonicalForm,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
    parallel: bool,
) -> Result<ContourGrid> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g.dim(),
        });
    }
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput {
            reason: "grid needs at least 2 points per axis",
        });
    }
    let increasing = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
    if !increasing(x_range) || !increasing(y_range) {
        return Err(Error::InvalidInput {
            reason: "grid ranges must be finite and increasing",
        });
    }
    let eval_at = |idx: usize| {
        let ix = idx % nx;
        let iy = idx / nx;
        let x = Vector::from_raw(vec![lerp(x_range, ix, nx), lerp(y_range, iy, ny)]);
        g.eval(&x).expect("dimension checked above")
    };
    let values = if parallel {
        exec::map_indexed(nx * ny, eval_at)
    } else {
        exec::map_indexed_seq(nx * ny, eval_at)
    };
    Ok(ContourGrid {
        nx,
        ny,
        x_range,
        y_range,
        values,
    })
}

/// Evaluates the function over a uniform grid, in parallel when the
/// `parallel` feature is enabled.
pub fn contour_grid(
    g: &CanonicalForm,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<ContourGrid> {
    contour_grid_impl(g, x_range, y_range, nx, ny, true)
}

/// Always-sequential twin of [`contour_grid`] for benchmarking; results are
/// bitwise identical.
pub fn contour_grid_seq(
    g: &CanonicalForm,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<ContourGrid> {
    contour_grid_impl(g, x_range, y_range, nx, ny, false)
}
