//! Independent brute-force verifiers for the closed-form classifiers:
//! chord sampling for concavity, asymptote-slope sampling for boundedness,
//! finite differences for derivatives, and refining grid search for maxima.
//!
//! Everything is driven by an explicit seed so a failing probe can be
//! replayed exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::magnitude_scale;
use crate::error::{Error, Result};
use crate::exec;
use crate::form::{CanonicalForm, GeneralForm};
use crate::linalg::{colspace_projector, sym_eigen, Matrix, TolerancePolicy, Vector};

/// Concavity violations beyond this multiple of the magnitude scale are
/// treated as real rather than rounding.
const CONCAVITY_SLACK: f64 = 1e-9;

/// Sampling budget and step sizes for the probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    /// Number of random chords for the concavity probe.
    pub n_segments: usize,
    /// Number of random unit directions for the boundedness probe.
    pub n_directions: usize,
    /// Farthest ray parameter sampled when hunting for growth.
    pub t_max: f64,
    pub seed: u64,
    /// Finite-difference step.
    pub h_fd: f64,
}

impl Default for ProbeConfig {
    fn default() -> ProbeConfig {
        ProbeConfig {
            n_segments: 200,
            n_directions: 64,
            t_max: 1e6,
            seed: 0,
            h_fd: 1e-5,
        }
    }
}

impl ProbeConfig {
    pub fn with_seed(seed: u64) -> ProbeConfig {
        ProbeConfig {
            seed,
            ..ProbeConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_segments < 1 || self.n_directions < 1 {
            return Err(Error::InvalidInput {
                reason: "probe sample counts must be at least 1",
            });
        }
        if self.t_max.is_nan() || self.t_max <= 1.0 {
            return Err(Error::InvalidInput {
                reason: "t_max must exceed 1",
            });
        }
        if self.h_fd.is_nan() || self.h_fd <= 0.0 || self.h_fd >= 1.0 {
            return Err(Error::InvalidInput {
                reason: "h_fd must lie in (0, 1)",
            });
        }
        Ok(())
    }
}

/// Outcome of chord sampling against the concavity inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityProbe {
    pub consistent: bool,
    /// Largest observed value of (1−t)f(x₀) + tf(x₁) − f((1−t)x₀ + tx₁).
    pub worst_violation: f64,
}

/// Outcome of asymptote-slope sampling against the boundedness claim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessProbe {
    pub claims_bounded: bool,
    /// Largest function value seen along the sampled rays.
    pub max_seen: f64,
    /// Largest asymptote slope over the sampled directions.
    pub max_slope: f64,
}

/// Result of the refining grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMax {
    pub argmax: Vector,
    pub value: f64,
}

fn std_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; u1 bounded away from 0 to keep ln finite.
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn normal_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    Vector::from_raw((0..dim).map(|_| std_normal(rng)).collect())
}

fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = normal_vector(rng, dim);
        if v.norm() > 1e-6 {
            return v.scale(1.0 / v.norm());
        }
    }
}

fn concavity_probe_impl(g: &CanonicalForm, cfg: &ProbeConfig, parallel: bool) -> ConcavityProbe {
    cfg.validate().expect("probe config");
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let spread = 1.0 + g.x_star().norm();
    let chords: Vec<(Vector, Vector)> = (0..cfg.n_segments)
        .map(|_| {
            let x0 = g
                .x_star()
                .add(&normal_vector(&mut rng, n).scale(3.0 * spread));
            let x1 = g
                .x_star()
                .add(&normal_vector(&mut rng, n).scale(3.0 * spread));
            (x0, x1)
        })
        .collect();

    let worst_of_chord = |i: usize| -> f64 {
        let (x0, x1) = &chords[i];
        let f0 = g.eval(x0).expect("dims fixed");
        let f1 = g.eval(x1).expect("dims fixed");
        let mut worst = f64::NEG_INFINITY;
        for &t in &[0.25, 0.5, 0.75] {
            let mid = x0.scale(1.0 - t).add(&x1.scale(t));
            let fmid = g.eval(&mid).expect("dims fixed");
            worst = worst.max((1.0 - t) * f0 + t * f1 - fmid);
        }
        worst
    };
    let per_chord = if parallel {
        exec::map_indexed(chords.len(), worst_of_chord)
    } else {
        exec::map_indexed_seq(chords.len(), worst_of_chord)
    };
    let worst_violation = per_chord.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));

    let tol = TolerancePolicy::default();
    let lambda_max = sym_eigen(g.m(), &tol)
        .expect("canonical form carries a symmetric matrix")
        .lambda_max();
    ConcavityProbe {
        consistent: worst_violation <= CONCAVITY_SLACK * magnitude_scale(g, lambda_max),
        worst_violation,
    }
}

/// Samples random chords and checks the concavity inequality at three
/// interior points of each.
pub fn concavity_probe(g: &CanonicalForm, cfg: &ProbeConfig) -> ConcavityProbe {
    concavity_probe_impl(g, cfg, true)
}

/// Always-sequential twin of [`concavity_probe`] for benchmarking.
pub fn concavity_probe_seq(g: &CanonicalForm, cfg: &ProbeConfig) -> ConcavityProbe {
    concavity_probe_impl(g, cfg, false)
}

/// Checks boundedness by sampling slant-asymptote slopes over random unit
/// directions plus the steepest direction M⁺c, and by chasing function
/// values far out along rays from x\*.
pub fn boundedness_probe(
    g: &CanonicalForm,
    cfg: &ProbeConfig,
    tol: &TolerancePolicy,
) -> BoundednessProbe {
    cfg.validate().expect("probe config");
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e3779b97f4a7c15);
    let mut directions: Vec<Vector> = (0..cfg.n_directions)
        .map(|_| random_unit(&mut rng, n))
        .collect();

    let eig = sym_eigen(g.m(), tol).expect("canonical form carries a symmetric matrix");
    let lambda_max = eig.lambda_max().max(0.0);
    let rank_cut = tol.tau_rank * lambda_max;
    let steepest = eig
        .apply_spectral(|l| if l > rank_cut { 1.0 / l } else { 0.0 })
        .matvec(g.c());
    if steepest.norm() > 1e-12 {
        directions.push(steepest.scale(1.0 / steepest.norm()));
    }

    let ts = [1.0, 10.0, cfg.t_max];
    let probe_dir = |i: usize| -> (f64, f64) {
        let v = &directions[i];
        let slope = g.asymptote(v, tol).expect("unit direction").slope;
        let mut local_max = f64::NEG_INFINITY;
        for &t in &ts {
            let x = g.x_star().add(&v.scale(t));
            local_max = local_max.max(g.eval(&x).expect("dims fixed"));
        }
        (slope, local_max)
    };
    let samples = exec::map_indexed(directions.len(), probe_dir);

    let max_slope = samples.iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.0));
    let max_seen = samples.iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.1));

    let in_col = {
        let projector = colspace_projector(g.m(), tol).expect("canonical PSD matrix");
        let outside = g.c().sub(&projector.matvec(g.c())).norm();
        outside <= tol.tau_eq * g.c().norm()
    };
    let scale = magnitude_scale(g, lambda_max);
    BoundednessProbe {
        claims_bounded: in_col && max_slope <= tol.tau_eq * scale,
        max_seen,
        max_slope,
    }
}

/// Central-difference gradient, erroring if any stencil point is a corner.
pub fn finite_diff_gradient(g: &CanonicalForm, x: &Vector, h: f64) -> Result<Vector> {
    if x.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: x.dim(),
        });
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInput {
            reason: "finite-difference step must be positive",
        });
    }
    let n = g.dim();
    let mut out = Vector::zeros(n);
    for i in 0..n {
        let mut plus = x.clone();
        plus[i] += h;
        let mut minus = x.clone();
        minus[i] -= h;
        if !g.smooth_at(&plus)? || !g.smooth_at(&minus)? {
            return Err(Error::NotDifferentiable);
        }
        out[i] = (g.eval(&plus)? - g.eval(&minus)?) / (2.0 * h);
    }
    Ok(out)
}

/// Central-difference Hessian on the same smoothness terms as the gradient.
pub fn finite_diff_hessian(g: &CanonicalForm, x: &Vector, h: f64) -> Result<Matrix> {
    if x.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: x.dim(),
        });
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInput {
            reason: "finite-difference step must be positive",
        });
    }
    let n = g.dim();
    let shifted = |di: i32, i: usize, dj: i32, j: usize| -> Result<f64> {
        let mut p = x.clone();
        p[i] += di as f64 * h;
        p[j] += dj as f64 * h;
        if !g.smooth_at(&p)? {
            return Err(Error::NotDifferentiable);
        }
        g.eval(&p)
    };
    let f0 = g.eval(x)?;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        let fp = shifted(1, i, 0, i)?;
        let fm = shifted(-1, i, 0, i)?;
        out[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..n {
            let v = (shifted(1, i, 1, j)? - shifted(1, i, -1, j)? - shifted(-1, i, 1, j)?
                + shifted(-1, i, -1, j)?)
                / (4.0 * h * h);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

fn grid_max_impl(
    g: &CanonicalForm,
    bounds: &[(f64, f64)],
    n_per_axis: usize,
    refine_rounds: usize,
    parallel: bool,
) -> Result<GridMax> {
    let n = g.dim();
    if bounds.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bounds.len(),
        });
    }
    if n > 3 {
        return Err(Error::DimensionTooLarge { dim: n, max: 3 });
    }
    if n_per_axis < 2 {
        return Err(Error::InvalidInput {
            reason: "grid needs at least 2 points per axis",
        });
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput {
                reason: "grid bounds must be finite and increasing",
            });
        }
    }

    let total = n_per_axis.pow(n as u32);
    let coords = |window: &[(f64, f64)], flat: usize| -> Vector {
        let mut x = Vector::zeros(n);
        let mut rest = flat;
        for k in 0..n {
            let idx = rest % n_per_axis;
            rest /= n_per_axis;
            let (lo, hi) = window[k];
            x[k] = lo + (hi - lo) * (idx as f64) / ((n_per_axis - 1) as f64);
        }
        x
    };

    let mut window: Vec<(f64, f64)> = bounds.to_vec();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_point = Vector::zeros(n);

    for _ in 0..=refine_rounds {
        let win = window.clone();
        let eval_at = |flat: usize| g.eval(&coords(&win, flat)).expect("dims fixed");
        let values = if parallel {
            exec::map_indexed(total, eval_at)
        } else {
            exec::map_indexed_seq(total, eval_at)
        };
        for (flat, &v) in values.iter().enumerate() {
            if v > best_value {
                best_value = v;
                best_point = coords(&win, flat);
            }
        }
        // Shrink by 4 around the incumbent, staying inside the original box.
        for k in 0..n {
            let width = (window[k].1 - window[k].0) / 4.0;
            let lo = (best_point[k] - width / 2.0)
                .max(bounds[k].0)
                .min(bounds[k].1 - width);
            window[k] = (lo, lo + width);
        }
    }

    Ok(GridMax {
        argmax: best_point,
        value: best_value,
    })
}

/// Coarse lattice search followed by rounds of shrinking the window by a
/// factor of 4 around the incumbent. Exhaustive per round, so limited to
/// n ≤ 3.
pub fn grid_max(
    g: &CanonicalForm,
    bounds: &[(f64, f64)],
    n_per_axis: usize,
    refine_rounds: usize,
) -> Result<GridMax> {
    grid_max_impl(g, bounds, n_per_axis, refine_rounds, true)
}

/// Always-sequential twin of [`grid_max`] for benchmarking.
pub fn grid_max_seq(
    g: &CanonicalForm,
    bounds: &[(f64, f64)],
    n_per_axis: usize,
    refine_rounds: usize,
) -> Result<GridMax> {
    grid_max_impl(g, bounds, n_per_axis, refine_rounds, false)
}

// ── seeded instance generators ──────────────────────────────────────

fn rebuild_from(eig: &crate::linalg::SymEigen, keep_from: usize) -> Matrix {
    let n = eig.eigenvalues.len();
    let mut m = Matrix::zeros(n, n);
    for k in keep_from..n {
        let v = eig.eigenvector(k);
        let lam = eig.eigenvalues[k];
        for i in 0..n {
            for j in i..n {
                let add = lam * v[i] * v[j];
                m[(i, j)] += add;
                if j != i {
                    m[(j, i)] += add;
                }
            }
        }
    }
    m.symmetrized()
}

fn nonzero_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = normal_vector(rng, dim);
        if v.norm() > 0.1 {
            return v;
        }
    }
}

/// Random canonical forms cycling through every classification branch:
/// positive definite and singular M, q below/at/above 1, zero and positive
/// δ, plus the degenerate linear cases. Deterministic in the seed.
pub fn random_instances(seed: u64, count: usize) -> Vec<CanonicalForm> {
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_instance(&mut rng, i, &tol))
        .collect()
}

fn random_instance<R: Rng>(rng: &mut R, index: usize, tol: &TolerancePolicy) -> CanonicalForm {
    // bucket layout: (matrix kind, q target, delta sign)
    let bucket = index % 16;
    let singular = matches!(bucket, 6 | 7 | 8 | 9 | 10 | 11 | 14 | 15);
    let linear = matches!(bucket, 12 | 13);
    let n = if singular {
        rng.gen_range(2..=3)
    } else {
        rng.gen_range(1..=3usize)
    };
    let delta_positive = bucket % 2 == 1;
    let delta = if delta_positive {
        0.1 + std_normal(rng).abs()
    } else {
        0.0
    };
    let x_star = normal_vector(rng, n);
    let d = std_normal(rng);

    if linear {
        let c = if bucket == 12 {
            Vector::zeros(n)
        } else {
            nonzero_vector(rng, n)
        };
        return CanonicalForm::new(c, d, delta, Matrix::zeros(n, n), x_star, tol)
            .expect("generated form is valid");
    }

    let mut r = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            r[(i, j)] = std_normal(rng);
        }
    }
    let gram = r.gram();
    let (m, null_dir) = if singular {
        let eig = sym_eigen(&gram, tol).expect("gram is symmetric");
        let zeroed = rng.gen_range(1..n);
        (rebuild_from(&eig, zeroed), Some(eig.eigenvector(0)))
    } else {
        (gram.add(&Matrix::identity(n).scale(0.1)), None)
    };

    let eig = sym_eigen(&m, tol).expect("constructed symmetric matrix");
    let rank_cut = tol.tau_rank * eig.lambda_max().max(0.0);
    let m_pinv = eig.apply_spectral(|l| if l > rank_cut { 1.0 / l } else { 0.0 });

    let not_in_col = matches!(bucket, 6 | 7);
    let c = if not_in_col {
        let in_col = m.matvec(&normal_vector(rng, n));
        let nu = 0.2 + std_normal(rng).abs();
        in_col.add(&null_dir.expect("singular bucket").scale(nu))
    } else {
        // Rescale so q = cᵀM⁺c lands in the bucket's band.
        let c0 = if singular {
            let mut v = m.matvec(&nonzero_vector(rng, n));
            while v.norm() < 1e-6 {
                v = m.matvec(&nonzero_vector(rng, n));
            }
            v
        } else {
            nonzero_vector(rng, n)
        };
        let q0 = c0.dot(&m_pinv.matvec(&c0));
        let target = match bucket {
            0 | 1 | 8 | 9 => rng.gen_range(0.15..0.85),
            2 | 3 | 10 | 15 => 1.0,
            _ => rng.gen_range(1.2..2.5),
        };
        c0.scale((target / q0).sqrt())
    };

    CanonicalForm::new(c, d, delta, m, x_star, tol).expect("generated form is valid")
}

/// Random general-form functions with a mix of full-rank, rank-deficient,
/// and residual-free (b ∈ col(A)) parameter sets. Deterministic in the seed.
pub fn random_general_forms(seed: u64, count: usize) -> Vec<GeneralForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1e995);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=3usize);
            let m = rng.gen_range(1..=4usize);
            let mut a = Matrix::zeros(m, n);
            for r in 0..m {
                for c in 0..n {
                    a[(r, c)] = std_normal(&mut rng);
                }
            }
            if i % 4 == 3 && n > 1 {
                // Make a column redundant so rank(A) < n.
                for r in 0..m {
                    a[(r, n - 1)] = a[(r, 0)];
                }
            }
            let b = if i % 5 == 4 {
                a.matvec(&normal_vector(&mut rng, n))
            } else {
                normal_vector(&mut rng, m)
            };
            let c = normal_vector(&mut rng, n);
            GeneralForm::new(c, std_normal(&mut rng), a, b).expect("generated form is valid")
        })
        .collect()
}

/// Random orthogonal matrix from Gram-Schmidt on a normal matrix.
pub fn random_orthogonal(seed: u64, m: usize) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa076_1d64_78bd_642f);
    loop {
        let mut cols: Vec<Vector> = Vec::with_capacity(m);
        'outer: for _ in 0..m {
            let mut v = normal_vector(&mut rng, m);
            for u in &cols {
                v = v.sub(&u.scale(u.dot(&v)));
            }
            if v.norm() < 1e-8 {
                break 'outer;
            }
            cols.push(v.scale(1.0 / v.norm()));
        }
        if cols.len() == m {
            let mut q = Matrix::zeros(m, m);
            for (j, col) in cols.iter().enumerate() {
                for i in 0..m {
                    q[(i, j)] = col[i];
                }
            }
            return q;
        }
    }
}
