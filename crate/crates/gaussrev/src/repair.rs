//! Minimal diffusion repair of an inadmissible generator CP matrix.
//!
//! The problem: given Hermitian `M` and a positive-definite weight `W`,
//! minimize `tr(DeltaD W)` over real symmetric `DeltaD >= 0` subject to
//! `M + DeltaD >= 0`. The feasible set is nonempty for every `M`
//! (`DeltaD = c 1` with large `c` always works), so the program never fails.
//!
//! The solver is a projected primal barrier method: minimize
//! `tr(DeltaD W) - mu (ln det DeltaD + ln det(M + DeltaD))` by damped Newton
//! steps over the symmetric-matrix coordinates, shrinking `mu` until the
//! barrier duality bound `2 dim mu` drops below the gap target. Problems
//! here are 2x2 or 4x4, which keeps the bespoke solver small and exact
//! enough; the brute-force grid oracle below is the independent check.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{PSD_TOL, SYMMETRY_TOL};
use crate::generator::CpMatrix;
use crate::linalg::{
    hermitian_eigenvalues, i_sigma, max_asymmetry, symmetrize, to_complex, trace_product, CMatrix,
    RMatrix,
};

/// Maximum admitted condition number of the weight matrix.
pub const WEIGHT_COND_MAX: f64 = 1e8;

/// A repair instance: the CP matrix to fix and the Fisher weight.
#[derive(Debug, Clone)]
pub struct RepairProblem {
    m: CpMatrix,
    w: RMatrix,
}

impl RepairProblem {
    pub fn new(m: CpMatrix, w: RMatrix) -> Result<Self> {
        if w.shape() != (m.dim(), m.dim()) {
            return Err(Error::InvalidParam(format!(
                "weight must be {0}x{0} to match the CP matrix",
                m.dim()
            )));
        }
        let asym = max_asymmetry(&w);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                asymmetry: asym,
                tol: SYMMETRY_TOL,
            });
        }
        let w = symmetrize(&w);
        let evals = hermitian_eigenvalues(&to_complex(&w));
        let min_eig = evals[0];
        if min_eig <= 1e-10 {
            return Err(Error::WeightNotPositiveDefinite { min_eig });
        }
        let cond = evals[evals.len() - 1] / min_eig;
        if cond > WEIGHT_COND_MAX {
            return Err(Error::WeightIllConditioned {
                cond,
                max: WEIGHT_COND_MAX,
            });
        }
        Ok(Self { m, w })
    }

    pub fn cp_matrix(&self) -> &CpMatrix {
        &self.m
    }

    pub fn weight(&self) -> &RMatrix {
        &self.w
    }
}

/// Outcome of a repair: the added diffusion, its weighted cost, the
/// feasibility margin `lambda_min(M + DeltaD)`, and an optimality gap bound.
#[derive(Debug, Clone)]
pub struct RepairResult {
    pub delta_d: RMatrix,
    pub cost: f64,
    pub feasibility_margin: f64,
    pub optimality_gap: f64,
}

impl RepairResult {
    pub fn repair_trace(&self) -> f64 {
        self.delta_d.trace()
    }
}

fn zero_repair(m: &CpMatrix) -> RepairResult {
    let dim = m.dim();
    RepairResult {
        delta_d: RMatrix::zeros(dim, dim),
        cost: 0.0,
        feasibility_margin: m.min_eigenvalue(),
        optimality_gap: 0.0,
    }
}

/// Basis of the real symmetric matrices: unit diagonals first, then
/// `e_i e_j^T + e_j e_i^T` for i < j.
fn sym_basis(dim: usize) -> Vec<RMatrix> {
    let mut basis = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in 0..dim {
        let mut e = RMatrix::zeros(dim, dim);
        e[(i, i)] = 1.0;
        basis.push(e);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut e = RMatrix::zeros(dim, dim);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            basis.push(e);
        }
    }
    basis
}

fn min_eig_real_sym(d: &RMatrix) -> f64 {
    hermitian_eigenvalues(&to_complex(d))[0]
}

fn strictly_feasible(m: &CMatrix, d: &RMatrix) -> bool {
    if min_eig_real_sym(d) <= 0.0 {
        return false;
    }
    let shifted = m + to_complex(d);
    hermitian_eigenvalues(&shifted)[0] > 0.0
}

fn barrier_value(m: &CMatrix, w: &RMatrix, d: &RMatrix, mu: f64) -> f64 {
    let cost = trace_product(d, w);
    let mut logdet = 0.0;
    for lam in hermitian_eigenvalues(&to_complex(d)) {
        logdet += lam.ln();
    }
    for lam in hermitian_eigenvalues(&(m + to_complex(d))) {
        logdet += lam.ln();
    }
    cost - mu * logdet
}

/// Minimal Fisher-weighted repair. Returns exactly zero added diffusion for
/// admissible `M`; otherwise runs the barrier solver down to an optimality
/// gap below `1e-9 (1 + cost)`.
pub fn minimal_repair(p: &RepairProblem) -> Result<RepairResult> {
    if p.m.min_eigenvalue() >= -PSD_TOL {
        return Ok(zero_repair(&p.m));
    }
    let dim = p.m.dim();
    let basis = sym_basis(dim);
    let nvars = basis.len();
    let m = p.m.matrix();
    let w = &p.w;

    let lift = -p.m.min_eigenvalue();
    let mut d = RMatrix::identity(dim, dim) * (lift + 1.0);
    let mut mu = trace_product(&d, w).max(1.0) / (2.0 * dim as f64);
    let mut gap = f64::INFINITY;

    'outer: for _ in 0..200 {
        // Damped Newton centering at the current barrier weight.
        for _ in 0..80 {
            let d_inv = match d.clone().try_inverse() {
                Some(inv) => inv,
                None => break,
            };
            let shifted = m + to_complex(&d);
            let s_inv = match shifted.try_inverse() {
                Some(inv) => inv,
                None => break,
            };
            // Gradient and Hessian over the symmetric coordinates.
            let prods_r: Vec<RMatrix> = basis.iter().map(|e| &d_inv * e).collect();
            let prods_c: Vec<CMatrix> = basis.iter().map(|e| &s_inv * to_complex(e)).collect();
            let mut grad = DVector::zeros(nvars);
            for a in 0..nvars {
                grad[a] = trace_product(&basis[a], w)
                    - mu * prods_r[a].trace()
                    - mu * prods_c[a].trace().re;
            }
            let mut hess = RMatrix::zeros(nvars, nvars);
            for a in 0..nvars {
                for b in a..nvars {
                    let real_part = (&prods_r[a] * &prods_r[b]).trace();
                    let cplx_part = (&prods_c[a] * &prods_c[b]).trace().re;
                    let val = mu * (real_part + cplx_part);
                    hess[(a, b)] = val;
                    hess[(b, a)] = val;
                }
            }
            let ridge = 1e-13 * hess.diagonal().amax().max(1.0);
            for i in 0..nvars {
                hess[(i, i)] += ridge;
            }
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match hess.lu().solve(&(-&grad)) {
                    Some(s) => s,
                    None => break,
                },
            };
            let decrement_sq = -grad.dot(&step);
            if !decrement_sq.is_finite() {
                break;
            }
            let mut delta = RMatrix::zeros(dim, dim);
            for a in 0..nvars {
                delta += &basis[a] * step[a];
            }
            // Backtracking line search keeping both cones strictly feasible.
            let f0 = barrier_value(m, w, &d, mu);
            let slope = grad.dot(&step);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand = &d + &delta * t;
                if strictly_feasible(m, &cand)
                    && barrier_value(m, w, &cand, mu) <= f0 + 0.25 * t * slope
                {
                    d = cand;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted || decrement_sq.abs() < 1e-18 * (1.0 + mu) {
                break;
            }
        }
        let cost = trace_product(&d, w);
        gap = 2.0 * dim as f64 * mu;
        if gap <= 1e-9 * (1.0 + cost.abs()) {
            break 'outer;
        }
        mu *= 0.2;
    }

    let d = symmetrize(&d);
    let cost = trace_product(&d, w);
    let feasibility_margin = hermitian_eigenvalues(&(m + to_complex(&d)))[0];
    Ok(RepairResult {
        delta_d: d,
        cost,
        feasibility_margin,
        optimality_gap: gap,
    })
}

/// Closed-form repair for the phase-covariant one-mode case
/// `M = a 1 + b (i sigma)` under an isotropic weight `w 1`:
/// the optimal repair is `max(0, |b| - a) 1`.
///
/// Optimality: adding `DeltaD = diag(d1, d2)` (off-diagonals only hurt the
/// constraint) makes `M + DeltaD` PSD iff `(a+d1)(a+d2) >= b^2` with
/// nonnegative diagonals, and by AM-GM the trace `d1 + d2` is minimized at
/// `d1 = d2`.
///
/// Rejects inputs whose projection residual onto span{1, i sigma} exceeds
/// the gate; callers fall back to [`minimal_repair`].
pub fn isotropic_repair(m: &CpMatrix, w_scale: f64) -> Result<RepairResult> {
    if m.dim() != 2 {
        return Err(Error::Unsupported(
            "the isotropic closed form is defined for one mode".into(),
        ));
    }
    if !(w_scale > 0.0) {
        return Err(Error::WeightNotPositiveDefinite { min_eig: w_scale });
    }
    let a = 0.5 * m.matrix().trace().re;
    let b = 0.5 * (i_sigma(1) * m.matrix()).trace().re;
    let projected = to_complex(&RMatrix::identity(2, 2)) * Complex64::new(a, 0.0)
        + i_sigma(1) * Complex64::new(b, 0.0);
    let residual = (m.matrix() - projected).norm();
    if residual > 1e-10 * m.matrix().norm().max(1.0) {
        return Err(Error::NotPhaseCovariant { residual });
    }
    let c = (b.abs() - a).max(0.0);
    Ok(RepairResult {
        delta_d: RMatrix::identity(2, 2) * c,
        cost: 2.0 * c * w_scale,
        feasibility_margin: (a - b.abs()).max(0.0),
        optimality_gap: 0.0,
    })
}

/// Exhaustive-grid oracle for one-mode repairs, used to validate
/// [`minimal_repair`]. Scans `DeltaD = [[d1, d3], [d3, d2]]` on a uniform
/// grid, then refines the best point by coordinate pattern search.
/// Feasibility is checked with inline 2x2 closed forms, independent of the
/// solver path. The reported gap is the scan resolution.
pub fn brute_force_repair(p: &RepairProblem, grid_resolution: f64) -> Result<RepairResult> {
    if p.m.dim() != 2 {
        return Err(Error::Unsupported(
            "the brute-force oracle is one-mode only".into(),
        ));
    }
    if !(grid_resolution > 0.0) {
        return Err(Error::InvalidParam(
            "grid resolution must be positive".into(),
        ));
    }
    if p.m.min_eigenvalue() >= -PSD_TOL {
        return Ok(zero_repair(&p.m));
    }
    let m = p.m.matrix();
    let (m00, m11) = (m[(0, 0)].re, m[(1, 1)].re);
    let m01 = m[(0, 1)];
    let w = &p.w;
    let cost_of = |d1: f64, d2: f64, d3: f64| {
        d1 * w[(0, 0)] + d2 * w[(1, 1)] + 2.0 * d3 * w[(0, 1)]
    };
    let feasible = |d1: f64, d2: f64, d3: f64| {
        if d1 < 0.0 || d2 < 0.0 || d3 * d3 > d1 * d2 + 1e-15 {
            return false;
        }
        let h00 = m00 + d1;
        let h11 = m11 + d2;
        let off = Complex64::new(m01.re + d3, m01.im).norm();
        let min_eig = 0.5 * (h00 + h11) - (0.5 * (h00 - h11)).hypot(off);
        min_eig >= -1e-12
    };

    // Cost cap from the always-feasible isotropic lift bounds every entry.
    let lift = -p.m.min_eigenvalue();
    let w_min = hermitian_eigenvalues(&to_complex(w))[0];
    let cap = lift * w.trace() / w_min + 2.0 * grid_resolution;
    let steps = (cap / grid_resolution).ceil() as usize;

    let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
    for i in 0..=steps {
        let d1 = i as f64 * grid_resolution;
        for j in 0..=steps {
            let d2 = j as f64 * grid_resolution;
            let d3_max = (d1 * d2).sqrt();
            let k_max = (d3_max / grid_resolution).floor() as i64;
            for k in -k_max..=k_max {
                let d3 = k as f64 * grid_resolution;
                let cost = cost_of(d1, d2, d3);
                if cost < best.0 && feasible(d1, d2, d3) {
                    best = (cost, d1, d2, d3);
                }
            }
        }
    }

    // Pattern-search refinement around the best grid point.
    let (mut cost, mut d1, mut d2, mut d3) = best;
    let mut step = grid_resolution;
    for _ in 0..48 {
        let mut improved = false;
        for (e1, e2, e3) in [
            (step, 0.0, 0.0),
            (-step, 0.0, 0.0),
            (0.0, step, 0.0),
            (0.0, -step, 0.0),
            (0.0, 0.0, step),
            (0.0, 0.0, -step),
        ] {
            let (c1, c2, c3) = (d1 + e1, d2 + e2, d3 + e3);
            let c = cost_of(c1, c2, c3);
            if c < cost - 1e-15 && feasible(c1, c2, c3) {
                (cost, d1, d2, d3) = (c, c1, c2, c3);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let delta_d = nalgebra::dmatrix![d1, d3; d3, d2];
    let feasibility_margin = hermitian_eigenvalues(&(m + to_complex(&delta_d)))[0];
    Ok(RepairResult {
        delta_d,
        cost,
        feasibility_margin,
        optimality_gap: grid_resolution,
    })
}
