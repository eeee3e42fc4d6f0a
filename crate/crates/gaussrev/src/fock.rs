//! Truncated Fock-space oracle for one-mode Gaussian states.
//!
//! Everything here is brute force on purpose: states are dense matrices on
//! a truncated number basis, fidelity goes through eigendecompositions, and
//! the monotone metrics evaluate the Petz sum directly in the eigenbasis.
//! The module exists to validate the closed forms in `gaussian` and
//! `fisher`; it is consumed by tests and is not wired into the CLI.
//!
//! The only approximations are the cutoff itself (tracked per state as a
//! truncation deficit) and the rank policy in the Petz sum: eigenvalues
//! below 1e-14 are dropped and tangents are projected onto the retained
//! support.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fisher::lambda_ratio;
use crate::gaussian::SqueezedThermalParams;
use crate::linalg::{hermitian_residual, CMatrix, RMatrix};

/// Deficit bound required of oracle inputs.
pub const DEFICIT_BOUND: f64 = 1e-8;
const RANK_FLOOR: f64 = 1e-14;
const PAD: usize = 16;

/// Truncated one-mode density matrix with its truncation deficit.
#[derive(Debug, Clone)]
pub struct FockState {
    cutoff: usize,
    matrix: CMatrix,
    deficit: f64,
}

/// Annihilation operator on a `dim`-dimensional truncated basis.
pub fn annihilation(dim: usize) -> RMatrix {
    let mut a = RMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = (k as f64).sqrt();
    }
    a
}

/// Position quadrature `Q = (a + a^dag)/sqrt(2)`.
pub fn quadrature_q(dim: usize) -> CMatrix {
    let a = annihilation(dim);
    let q = (&a + a.transpose()) / 2.0f64.sqrt();
    q.map(|x| Complex64::new(x, 0.0))
}

/// Momentum quadrature `P = i (a^dag - a)/sqrt(2)`.
pub fn quadrature_p(dim: usize) -> CMatrix {
    let a = annihilation(dim);
    let p = (a.transpose() - &a) / 2.0f64.sqrt();
    p.map(|x| Complex64::new(0.0, x))
}

/// Cutoff suggestion for a squeezed thermal state: levels occupied by the
/// largest-variance direction decay geometrically with ratio
/// `(nu e^{2r} - 1) / (nu e^{2r} + 1)`; aim two decades below the deficit
/// bound and pad for squeeze spill-over.
pub fn suggested_cutoff(p: &SqueezedThermalParams, deficit_target: f64) -> usize {
    let stretched = p.nu() * (2.0 * p.r()).exp();
    let lam_eff = (stretched - 1.0) / (stretched + 1.0);
    if lam_eff < 1e-6 {
        return 16;
    }
    let needed = (deficit_target * 1e-2).ln() / lam_eff.ln();
    (needed.ceil() as usize + 24).max(16)
}

/// Orthogonal matrix exponential by scaling and squaring with a Taylor tail.
fn matrix_exp(g: &RMatrix) -> RMatrix {
    let dim = g.nrows();
    let norm = g.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = g / 2.0f64.powi(squarings as i32);
    let mut term = RMatrix::identity(dim, dim);
    let mut sum = RMatrix::identity(dim, dim);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.norm() < 1e-17 {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}

impl FockState {
    /// Squeezed thermal state: geometric thermal spectrum with ratio
    /// `lambda = (nu-1)/(nu+1)`, conjugated by the squeeze that stretches Q
    /// so the second moments reproduce `diag(nu e^{2r}, nu e^{-2r})`.
    ///
    /// The squeeze exponential is evaluated on a padded basis (+16 levels)
    /// and truncated back, which keeps edge effects out of the retained
    /// block. Fails if the resulting truncation deficit exceeds
    /// [`DEFICIT_BOUND`].
    pub fn squeezed_thermal(p: &SqueezedThermalParams, cutoff: usize) -> Result<Self> {
        if cutoff < 8 {
            return Err(Error::InvalidParam(format!(
                "Fock cutoff must be at least 8, got {cutoff}"
            )));
        }
        let lam = lambda_ratio(p.nu())?;
        let padded = cutoff + PAD;
        let mut rho = RMatrix::zeros(padded, padded);
        let mut weight = 1.0 - lam;
        for k in 0..padded {
            rho[(k, k)] = weight;
            weight *= lam;
        }
        if p.r() > 0.0 {
            // G = (r/2)(a^dag^2 - a^2); U = exp(G) sends <Q^2> to e^{2r} <Q^2>.
            let a = annihilation(padded);
            let a2 = &a * &a;
            let g = (a2.transpose() - a2) * (0.5 * p.r());
            let u = matrix_exp(&g);
            rho = &u * rho * u.transpose();
        }
        let truncated = rho.view((0, 0), (cutoff, cutoff)).into_owned();
        let deficit = 1.0 - truncated.trace();
        if deficit > DEFICIT_BOUND {
            return Err(Error::Truncation {
                cutoff,
                deficit,
                suggested: suggested_cutoff(p, DEFICIT_BOUND),
            });
        }
        Ok(Self {
            cutoff,
            matrix: truncated.map(|x| Complex64::new(x, 0.0)),
            deficit: deficit.max(0.0),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.deficit
    }

    /// Covariance reconstructed from second moments,
    /// `Gamma_ij = <R_i R_j + R_j R_i>` with `R = (Q, P)`.
    pub fn covariance_from_moments(&self) -> RMatrix {
        let q = quadrature_q(self.cutoff);
        let p = quadrature_p(self.cutoff);
        let ops = [q, p];
        let mut gamma = RMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let anti = &ops[i] * &ops[j] + &ops[j] * &ops[i];
                gamma[(i, j)] = (&self.matrix * anti).trace().re;
            }
        }
        gamma
    }
}

/// Hermitian eigendecomposition with magnitude deflation. Thermal tails
/// span hundreds of orders of magnitude, which the library QL iteration
/// cannot digest in one piece; rows whose norm is below 1e-30 of the
/// largest entry are split off with eigenvalue exactly zero (a perturbation
/// of at most ~n * 1e-30 relative, far below every tolerance used here) and
/// the dense solver runs on the active block only.
fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    let scale = h.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return (vec![0.0; n], CMatrix::identity(n, n));
    }
    let floor = 1e-30 * scale;
    let active: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|j| h[(i, j)].norm() > floor))
        .collect();
    let k = active.len();
    if k == 0 {
        return (vec![0.0; n], CMatrix::identity(n, n));
    }
    let block = CMatrix::from_fn(k, k, |a, b| h[(active[a], active[b])]);
    let se = nalgebra::SymmetricEigen::new(block.clone());
    let (block_vals, block_vecs) = if se.eigenvalues.iter().any(|v| v.is_nan()) {
        crate::linalg::hermitian_eigen_jacobi(&block)
    } else {
        (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
    };
    // Scatter the block spectrum back; inactive indices keep eigenvalue 0
    // with unit basis vectors.
    let mut vals = vec![0.0; n];
    let mut vecs = CMatrix::zeros(n, n);
    let mut is_active = vec![false; n];
    for (b, &i) in active.iter().enumerate() {
        is_active[i] = true;
        vals[i] = block_vals[b];
        for (a, &row) in active.iter().enumerate() {
            vecs[(row, i)] = block_vecs[(a, b)];
        }
    }
    for i in 0..n {
        if !is_active[i] {
            vecs[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    (vals, vecs)
}

/// Uhlmann fidelity `[tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2` (squared
/// convention, matching `gaussian::gaussian_fidelity`).
pub fn fidelity(rho1: &FockState, rho2: &FockState) -> Result<f64> {
    if rho1.cutoff != rho2.cutoff {
        return Err(Error::InvalidParam(format!(
            "fidelity needs matching cutoffs, got {} and {}",
            rho1.cutoff, rho2.cutoff
        )));
    }
    for s in [rho1, rho2] {
        if s.deficit > DEFICIT_BOUND {
            return Err(Error::Truncation {
                cutoff: s.cutoff,
                deficit: s.deficit,
                suggested: 2 * s.cutoff,
            });
        }
    }
    let (vals, vecs) = eigh(&rho1.matrix);
    let dim = rho1.cutoff;
    let sqrt_diag = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(vals[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::default()
        }
    });
    let root = &vecs * sqrt_diag * vecs.adjoint();
    let inner = &root * &rho2.matrix * &root;
    let (w, _) = eigh(&inner);
    // Eigensolver noise near zero turns into O(sqrt(noise)) after the square
    // root; floor relative to the top of the spectrum.
    let floor = 1e-20 * w.iter().fold(0.0f64, |a, &x| a.max(x));
    let mut tr = 0.0;
    for lam in w {
        if lam > floor {
            tr += lam.sqrt();
        }
    }
    Ok(tr * tr)
}

/// Which quadrature the state is displaced along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Q,
    P,
}

/// Derivative of the state with respect to a displacement of the chosen
/// quadrature mean: `-i[P, rho]` for a Q shift, `i[Q, rho]` for a P shift.
pub fn displacement_tangent(rho: &FockState, along: Quadrature) -> CMatrix {
    let dim = rho.cutoff;
    let i = Complex64::new(0.0, 1.0);
    match along {
        Quadrature::Q => {
            let p = quadrature_p(dim);
            (&p * &rho.matrix - &rho.matrix * &p) * (-i)
        }
        Quadrature::P => {
            let q = quadrature_q(dim);
            (&q * &rho.matrix - &rho.matrix * &q) * i
        }
    }
}

/// Petz monotone metric selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Kubo-Mori, `f(t) = (t - 1)/ln t`.
    Bkm,
    /// Bures, one quarter of the SLD metric with `f(t) = (1 + t)/2`.
    Bures,
}

/// Evaluates `g_f(X, X) = sum_ij |X_ij|^2 / (p_j f(p_i / p_j))` in the
/// eigenbasis of `rho`, with eigenvalues below the rank floor dropped and
/// the tangent projected onto the retained support.
pub fn monotone_metric(rho: &FockState, tangent: &CMatrix, kind: MetricKind) -> Result<f64> {
    if tangent.shape() != rho.matrix.shape() {
        return Err(Error::InvalidParam(
            "tangent dimension does not match state cutoff".into(),
        ));
    }
    let scale = tangent.norm().max(1.0);
    let residual = hermitian_residual(tangent);
    if residual > 1e-10 * scale {
        return Err(Error::NotHermitian { residual });
    }
    if tangent.trace().norm() > 1e-10 * scale {
        return Err(Error::InvalidParam(format!(
            "tangent must be traceless, got trace {:.3e}",
            tangent.trace().norm()
        )));
    }
    let (vals, vecs) = eigh(&rho.matrix);
    let rotated = vecs.adjoint() * tangent * &vecs;
    let retained: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > RANK_FLOOR).collect();
    let mut g = 0.0;
    for &i in &retained {
        for &j in &retained {
            let x2 = rotated[(i, j)].norm_sqr();
            if x2 == 0.0 {
                continue;
            }
            let (pi, pj) = (vals[i], vals[j]);
            let c = match kind {
                MetricKind::Bkm => {
                    if (pi - pj).abs() <= 1e-12 * pi.max(pj) {
                        2.0 / (pi + pj)
                    } else {
                        (pi.ln() - pj.ln()) / (pi - pj)
                    }
                }
                MetricKind::Bures => 0.5 / (pi + pj),
            };
            g += x2 * c;
        }
    }
    Ok(g)
}
