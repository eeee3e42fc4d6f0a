//! Covariance-matrix algebra in HHW conventions.
//!
//! Conventions used throughout the crate:
//! - canonical commutator `[Q, P] = i`, symplectic form block-diagonal with
//!   blocks `[[0, 1], [-1, 0]]`;
//! - covariance matrices are dimensionless and normalized so the vacuum is
//!   the identity; a symmetric `Gamma` is physical iff `Gamma + i*sigma >= 0`,
//!   equivalently all symplectic eigenvalues are `>= 1`;
//! - fidelity uses the squared (Uhlmann) convention `F = cos^2(A)` with `A`
//!   the Bures angle, so `F(rho, rho) = 1` and for pure states `F` is the
//!   squared overlap. The Fock-space oracle uses the same convention.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eigenvalues, i_sigma, max_asymmetry, symmetric_sqrt, symmetrize, to_complex,
    RMatrix,
};

/// Input gate on symmetry of covariance/diffusion matrices.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Positive-semidefiniteness margin tolerance for physicality checks.
pub const PSD_TOL: f64 = 1e-10;

/// The symplectic form for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "mode count must be positive");
        Self { n }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> RMatrix {
        linalg::symplectic_matrix(self.n)
    }
}

/// Real symmetric covariance matrix of an `n`-mode Gaussian state
/// (HHW units: vacuum = identity).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    m: RMatrix,
}

impl CovarianceMatrix {
    /// Accepts a square matrix of even dimension; asymmetry beyond
    /// [`SYMMETRY_TOL`] is rejected, anything below is symmetrized away.
    pub fn new(m: RMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 || m.nrows() % 2 != 0 {
            return Err(Error::InvalidParam(format!(
                "covariance matrix must be square with even dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = max_asymmetry(&m);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                asymmetry: asym,
                tol: SYMMETRY_TOL,
            });
        }
        let n = m.nrows() / 2;
        Ok(Self {
            n,
            m: symmetrize(&m),
        })
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            n,
            m: RMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.m
    }

    /// Physicality test `Gamma + i*sigma >= 0`. Returns the truth value at
    /// tolerance [`PSD_TOL`] together with the margin (the minimum eigenvalue
    /// of the Hermitian matrix `Gamma + i*sigma`).
    pub fn physicality(&self) -> (bool, f64) {
        let h = to_complex(&self.m) + i_sigma(self.n);
        let margin = linalg::min_eigenvalue_hermitian(&h);
        (margin >= -PSD_TOL, margin)
    }

    pub fn is_physical(&self) -> bool {
        self.physicality().0
    }

    /// Symplectic eigenvalues, descending. These are the moduli of the
    /// eigenvalues of `i*sigma*Gamma`, computed through the Hermitian
    /// similarity `Gamma^{1/2} (i*sigma) Gamma^{1/2}` and deduplicated from
    /// the `+/-` pairs down to `n` entries.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let dim = 2 * self.n;
        let (evals, _) = linalg::symmetric_eigen(&self.m);
        let scale = evals.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        if evals[0] <= 1e-12 * scale {
            return Err(Error::Degenerate(format!(
                "covariance matrix is singular (min eigenvalue {:.3e})",
                evals[0]
            )));
        }
        let root = symmetric_sqrt(&self.m)?;
        let h = to_complex(&root) * i_sigma(self.n) * to_complex(&root);
        let mut moduli: Vec<f64> = hermitian_eigenvalues(&h).iter().map(|x| x.abs()).collect();
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok((0..dim).step_by(2).map(|k| moduli[k]).collect())
    }

    /// Williamson data `(nu, r)` of a one-mode covariance:
    /// `nu = sqrt(det)`, `cosh(2r) = tr / (2 nu)`.
    pub fn williamson_one_mode(&self) -> Result<(f64, f64)> {
        if self.n != 1 {
            return Err(Error::Unsupported(
                "Williamson (nu, r) extraction is one-mode only".into(),
            ));
        }
        let det = self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)];
        if det <= 0.0 {
            return Err(Error::Degenerate(format!(
                "one-mode covariance has non-positive determinant {det:.3e}"
            )));
        }
        let nu = det.sqrt();
        let cosh2r = (self.m.trace() / (2.0 * nu)).max(1.0);
        let r = 0.5 * cosh2r.acosh();
        Ok((nu, r))
    }
}

/// Parameters of a squeezed thermal one-mode state with covariance
/// `diag(nu e^{2r}, nu e^{-2r})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedThermalParams {
    nu: f64,
    r: f64,
}

impl SqueezedThermalParams {
    pub fn new(nu: f64, r: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 1.0 {
            return Err(Error::InvalidParam(format!(
                "symplectic eigenvalue nu must be >= 1, got {nu}"
            )));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParam(format!(
                "squeezing r must be >= 0, got {r}"
            )));
        }
        Ok(Self { nu, r })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Covariance `diag(nu e^{2r}, nu e^{-2r})` of a squeezed thermal state.
pub fn squeezed_thermal_cov(p: &SqueezedThermalParams) -> CovarianceMatrix {
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        p.nu * (2.0 * p.r).exp(),
        p.nu * (-2.0 * p.r).exp(),
    ]));
    CovarianceMatrix::new(m).expect("squeezed thermal covariance is symmetric by construction")
}

/// Uhlmann fidelity (squared convention) together with the Bures angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityValue {
    f: f64,
    angle: f64,
}

impl FidelityValue {
    pub fn from_fidelity(f: f64) -> Result<Self> {
        if !f.is_finite() || f < -1e-12 || f > 1.0 + 1e-12 {
            return Err(Error::FidelityOutOfRange(f));
        }
        let f = f.clamp(0.0, 1.0);
        Ok(Self {
            f,
            angle: f.sqrt().acos(),
        })
    }

    pub fn fidelity(&self) -> f64 {
        self.f
    }

    pub fn bures_angle(&self) -> f64 {
        self.angle
    }
}

/// Bures angle `arccos(sqrt(f))` of a fidelity in [0, 1].
pub fn bures_angle(f: f64) -> Result<f64> {
    Ok(FidelityValue::from_fidelity(f)?.bures_angle())
}

/// Uhlmann fidelity (squared convention) between two zero-mean one-mode
/// Gaussian states with the given covariances.
///
/// Closed form in vacuum-=-identity units: with `Delta = det(G1 + G2)` and
/// `Lambda = (det G1 - 1)(det G2 - 1)`,
/// `F = 2 (sqrt(Delta + Lambda) + sqrt(Lambda)) / Delta`.
pub fn gaussian_fidelity(g1: &CovarianceMatrix, g2: &CovarianceMatrix) -> Result<FidelityValue> {
    if g1.modes() != 1 || g2.modes() != 1 {
        return Err(Error::Unsupported(
            "gaussian_fidelity is implemented for one-mode states".into(),
        ));
    }
    for g in [g1, g2] {
        let (ok, margin) = g.physicality();
        if !ok {
            return Err(Error::Unphysical { margin });
        }
    }
    let det = |g: &CovarianceMatrix| {
        let m = g.matrix();
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    };
    let sum = CovarianceMatrix::new(g1.matrix() + g2.matrix())?;
    let delta = det(&sum);
    let lambda = ((det(g1) - 1.0) * (det(g2) - 1.0)).max(0.0);
    let f = 2.0 * ((delta + lambda).sqrt() + lambda.sqrt()) / delta;
    FidelityValue::from_fidelity(f)
}
