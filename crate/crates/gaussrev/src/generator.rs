//! Gaussian channels and semigroup generators, and their complete-positivity
//! tests.
//!
//! A centered Gaussian channel `(X, Y)` maps covariances as
//! `Gamma -> X Gamma X^T + Y` and is CP iff `Y - i(sigma - X sigma X^T) >= 0`.
//! For an infinitesimal step `X = 1 + K dt`, `Y = D dt` this reduces to
//! positivity of the generator CP matrix `M = D + i(K sigma + sigma K^T)`.
//!
//! Reverse-time convention: the reverse covariance ODE in the `trajectory`
//! module runs with drift `-K_bayes` (the reversed clock), while CP
//! admissibility is evaluated on `M(K_bayes)`. The two are interchangeable
//! because `M(-K) = conj(M(K))` has the same real spectrum; see
//! [`sign_flip_spectrum_check`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SqueezedThermalParams, PSD_TOL, SYMMETRY_TOL};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_residual, hermitize, i_sigma, max_asymmetry,
    symplectic_matrix, symmetrize, to_complex, CMatrix, RMatrix,
};

/// Centered Gaussian channel acting on covariances as `X Gamma X^T + Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: RMatrix,
    y: RMatrix,
}

impl GaussianChannel {
    pub fn new(x: RMatrix, y: RMatrix) -> Result<Self> {
        if x.nrows() != x.ncols() || x.nrows() == 0 || x.nrows() % 2 != 0 {
            return Err(Error::InvalidParam(format!(
                "channel X must be square with even dimension, got {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        if y.shape() != x.shape() {
            return Err(Error::InvalidParam(
                "channel X and Y must have matching shapes".into(),
            ));
        }
        let asym = max_asymmetry(&y);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                asymmetry: asym,
                tol: SYMMETRY_TOL,
            });
        }
        Ok(Self {
            x,
            y: symmetrize(&y),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: RMatrix::identity(2 * n, 2 * n),
            y: RMatrix::zeros(2 * n, 2 * n),
        }
    }

    /// Finite-time quantum-limited attenuator step:
    /// `X = e^{-gamma t} 1`, `Y = (1 - e^{-2 gamma t}) 1`.
    pub fn attenuator_step(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma > 0.0) || !(t >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "attenuator step needs gamma > 0 and t >= 0, got gamma={gamma}, t={t}"
            )));
        }
        let decay = (-gamma * t).exp();
        Ok(Self {
            x: RMatrix::identity(2, 2) * decay,
            y: RMatrix::identity(2, 2) * (1.0 - decay * decay),
        })
    }

    /// First-order step `X = 1 + K dt`, `Y = D dt` of a generator.
    pub fn from_generator_step(g: &GaussianGenerator, dt: f64) -> Self {
        let dim = g.k.nrows();
        Self {
            x: RMatrix::identity(dim, dim) + &g.k * dt,
            y: &g.d * dt,
        }
    }

    pub fn x(&self) -> &RMatrix {
        &self.x
    }

    pub fn y(&self) -> &RMatrix {
        &self.y
    }

    pub fn modes(&self) -> usize {
        self.x.nrows() / 2
    }

    pub fn apply(&self, g: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(&self.x * g.matrix() * self.x.transpose() + &self.y)
    }

    /// HHW complete-positivity test: true iff the minimum eigenvalue of
    /// `Y - i(sigma - X sigma X^T)` is above `-PSD_TOL`; the margin (that
    /// minimum eigenvalue) is returned alongside.
    pub fn cp_check(&self) -> (bool, f64) {
        let n = self.modes();
        let sigma = symplectic_matrix(n);
        let defect = &sigma - &self.x * &sigma * self.x.transpose();
        let h = to_complex(&self.y) - to_complex(&defect) * Complex64::new(0.0, 1.0);
        let margin = hermitian_eigenvalues(&hermitize(&h))[0];
        (margin >= -PSD_TOL, margin)
    }
}

/// Gaussian semigroup generator at covariance level:
/// `d Gamma / dt = K Gamma + Gamma K^T + D`.
///
/// `D` is only required to be symmetric here; classical diffusion validity
/// (`D >= 0`) and quantum admissibility (`M >= 0`) are separate predicates.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianGenerator {
    k: RMatrix,
    d: RMatrix,
}

impl GaussianGenerator {
    pub fn new(k: RMatrix, d: RMatrix) -> Result<Self> {
        if k.nrows() != k.ncols() || k.nrows() == 0 || k.nrows() % 2 != 0 {
            return Err(Error::InvalidParam(format!(
                "drift K must be square with even dimension, got {}x{}",
                k.nrows(),
                k.ncols()
            )));
        }
        if d.shape() != k.shape() {
            return Err(Error::InvalidParam(
                "drift and diffusion must have matching shapes".into(),
            ));
        }
        let asym = max_asymmetry(&d);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                asymmetry: asym,
                tol: SYMMETRY_TOL,
            });
        }
        Ok(Self {
            k,
            d: symmetrize(&d),
        })
    }

    /// One-mode quantum-limited attenuator: `K = -gamma 1`, `D = 2 gamma 1`.
    pub fn attenuator(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam(format!(
                "attenuation rate must be positive, got {gamma}"
            )));
        }
        Ok(Self {
            k: RMatrix::identity(2, 2) * (-gamma),
            d: RMatrix::identity(2, 2) * (2.0 * gamma),
        })
    }

    pub fn drift(&self) -> &RMatrix {
        &self.k
    }

    pub fn diffusion(&self) -> &RMatrix {
        &self.d
    }

    pub fn modes(&self) -> usize {
        self.k.nrows() / 2
    }

    pub fn cp_matrix(&self) -> CpMatrix {
        generator_cp_matrix(self)
    }
}

/// The generator CP matrix `M = D + i(K sigma + sigma K^T)` with its
/// precomputed real spectrum (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct CpMatrix {
    m: CMatrix,
    eigenvalues: Vec<f64>,
}

impl CpMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let residual = hermitian_residual(&m);
        if residual > 1e-12 * m.norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        let m = hermitize(&m);
        let eigenvalues = hermitian_eigenvalues(&m);
        Ok(Self { m, eigenvalues })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn is_admissible(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }

    /// `M + Delta D` for a real symmetric diffusion increment.
    pub fn add_diffusion(&self, delta_d: &RMatrix) -> Result<CpMatrix> {
        CpMatrix::new(&self.m + to_complex(delta_d))
    }
}

/// `M = D + i(K sigma + sigma K^T)`. The real part `K sigma + sigma K^T`
/// is antisymmetric for any real `K`, so `M` is Hermitian by construction;
/// Hermiticity is nonetheless checked numerically.
pub fn generator_cp_matrix(g: &GaussianGenerator) -> CpMatrix {
    let sigma = symplectic_matrix(g.modes());
    let a = g.drift() * &sigma + &sigma * g.drift().transpose();
    let m = to_complex(g.diffusion()) + to_complex(&a) * Complex64::new(0.0, 1.0);
    CpMatrix::new(m).expect("generator CP matrix is Hermitian by construction")
}

/// Bayes (score) reverse generator at a fixed reference covariance:
/// `K_bayes = K + D Gamma_ref^{-1}`, `D_bayes = D`.
pub fn bayes_reverse_generator(
    fwd: &GaussianGenerator,
    gamma_ref: &CovarianceMatrix,
) -> Result<GaussianGenerator> {
    if gamma_ref.matrix().nrows() != fwd.k.nrows() {
        return Err(Error::InvalidParam(
            "reference covariance dimension does not match generator".into(),
        ));
    }
    let inv = gamma_ref.matrix().clone().try_inverse().ok_or_else(|| {
        Error::Degenerate("reference covariance is singular, cannot form Bayes drift".into())
    })?;
    GaussianGenerator::new(&fwd.k + &fwd.d * inv, fwd.d.clone())
}

/// Closed-form spectrum of the Bayes-reverse CP matrix for the one-mode
/// attenuator against a squeezed-thermal reference:
/// `lambda_minus = 4 gamma (1 - cosh(2r)/nu)` (the threshold eigenvalue,
/// negative exactly on the CP-violating phase `cosh(2r) > nu`) and
/// `lambda_plus = 4 gamma cosh(2r)/nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesCpSpectrum {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl BayesCpSpectrum {
    pub fn is_cp(&self) -> bool {
        self.lambda_minus >= -PSD_TOL
    }
}

pub fn bayes_cp_spectrum(gamma: f64, p: &SqueezedThermalParams) -> Result<BayesCpSpectrum> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParam(format!(
            "attenuation rate must be positive, got {gamma}"
        )));
    }
    let ratio = (2.0 * p.r()).cosh() / p.nu();
    Ok(BayesCpSpectrum {
        lambda_minus: 4.0 * gamma * (1.0 - ratio),
        lambda_plus: 4.0 * gamma * ratio,
    })
}

/// The threshold eigenvalue `4 gamma (1 - cosh(2r)/nu)` alone.
pub fn nogo_lambda_min(gamma: f64, p: &SqueezedThermalParams) -> Result<f64> {
    Ok(bayes_cp_spectrum(gamma, p)?.lambda_minus)
}

/// Two-mode squeezed vacuum covariance with parameter `mu > 1`:
/// `[[mu 1, sqrt(mu^2-1) Z], [sqrt(mu^2-1) Z, mu 1]]`, `Z = diag(1, -1)`.
pub fn tmsv_cov(mu: f64) -> Result<CovarianceMatrix> {
    if !(mu > 1.0) {
        return Err(Error::InvalidParam(format!(
            "TMSV parameter must satisfy mu > 1, got {mu}"
        )));
    }
    let c = (mu * mu - 1.0).sqrt();
    let mut m = RMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = mu;
    }
    m[(0, 2)] = c;
    m[(2, 0)] = c;
    m[(1, 3)] = -c;
    m[(3, 1)] = -c;
    CovarianceMatrix::new(m)
}

/// Entanglement witness for channel CP: sends one arm of a TMSV through the
/// channel and returns the Schur complement of the untouched block of
/// `Gamma'_AB + i sigma_AB`. The result is independent of `mu` and equals
/// `Y + i(sigma - X sigma X^T)`; the Schur complement is computed explicitly
/// (block slicing and a numeric inverse) so that identity stays a genuine
/// cross-check.
pub fn tmsv_schur_witness(c: &GaussianChannel, mu: f64) -> Result<CMatrix> {
    if c.modes() != 1 {
        return Err(Error::Unsupported(
            "the TMSV witness is defined for one-mode channels".into(),
        ));
    }
    let joint = tmsv_cov(mu)?;
    let x = c.x();
    // Output covariance of (channel x identity) applied to the TMSV.
    let mut out = joint.matrix().clone();
    let a_in = joint.matrix().view((0, 0), (2, 2)).into_owned();
    let c_in = joint.matrix().view((0, 2), (2, 2)).into_owned();
    let a_out = x * a_in * x.transpose() + c.y();
    let c_out = x * c_in;
    out.view_mut((0, 0), (2, 2)).copy_from(&a_out);
    out.view_mut((0, 2), (2, 2)).copy_from(&c_out);
    out.view_mut((2, 0), (2, 2)).copy_from(&c_out.transpose());

    let h = to_complex(&out) + i_sigma(2);
    let a_blk = h.view((0, 0), (2, 2)).into_owned();
    let b_blk = h.view((2, 2), (2, 2)).into_owned();
    let c_blk = h.view((0, 2), (2, 2)).into_owned();
    let b_inv = b_blk.try_inverse().ok_or_else(|| {
        Error::Degenerate("TMSV witness B block is singular; need mu > 1".into())
    })?;
    Ok(&a_blk - &c_blk * b_inv * c_blk.adjoint())
}

/// Checks the drift sign-flip spectral symmetry: the spectra of `M(K)` and
/// `M(-K)` agree (they are complex conjugates of each other).
pub fn sign_flip_spectrum_check(g: &GaussianGenerator) -> bool {
    let flipped = GaussianGenerator::new(-g.k.clone(), g.d.clone())
        .expect("flipping the drift sign preserves well-formedness");
    let a = generator_cp_matrix(g);
    let b = generator_cp_matrix(&flipped);
    a.eigenvalues()
        .iter()
        .zip(b.eigenvalues())
        .all(|(x, y)| (x - y).abs() <= 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::squeezed_thermal_cov;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn attenuator_bayes(gamma: f64, nu: f64, r: f64) -> CpMatrix {
        let fwd = GaussianGenerator::attenuator(gamma).unwrap();
        let p = SqueezedThermalParams::new(nu, r).unwrap();
        let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&p)).unwrap();
        rev.cp_matrix()
    }

    #[test]
    fn attenuator_cp_matrix_has_known_spectrum() {
        let m = GaussianGenerator::attenuator(1.0).unwrap().cp_matrix();
        // M = 2(1 - i*sigma), eigenvalues {0, 4}.
        let expect = to_complex(&RMatrix::identity(2, 2)) * Complex64::new(2.0, 0.0)
            - i_sigma(1) * Complex64::new(2.0, 0.0);
        assert!((m.matrix() - expect).norm() < 1e-14);
        assert_abs_diff_eq!(m.eigenvalues()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.eigenvalues()[1], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_generator_sits_on_the_cp_boundary() {
        let g = GaussianGenerator::new(RMatrix::zeros(2, 2), RMatrix::zeros(2, 2)).unwrap();
        let m = g.cp_matrix();
        assert!(m.matrix().norm() == 0.0);
        assert!(m.is_admissible());
    }

    #[test]
    fn hamiltonian_drift_contributes_nothing() {
        // K = sigma H with symmetric H: K sigma + sigma K^T = 0, so M = 0.
        let h = dmatrix![1.0, 0.2; 0.2, 2.0];
        let k = symplectic_matrix(1) * h;
        let g = GaussianGenerator::new(k, RMatrix::zeros(2, 2)).unwrap();
        assert!(g.cp_matrix().matrix().norm() < 1e-14);
    }

    #[test]
    fn hhw_cp_check_examples() {
        let (ok, margin) = GaussianChannel::identity(1).cp_check();
        assert!(ok);
        assert_abs_diff_eq!(margin, 0.0, epsilon = 1e-13);

        let (ok, _) = GaussianChannel::attenuator_step(1.0, 0.3).unwrap().cp_check();
        assert!(ok);

        let bad = GaussianChannel::new(RMatrix::identity(2, 2), RMatrix::identity(2, 2) * -0.1)
            .unwrap();
        assert!(!bad.cp_check().0);
    }

    #[test]
    fn bayes_drift_cancels_at_the_fixed_covariance() {
        let fwd = GaussianGenerator::attenuator(1.0).unwrap();
        let thermal2 = squeezed_thermal_cov(&SqueezedThermalParams::new(2.0, 0.0).unwrap());
        let rev = bayes_reverse_generator(&fwd, &thermal2).unwrap();
        assert!(rev.drift().norm() < 1e-14);
        assert_eq!(rev.diffusion(), fwd.diffusion());

        let vac = CovarianceMatrix::vacuum(1);
        let rev = bayes_reverse_generator(&fwd, &vac).unwrap();
        assert!((rev.drift() - RMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn bayes_drift_against_squeezed_reference() {
        let fwd = GaussianGenerator::attenuator(1.0).unwrap();
        let p = SqueezedThermalParams::new(1.2, 0.6).unwrap();
        let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&p)).unwrap();
        let expect = dmatrix![
            -1.0 + 2.0 * (-1.2f64).exp() / 1.2, 0.0;
            0.0, -1.0 + 2.0 * (1.2f64).exp() / 1.2
        ];
        assert!((rev.drift() - expect).norm() < 1e-12);
    }

    #[test]
    fn threshold_eigenvalue_examples() {
        let vac = SqueezedThermalParams::new(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(nogo_lambda_min(0.7, &vac).unwrap(), 0.0, epsilon = 1e-14);

        let thermal = SqueezedThermalParams::new(2.0, 0.0).unwrap();
        assert_abs_diff_eq!(nogo_lambda_min(1.0, &thermal).unwrap(), 2.0, epsilon = 1e-14);

        let squeezed = SqueezedThermalParams::new(1.2, 0.6).unwrap();
        let lam = nogo_lambda_min(1.0, &squeezed).unwrap();
        assert_abs_diff_eq!(lam, 4.0 * (1.0 - (1.2f64).cosh() / 1.2), epsilon = 1e-14);
        assert_abs_diff_eq!(lam, -2.035518557747916, epsilon = 1e-10);
        // Against the assembled CP matrix.
        let m = attenuator_bayes(1.0, 1.2, 0.6);
        assert_abs_diff_eq!(m.min_eigenvalue(), lam, epsilon = 1e-10);
    }

    #[test]
    fn closed_form_spectrum_matches_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let gamma = rng.gen_range(0.05..2.0);
            let nu = rng.gen_range(1.0..4.0);
            let r = rng.gen_range(0.0..1.5);
            let m = attenuator_bayes(gamma, nu, r);
            let spec = bayes_cp_spectrum(gamma, &SqueezedThermalParams::new(nu, r).unwrap())
                .unwrap();
            let mut expect = [spec.lambda_minus, spec.lambda_plus];
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_abs_diff_eq!(m.eigenvalues()[0], expect[0], epsilon = 1e-10);
            assert_abs_diff_eq!(m.eigenvalues()[1], expect[1], epsilon = 1e-10);
        }
    }

    #[test]
    fn bayes_perturbation_is_traceless() {
        let fwd = GaussianGenerator::attenuator(0.8).unwrap().cp_matrix();
        let bayes = attenuator_bayes(0.8, 1.3, 0.9);
        let delta = bayes.matrix() - fwd.matrix();
        assert!(delta.trace().norm() < 1e-12);
        assert!(hermitian_residual(&delta) < 1e-12);
    }

    #[test]
    fn tmsv_covariance_properties() {
        assert!(tmsv_cov(1.0).is_err());
        let g = tmsv_cov(2.0).unwrap();
        assert_abs_diff_eq!(g.matrix()[(0, 2)], 3.0f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(g.matrix()[(1, 3)], -(3.0f64.sqrt()), epsilon = 1e-14);
        let (ok, margin) = g.physicality();
        assert!(ok);
        assert_abs_diff_eq!(margin, 0.0, epsilon = 1e-10);
        // Pure state: determinant 1 and both symplectic eigenvalues 1.
        for mu in [1.2, 2.0, 7.5] {
            let g = tmsv_cov(mu).unwrap();
            assert_abs_diff_eq!(g.matrix().determinant(), 1.0, epsilon = 1e-9);
            for nu in g.symplectic_eigenvalues().unwrap() {
                assert_abs_diff_eq!(nu, 1.0, epsilon = 1e-9);
            }
        }
        // mu -> 1+ limit: off-blocks vanish.
        let g = tmsv_cov(1.0 + 1e-12).unwrap();
        assert!(g.matrix()[(0, 2)].abs() < 2e-6);
    }

    #[test]
    fn witness_vanishes_for_identity_channel() {
        let s = tmsv_schur_witness(&GaussianChannel::identity(1), 3.0).unwrap();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn witness_is_mu_independent_and_matches_closed_form() {
        let ch = GaussianChannel::attenuator_step(1.0, 0.3).unwrap();
        let witnesses: Vec<CMatrix> = [1.5, 2.0, 5.0]
            .iter()
            .map(|&mu| tmsv_schur_witness(&ch, mu).unwrap())
            .collect();
        for w in &witnesses[1..] {
            assert!((w - &witnesses[0]).norm() < 1e-12);
        }
        let sigma = symplectic_matrix(1);
        let defect = &sigma - ch.x() * &sigma * ch.x().transpose();
        let closed = to_complex(ch.y()) + to_complex(&defect) * Complex64::new(0.0, 1.0);
        assert!((&witnesses[0] - closed).norm() < 1e-12);
    }

    #[test]
    fn infinitesimal_witness_recovers_threshold_eigenvalue() {
        let p = SqueezedThermalParams::new(1.2, 0.6).unwrap();
        let fwd = GaussianGenerator::attenuator(1.0).unwrap();
        let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&p)).unwrap();
        let lam = nogo_lambda_min(1.0, &p).unwrap();
        let dt = 1e-6;
        let step = GaussianChannel::from_generator_step(&rev, dt);
        let s = tmsv_schur_witness(&step, 2.0).unwrap();
        let rescaled = hermitian_eigenvalues(&hermitize(&s))[0] / dt;
        assert!((rescaled - lam).abs() < 1e-4, "got {rescaled}, want {lam}");
        // Richardson consistency at dt/2: the defect shrinks with dt.
        let step2 = GaussianChannel::from_generator_step(&rev, dt / 2.0);
        let s2 = tmsv_schur_witness(&step2, 2.0).unwrap();
        let rescaled2 = hermitian_eigenvalues(&hermitize(&s2))[0] / (dt / 2.0);
        assert!((rescaled2 - lam).abs() < (rescaled - lam).abs() + 1e-12);
    }

    #[test]
    fn finite_step_cp_margin_converges_to_generator_rate() {
        let p = SqueezedThermalParams::new(1.2, 0.6).unwrap();
        let fwd = GaussianGenerator::attenuator(1.0).unwrap();
        let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&p)).unwrap();
        let lam = rev.cp_matrix().min_eigenvalue();
        let err_at = |dt: f64| {
            let (_, margin) = GaussianChannel::from_generator_step(&rev, dt).cp_check();
            (margin / dt - lam).abs()
        };
        let e1 = err_at(1e-5);
        let e2 = err_at(5e-6);
        assert!(e1 < 1e-3);
        // O(dt) convergence: halving dt roughly halves the error.
        assert!(e2 < 0.75 * e1);
    }

    #[test]
    fn sign_flip_spectrum_examples() {
        let zero_drift =
            GaussianGenerator::new(RMatrix::zeros(2, 2), RMatrix::identity(2, 2)).unwrap();
        assert!(sign_flip_spectrum_check(&zero_drift));

        let p = SqueezedThermalParams::new(1.2, 0.6).unwrap();
        let fwd = GaussianGenerator::attenuator(1.0).unwrap();
        let rev = bayes_reverse_generator(&fwd, &squeezed_thermal_cov(&p)).unwrap();
        assert!(sign_flip_spectrum_check(&rev));
    }

    #[test]
    fn sign_flip_spectrum_on_random_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = if rng.gen_bool(0.5) { 1 } else { 2 };
            let dim = 2 * n;
            let k = RMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-2.0..2.0));
            let d_raw = RMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-2.0..2.0));
            let g = GaussianGenerator::new(k, symmetrize(&d_raw)).unwrap();
            assert!(sign_flip_spectrum_check(&g));
        }
    }

    #[test]
    fn phase_boundary_sign_agreement_on_grid() {
        // Sign of the threshold eigenvalue agrees with sign of nu - cosh(2r).
        for i in 0..=40 {
            let nu = 1.0 + 3.0 * (i as f64) / 40.0;
            for j in 0..=40 {
                let r = 1.5 * (j as f64) / 40.0;
                let p = SqueezedThermalParams::new(nu, r).unwrap();
                let lam = nogo_lambda_min(1.3, &p).unwrap();
                let gap = nu - (2.0 * r).cosh();
                if gap.abs() > 1e-9 {
                    assert_eq!(lam > 0.0, gap > 0.0, "disagree at nu={nu}, r={r}");
                }
            }
        }
    }
}
