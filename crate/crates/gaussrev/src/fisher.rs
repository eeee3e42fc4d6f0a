//! Monotone-metric geometry on the displacement sector of Gaussian states.
//!
//! Two Petz metrics matter here: Bures (SLD) and Kubo-Mori (BKM). Their
//! ratio on displacement tangents of a thermal mode is controlled by a
//! single scalar function of the symplectic eigenvalue,
//! `c_geom(nu) = 1 / (2 nu ln((nu+1)/(nu-1)))`, which lies in (0, 1/4] and
//! degenerates to 0 at purity. The closed forms in this module are
//! validated against the Fock-space oracle in `tests/oracles.rs`.

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::linalg::{max_asymmetry, RMatrix};

/// Near-purity gate for metric evaluations.
pub const PURITY_GAP_TOL: f64 = 1e-9;

/// Bures-to-BKM metric ratio `r(t) = (1/2) (t-1) / ((t+1) ln t)` for an
/// eigenvalue ratio `t > 0`. Symmetric under `t -> 1/t`; the removable
/// singularity at `t = 1` takes the value 1/4.
pub fn metric_ratio(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParam(format!(
            "metric ratio needs t > 0, got {t}"
        )));
    }
    let e = t - 1.0;
    if e.abs() < 1e-6 {
        // (t-1)/((t+1) ln t) = 1/2 - e^2/24 + O(e^3); the cubic term is
        // below f64 resolution on this branch.
        return Ok(0.25 * (1.0 - e * e / 12.0));
    }
    Ok(0.5 * e / ((t + 1.0) * e.ln_1p()))
}

/// Ratio of consecutive Fock occupation probabilities of a thermal mode,
/// `lambda = (nu - 1) / (nu + 1)` for mean occupation `(nu - 1)/2`.
pub fn lambda_ratio(nu: f64) -> Result<f64> {
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(Error::InvalidParam(format!(
            "thermal spectrum ratio needs nu >= 1, got {nu}"
        )));
    }
    Ok((nu - 1.0) / (nu + 1.0))
}

/// Worst-case Bures/BKM ratio on displacement tangents at symplectic
/// eigenvalue `nu > 1`:
/// `c_geom(nu) = 1 / (2 nu ln((nu+1)/(nu-1))) = 1 / (4 nu atanh(1/nu))`.
pub fn c_geom(nu: f64) -> Result<f64> {
    if !nu.is_finite() || nu <= 1.0 {
        return Err(Error::NearPurity {
            nu,
            at_depth: None,
        });
    }
    // atanh(1/nu) is accurate across the whole range, including the
    // nu -> infinity limit where the direct log ratio would cancel.
    Ok(1.0 / (4.0 * nu * (1.0 / nu).atanh()))
}

/// Displacement-sector BKM Fisher matrix of a one-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct BkmFisherMatrix {
    j: RMatrix,
}

impl BkmFisherMatrix {
    pub fn matrix(&self) -> &RMatrix {
        &self.j
    }

    pub fn from_matrix(j: RMatrix) -> Result<Self> {
        if max_asymmetry(&j) > 1e-9 {
            return Err(Error::InvalidParam(
                "BKM Fisher matrix must be symmetric".into(),
            ));
        }
        Ok(Self { j })
    }
}

/// BKM metric on displacement tangents. In Williamson coordinates each mode
/// contributes `ln((nu+1)/(nu-1)) * 1_2`, transported by symplectic
/// congruence; for one mode this collapses to the closed form
/// `J = nu ln((nu+1)/(nu-1)) Gamma^{-1}`, which is manifestly symplectically
/// covariant (`J(S Gamma S^T) = S^{-T} J(Gamma) S^{-1}`).
pub fn bkm_displacement_metric(gamma: &CovarianceMatrix) -> Result<BkmFisherMatrix> {
    if gamma.modes() != 1 {
        return Err(Error::Unsupported(
            "the displacement BKM metric is implemented for one mode".into(),
        ));
    }
    let (nu, _) = gamma.williamson_one_mode()?;
    if nu <= 1.0 + PURITY_GAP_TOL {
        return Err(Error::NearPurity {
            nu,
            at_depth: None,
        });
    }
    let log_ratio = 2.0 * (1.0 / nu).atanh();
    let inv = gamma
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("covariance is singular".into()))?;
    BkmFisherMatrix::from_matrix(inv * (nu * log_ratio))
}

/// The pair `(-2 ln f, 2 arccos^2 sqrt(f))`; the first entry dominates the
/// second for every fidelity in (0, 1].
pub fn endpoint_bound(f: f64) -> Result<(f64, f64)> {
    if !f.is_finite() || f < 0.0 || f > 1.0 + 1e-12 {
        return Err(Error::FidelityOutOfRange(f));
    }
    if f == 0.0 {
        return Err(Error::InfiniteEndpointBound);
    }
    let f = f.min(1.0);
    let angle = f.sqrt().acos();
    Ok((-2.0 * f.ln(), 2.0 * angle * angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{squeezed_thermal_cov, SqueezedThermalParams};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn metric_ratio_at_unity_and_symmetry() {
        assert_abs_diff_eq!(metric_ratio(1.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(metric_ratio(1.0 + 1e-8).unwrap(), 0.25, epsilon = 1e-14);
        let t = 0.37;
        assert_abs_diff_eq!(
            metric_ratio(t).unwrap(),
            metric_ratio(1.0 / t).unwrap(),
            epsilon = 1e-14
        );
        // Direct evaluation at t = 0.5: 0.25 / (1.5 ln 2).
        assert_abs_diff_eq!(
            metric_ratio(0.5).unwrap(),
            0.25 / (1.5 * std::f64::consts::LN_2),
            epsilon = 1e-15
        );
        assert!(metric_ratio(0.0).is_err());
        assert!(metric_ratio(-1.0).is_err());
    }

    #[test]
    fn metric_ratio_symmetry_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let t: f64 = rng.gen_range(1e-3..1.0);
            assert_abs_diff_eq!(
                metric_ratio(t).unwrap(),
                metric_ratio(1.0 / t).unwrap(),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn lambda_ratio_examples() {
        assert_abs_diff_eq!(lambda_ratio(1.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambda_ratio(3.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(lambda_ratio(1e12).unwrap() < 1.0);
        let mut prev = 0.0;
        for i in 1..60 {
            let nu = 1.0 + (i as f64) * 0.25;
            let lam = lambda_ratio(nu).unwrap();
            assert!(lam > prev && lam < 1.0);
            prev = lam;
        }
        assert!(lambda_ratio(0.99).is_err());
    }

    #[test]
    fn c_geom_examples() {
        assert_abs_diff_eq!(c_geom(3.0).unwrap(), 1.0 / (6.0 * std::f64::consts::LN_2),
            epsilon = 1e-15);
        assert!((c_geom(1e3).unwrap() - 0.25).abs() < 1e-6);
        let near_pure = c_geom(1.0 + 1e-6).unwrap();
        assert!(near_pure > 0.0 && near_pure < 0.1);
        assert!(matches!(c_geom(1.0), Err(Error::NearPurity { .. })));
        assert!(matches!(c_geom(0.5), Err(Error::NearPurity { .. })));
    }

    #[test]
    fn c_geom_chain_identity_and_range() {
        // c_geom(nu) = metric_ratio(lambda_ratio(nu)) on a log grid.
        let mut prev = 0.0;
        for i in 0..=200 {
            let nu = 1.0 + 1e-6 * (1e10_f64).powf(i as f64 / 200.0);
            let direct = c_geom(nu).unwrap();
            let chained = metric_ratio(lambda_ratio(nu).unwrap()).unwrap();
            assert_abs_diff_eq!(direct, chained, epsilon = 1e-12);
            assert!(direct > 0.0 && direct <= 0.25 + 1e-15);
            assert!(direct >= prev, "not monotone at nu={nu}");
            prev = direct;
        }
    }

    #[test]
    fn bkm_metric_closed_forms() {
        let thermal = squeezed_thermal_cov(&SqueezedThermalParams::new(3.0, 0.0).unwrap());
        let j = bkm_displacement_metric(&thermal).unwrap();
        let expect = RMatrix::identity(2, 2) * std::f64::consts::LN_2;
        assert!((j.matrix() - expect).norm() < 1e-12);

        let squeezed = squeezed_thermal_cov(&SqueezedThermalParams::new(2.0, 0.4).unwrap());
        let j = bkm_displacement_metric(&squeezed).unwrap();
        let l = 3.0f64.ln();
        assert_abs_diff_eq!(j.matrix()[(0, 0)], l * (-0.8f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(j.matrix()[(1, 1)], l * (0.8f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(j.matrix()[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn bkm_metric_is_symplectically_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g0 = squeezed_thermal_cov(&SqueezedThermalParams::new(1.8, 0.3).unwrap());
        for _ in 0..50 {
            // Random one-mode symplectic: rotation * squeeze * rotation.
            let s = random_symplectic(&mut rng);
            let transported =
                CovarianceMatrix::new(&s * g0.matrix() * s.transpose()).unwrap();
            let j_t = bkm_displacement_metric(&transported).unwrap();
            let j0 = bkm_displacement_metric(&g0).unwrap();
            let s_inv = s.clone().try_inverse().unwrap();
            let expect = s_inv.transpose() * j0.matrix() * s_inv;
            assert!((j_t.matrix() - expect).norm() < 1e-9);
        }
    }

    fn random_symplectic(rng: &mut ChaCha8Rng) -> RMatrix {
        let rot = |th: f64| {
            nalgebra::dmatrix![th.cos(), th.sin(); -th.sin(), th.cos()]
        };
        let z = rng.gen_range(-0.8..0.8f64);
        let squeeze = nalgebra::dmatrix![z.exp(), 0.0; 0.0, (-z).exp()];
        rot(rng.gen_range(0.0..std::f64::consts::TAU))
            * squeeze
            * rot(rng.gen_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn bkm_metric_near_purity_fails_loudly() {
        let pure = squeezed_thermal_cov(&SqueezedThermalParams::new(1.0, 0.2).unwrap());
        assert!(matches!(
            bkm_displacement_metric(&pure),
            Err(Error::NearPurity { .. })
        ));
    }

    #[test]
    fn endpoint_bound_examples() {
        let (a, b) = endpoint_bound(1.0).unwrap();
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-15);
        let (a, b) = endpoint_bound(0.9).unwrap();
        assert!(a > b);
        assert!(matches!(endpoint_bound(0.0), Err(Error::InfiniteEndpointBound)));
        // Dense grid: -2 ln f >= 2 arccos^2 sqrt(f) everywhere.
        for i in 1..=2000 {
            let f = 1e-6 + (1.0 - 1e-6) * (i as f64) / 2000.0;
            let (lhs, rhs) = endpoint_bound(f).unwrap();
            assert!(lhs >= rhs - 1e-12, "bound violated at f={f}");
        }
    }
}
