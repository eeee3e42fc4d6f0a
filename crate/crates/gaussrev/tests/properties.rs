//! Property tests for the structural invariants of the covariance algebra,
//! the repair SDP and the metric layer.

use gaussrev::fisher::{bkm_displacement_metric, metric_ratio};
use gaussrev::gaussian::{
    gaussian_fidelity, squeezed_thermal_cov, CovarianceMatrix, SqueezedThermalParams,
};
use gaussrev::generator::{bayes_reverse_generator, CpMatrix, GaussianGenerator};
use gaussrev::linalg::{to_complex, RMatrix};
use gaussrev::repair::{minimal_repair, RepairProblem};
use gaussrev::trajectory::debruijn_increment;
use nalgebra::dmatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn rotation(theta: f64) -> RMatrix {
    dmatrix![theta.cos(), theta.sin(); -theta.sin(), theta.cos()]
}

fn one_mode_symplectic(theta: f64, z: f64, phi: f64) -> RMatrix {
    rotation(theta) * dmatrix![z.exp(), 0.0; 0.0, (-z).exp()] * rotation(phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn squeezed_thermal_states_are_physical(nu in 1.0..6.0f64, r in 0.0..2.0f64) {
        let p = SqueezedThermalParams::new(nu, r).unwrap();
        let g = squeezed_thermal_cov(&p);
        prop_assert!(g.is_physical());
        prop_assert!((g.symplectic_eigenvalues().unwrap()[0] - nu).abs() < 1e-9);
    }

    #[test]
    fn sub_unity_symplectic_eigenvalue_is_unphysical(nu in 0.2..0.995f64, r in 0.0..1.0f64) {
        // nu < 1 substituted directly into the squeezed-thermal matrix.
        let m = dmatrix![nu * (2.0 * r).exp(), 0.0; 0.0, nu * (-2.0 * r).exp()];
        let g = CovarianceMatrix::new(m).unwrap();
        prop_assert!(!g.is_physical());
    }

    #[test]
    fn symplectic_eigenvalues_are_congruence_invariant(
        nu in 1.0..4.0f64,
        r in 0.0..1.0f64,
        theta in 0.0..std::f64::consts::TAU,
        z in -0.8..0.8f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let g = squeezed_thermal_cov(&SqueezedThermalParams::new(nu, r).unwrap());
        let s = one_mode_symplectic(theta, z, phi);
        let moved = CovarianceMatrix::new(&s * g.matrix() * s.transpose()).unwrap();
        let ev = moved.symplectic_eigenvalues().unwrap();
        prop_assert!((ev[0] - nu).abs() < 1e-9, "got {} want {}", ev[0], nu);
    }

    #[test]
    fn metric_ratio_is_inversion_symmetric(t in 1e-4..1.0f64) {
        let a = metric_ratio(t).unwrap();
        let b = metric_ratio(1.0 / t).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a > 0.0 && a <= 0.25 + 1e-15);
    }

    #[test]
    fn debruijn_increments_are_nonnegative(
        a11 in -1.0..1.0f64, a12 in -1.0..1.0f64,
        a21 in -1.0..1.0f64, a22 in -1.0..1.0f64,
        nu in 1.05..5.0f64, r in 0.0..1.0f64,
    ) {
        let a = dmatrix![a11, a12; a21, a22];
        let psd = &a * a.transpose();
        let state = squeezed_thermal_cov(&SqueezedThermalParams::new(nu, r).unwrap());
        let j = bkm_displacement_metric(&state).unwrap();
        prop_assert!(debruijn_increment(&psd, &j).unwrap() >= 0.0);
    }

    #[test]
    fn fidelity_is_symmetric_and_normalized(
        nu1 in 1.0..4.0f64, r1 in 0.0..1.0f64,
        nu2 in 1.0..4.0f64, r2 in 0.0..1.0f64,
    ) {
        let g1 = squeezed_thermal_cov(&SqueezedThermalParams::new(nu1, r1).unwrap());
        let g2 = squeezed_thermal_cov(&SqueezedThermalParams::new(nu2, r2).unwrap());
        let f12 = gaussian_fidelity(&g1, &g2).unwrap().fidelity();
        let f21 = gaussian_fidelity(&g2, &g1).unwrap().fidelity();
        prop_assert!((f12 - f21).abs() < 1e-13);
        prop_assert!((0.0..=1.0).contains(&f12));
        let f11 = gaussian_fidelity(&g1, &g1).unwrap().fidelity();
        prop_assert!((f11 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repairs_are_feasible_and_zero_exactly_on_admissible_input(
        a in 0.1..3.0f64,
        b in -4.0..4.0f64,
        w11 in 0.5..2.0f64,
        w22 in 0.5..2.0f64,
        w12 in -0.4..0.4f64,
    ) {
        let m = CpMatrix::new(
            to_complex(&RMatrix::identity(2, 2)) * Complex64::new(a, 0.0)
                + gaussrev::linalg::i_sigma(1) * Complex64::new(b, 0.0),
        )
        .unwrap();
        let admissible = m.min_eigenvalue() >= -1e-10;
        let w = dmatrix![w11, w12; w12, w22];
        let problem = RepairProblem::new(m, w).unwrap();
        let out = minimal_repair(&problem).unwrap();
        prop_assert!(out.feasibility_margin >= -1e-10);
        prop_assert!(out.optimality_gap >= 0.0);
        if admissible {
            prop_assert!(out.cost == 0.0);
        } else {
            prop_assert!(out.cost > 0.0);
        }
    }

    #[test]
    fn bayes_spectrum_is_sign_flip_invariant(
        gamma in 0.1..2.0f64,
        nu in 1.0..4.0f64,
        r in 0.0..1.5f64,
    ) {
        let fwd = GaussianGenerator::attenuator(gamma).unwrap();
        let reference = squeezed_thermal_cov(&SqueezedThermalParams::new(nu, r).unwrap());
        let rev = bayes_reverse_generator(&fwd, &reference).unwrap();
        prop_assert!(gaussrev::generator::sign_flip_spectrum_check(&rev));
    }
}
