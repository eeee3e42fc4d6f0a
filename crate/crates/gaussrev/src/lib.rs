//! Complete-positivity analysis of Gaussian score reversal, and the price of
//! repairing it.
//!
//! A Gaussian Markov semigroup relaxing covariances along
//! `d Gamma/dt = K Gamma + Gamma K^T + D` admits a classical time reversal
//! by the Bayes drift `K + D Gamma_ref^{-1}` at unchanged diffusion. At the
//! quantum level that candidate must additionally keep the generator CP
//! matrix `M = D + i(K sigma + sigma K^T)` positive semidefinite, and for
//! the one-mode attenuator against a squeezed-thermal reference `(nu, r)`
//! this fails exactly when `cosh(2r) > nu`. This crate computes:
//!
//! - covariance algebra in HHW units ([`gaussian`]): physicality,
//!   symplectic spectra, squeezed-thermal states, Gaussian fidelity
//!   (squared convention, `F = cos^2` of the Bures angle);
//! - channel/generator CP machinery ([`generator`]): the HHW test, the
//!   generator CP matrix, Bayes reverse drift, the closed-form threshold
//!   spectrum, a TMSV Schur-complement witness and the drift sign-flip
//!   symmetry;
//! - the minimal Fisher-weighted diffusion repair as a small dense SDP
//!   ([`repair`]), with a brute-force oracle for validation;
//! - Petz monotone-metric geometry on displacement tangents ([`fisher`]):
//!   the Bures/BKM ratio, `c_geom`, and the BKM Fisher matrix;
//! - repaired reverse decoding of covariance trajectories and the
//!   noise-floor inequality data ([`trajectory`]);
//! - a truncated Fock-space oracle ([`fock`]) backing the closed forms in
//!   tests.

pub mod error;
pub mod fisher;
pub mod fock;
pub mod gaussian;
pub mod generator;
pub mod linalg;
pub mod repair;
pub mod trajectory;

pub use error::{Error, Result};
pub use fisher::{bkm_displacement_metric, c_geom, endpoint_bound, lambda_ratio, metric_ratio};
pub use gaussian::{
    bures_angle, gaussian_fidelity, squeezed_thermal_cov, CovarianceMatrix, FidelityValue,
    SqueezedThermalParams, SymplecticForm,
};
pub use generator::{
    bayes_cp_spectrum, bayes_reverse_generator, generator_cp_matrix, nogo_lambda_min,
    sign_flip_spectrum_check, tmsv_cov, tmsv_schur_witness, BayesCpSpectrum, CpMatrix,
    GaussianChannel, GaussianGenerator,
};
pub use repair::{
    brute_force_repair, isotropic_repair, minimal_repair, RepairProblem, RepairResult,
};
pub use trajectory::{
    debruijn_increment, forward_evolve, noise_floor_report, reverse_decode,
    reverse_decode_between, worst_case_irreversibility, NoiseFloorConfig, NoiseFloorReport,
    NoiseFloorRow, TrajectoryConfig, TrajectoryRecord, WeightSource,
};
