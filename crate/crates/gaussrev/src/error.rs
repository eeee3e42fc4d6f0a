use thiserror::Error;

/// Errors shared by all modules of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric: max asymmetry {asymmetry:.3e} exceeds {tol:.1e}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("matrix is not Hermitian: residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("unphysical covariance: min eigenvalue of gamma + i*sigma is {margin:.3e}")]
    Unphysical { margin: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("state too close to purity: symplectic eigenvalue {nu}{}",
            .at_depth.map(|s| format!(" at depth {s}")).unwrap_or_default())]
    NearPurity { nu: f64, at_depth: Option<f64> },

    #[error("weight matrix not positive definite: min eigenvalue {min_eig:.3e}")]
    WeightNotPositiveDefinite { min_eig: f64 },

    #[error("weight matrix ill-conditioned: cond {cond:.3e} exceeds {max:.1e}")]
    WeightIllConditioned { cond: f64, max: f64 },

    #[error("Fock cutoff {cutoff} too small: truncation deficit {deficit:.3e}, suggest at least {suggested}")]
    Truncation {
        cutoff: usize,
        deficit: f64,
        suggested: usize,
    },

    /// Fast-path rejection: the matrix is not (close enough to) a real
    /// combination of the identity and i*sigma. Callers fall back to the
    /// general solver.
    #[error("matrix is not phase-covariant: projection residual {residual:.3e}")]
    NotPhaseCovariant { residual: f64 },

    #[error("fidelity {0} outside [0, 1]")]
    FidelityOutOfRange(f64),

    #[error("endpoint bound is infinite: fidelity is zero")]
    InfiniteEndpointBound,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("class member {index} (nu={nu}, r={r}): {source}")]
    MemberFailed {
        index: usize,
        nu: f64,
        r: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
