use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("interface not representable as a sum of S_A.S_A' terms (min eigenvalue {min_eigenvalue:e})")]
    NotApplicable { min_eigenvalue: f64 },

    #[error("{n_sites} sites exceeds the 32-site limit")]
    TooManySites { n_sites: usize },

    #[error("needs about {needed} bytes but the limit is {limit}")]
    MemoryLimit { needed: u128, limit: u128 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "Lanczos did not converge after {restarts} restarts (best residual {best_residual:e})"
    )]
    NotConverged { restarts: usize, best_residual: f64 },

    #[error("tridiagonal QL iteration did not converge")]
    TridiagNotConverged,

    #[error("ground state is degenerate (gap {gap:e}); correlations are not well defined")]
    DegenerateGroundState { gap: f64 },

    #[error("ground-state vector was not retained")]
    MissingVector,

    #[error("too few usable points for a fit: {usable} (need at least 3)")]
    TooFewPoints { usable: usize },
}
