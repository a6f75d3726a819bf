//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building, transforming, or analysing a
/// chain. All variants are domain errors; I/O does not happen in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The couplings/fields do not describe a valid chain.
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    /// Adjacent eigenvalues are closer than the degeneracy tolerance.
    #[error("spectrum is not simple: minimal gap {gap:.3e} below tolerance {tol:.3e}")]
    NonSimpleSpectrum { gap: f64, tol: f64 },

    /// An eigenvector has (numerically) no support on site 0, so the chain
    /// boundary is decoupled and no orthogonality weight can be assigned.
    #[error("boundary weight vanishes for eigenvalue index {index}: site 0 is decoupled")]
    ZeroBoundaryWeight { index: usize },

    /// A user-supplied spectrum disagrees with the chain it is claimed for.
    #[error("spectrum does not match the chain (max deviation {defect:.3e})")]
    SpectrumMismatch { defect: f64 },

    /// |theta| = pi/4: the end-to-end amplitude vanishes and the revival
    /// parametrisation degenerates.
    #[error("degenerate revival: |theta| must be strictly below pi/4")]
    DegenerateRevival,

    /// Spectral points are not strictly increasing (or produce a
    /// non-positive weight).
    #[error("spectrum must be strictly increasing with positive weights")]
    InvalidSpectrumOrder,

    /// A squared recurrence coefficient lost positivity during
    /// reconstruction.
    #[error("reconstruction breakdown at step {step}: squared coupling {value:.3e}")]
    ReconstructionBreakdown { step: usize, value: f64 },

    /// Bi-lattice parameter outside the open interval (0, 2).
    #[error("bi-lattice parameter delta = {0} lies outside (0, 2)")]
    InvalidDelta(f64),

    /// An isospectral deformation was requested for a chain that is not
    /// mirror-symmetric.
    #[error("operation requires a persymmetric chain (defect {0:.3e})")]
    RequiresPersymmetry(f64),

    /// A deformation drove a coupling to zero, splitting the chain in two.
    #[error("deformation disconnects the chain: coupling J_{0} vanishes")]
    DisconnectedChain(usize),

    /// Level removal produced a non-positive squared coupling.
    #[error("spectral surgery failed: {0}")]
    InvalidSurgery(String),

    /// An internal identity of the two-step synthesis failed; indicates a
    /// bug, not a bad input.
    #[error("design consistency check failed: {0}")]
    DesignInconsistency(String),

    /// A precondition on a plain argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
