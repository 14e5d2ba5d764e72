//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice must contain at least one site")]
    EmptyLattice,

    #[error("basis for {sites} sites / {particles} particles exceeds the size cap of {cap}")]
    DimensionCap {
        sites: usize,
        particles: usize,
        cap: usize,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("occupation state {0:?} is not a member of the basis")]
    StateNotInBasis(Vec<u8>),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("operands refer to different bases")]
    BasisMismatch,

    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("state is not normalized (norm = {norm:.6e})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NonHermitian { max_dev: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigensolver(String),

    #[error("ground state is degenerate (gap = {gap:.3e})")]
    DegenerateGroundState { gap: f64 },

    #[error("sublattice [{start}, {end}) holds {particles} particles, expected {expected}")]
    NotUnitFilled {
        start: usize,
        end: usize,
        particles: usize,
        expected: usize,
    },

    #[error("site {site} cannot be locked: {reason}")]
    LockRejected { site: usize, reason: &'static str },

    #[error("success probability vanishes over the whole scan horizon")]
    ZeroCoupling,

    #[error("numerical blowup at t = {time:.6}")]
    NumericalBlowup { time: f64 },

    #[error("measurement budget of {limit} exhausted before convergence")]
    MeasurementBudget { limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
