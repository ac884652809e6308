//! Exact density-operator simulation of two interferometric thought
//! experiments that probe whether a gravitational coupling can turn an
//! incoherent superposition into a coherent one.
//!
//! The crate has three layers:
//!
//! * [`qmat`], [`qstate`], [`witness`] — dense complex linear algebra for
//!   dimensions up to 16, validated density operators and bases, and the
//!   coherence / entanglement quantifiers evaluated on them;
//! * [`physics`], [`experiments`], [`gridsim`] — the dimensional formulas
//!   (gravitational energies, arm phase differences, the Planck-mass form),
//!   the interferometer pipelines with their closed-form cross-checks, and a
//!   position-grid model of a classical stochastic force channel;
//! * [`cli`] — a thin command-line front end emitting CSV and JSON.
//!
//! Every pipeline output is cross-checked against an independent closed form
//! where one exists, and the library refuses to hand back states that fail
//! those checks.

pub mod cli;
pub mod experiments;
pub mod gridsim;
pub mod physics;
pub mod qmat;
pub mod qstate;
pub mod witness;

/// Error type shared by every module in the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid dimension {dim}: must lie in 1..={max}", max = qmat::MAX_DIM)]
    InvalidDimension { dim: usize },

    #[error("subsystem dimensions multiply to {product} but the matrix has dimension {dim}")]
    SubsystemMismatch { product: usize, dim: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian: max |A - A\u{2020}| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge: off-diagonal norm {off_norm:.3e}")]
    EigenConvergence { off_norm: f64 },

    #[error("not a valid quantum state: {detail}")]
    InvalidState { detail: String },

    #[error("parameter `{name}` out of range: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("grid wavefunction error: {detail}")]
    InvalidGrid { detail: String },

    #[error("numerical validation failed: {detail}")]
    NumericalValidation { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
