//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised while building models, rules, kernels and operators.
#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violates its invariant (e.g. non-positive mass).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A component (energy level or species) index is out of range.
    #[error("component index {index} out of range (model has {count} components)")]
    IndexOutOfRange {
        /// Requested index (zero based).
        index: usize,
        /// Number of components available.
        count: usize,
    },

    /// The cross-section family does not match the gas model family.
    #[error("cross-section variant {variant} cannot be used with a {family} model")]
    FamilyMismatch {
        /// Name of the cross-section variant.
        variant: &'static str,
        /// Name of the model family.
        family: &'static str,
    },

    /// A relative speed that must be positive was not.
    #[error("relative speed must be positive, got {0}")]
    NonPositiveSpeed(f64),

    /// Kernels are undefined at coincident velocities.
    #[error("kernel evaluated at coincident velocities")]
    CoincidentVelocities,

    /// A quadrature rule was requested with unsupported parameters.
    #[error("invalid quadrature parameters: {0}")]
    InvalidRule(String),

    /// Velocity grids need an even per-axis node count.
    #[error("grid node count per axis must be even and positive, got N = {0}")]
    OddGrid(usize),

    /// The operator would exceed the configured size cap.
    #[error("operator with {rows} rows exceeds the size cap of {cap} rows")]
    SizeCap {
        /// Rows the requested operator would have.
        rows: usize,
        /// Configured maximum.
        cap: usize,
    },

    /// A sample set passed to a check was empty.
    #[error("empty sample set")]
    EmptySamples,

    /// A distribution field was non-positive where positivity is required.
    #[error("distribution field is not strictly positive at a quadrature node")]
    NonPositiveField,

    /// The mass-ratio lemma only applies to distinct masses.
    #[error("the energy-ratio construction requires distinct masses")]
    EqualMasses,

    /// A matrix file failed validation.
    #[error("corrupt matrix file: {0}")]
    CorruptMatrix(String),

    /// Invalid run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Dense eigen-decomposition failed.
    #[error("eigensolver failure: {0}")]
    Eigen(String),

    /// Underlying IO failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
