//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, channel application, and the
/// transmission pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands were built over different qubit counts.
    #[error("qubit width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },

    /// A qubit count outside the supported range for the requested object.
    #[error("width {width} out of supported range {min}..={max}")]
    WidthOutOfRange { width: u32, min: u32, max: u32 },

    /// A basis-state label does not fit in the given width.
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },

    /// An input that must arrive normalized is not.
    #[error("input not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    /// Projection onto an empty set of basis states.
    #[error("projection onto an empty basis set")]
    EmptyProjection,

    /// A scalar parameter violates its domain constraint.
    #[error("invalid {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A buffer length does not match the dimension implied by the width.
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A matrix that must describe a physical state does not.
    #[error("state invariant violated: {0}")]
    StateInvariant(String),

    /// Renormalization of a matrix whose trace is (numerically) zero.
    #[error("cannot renormalize: trace {trace} is degenerate")]
    DegenerateTrace { trace: f64 },

    /// Malformed sweep configuration (flags or config file).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
