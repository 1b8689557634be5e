//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the algebra, space constructions and transforms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two values from Clifford algebras of different dimension were combined.
    #[error("dimension mismatch: expected m = {expected}, found m = {found}")]
    DimensionMismatch { expected: u32, found: u32 },

    /// Axis index outside `1..=m`.
    #[error("axis {axis} out of range for dimension m = {m}")]
    AxisOutOfRange { axis: usize, m: u32 },

    /// Blade index outside `1..=m` or not strictly increasing.
    #[error("invalid blade index set for dimension m = {m}: {detail}")]
    InvalidBlade { m: u32, detail: String },

    /// An operation required a plain polynomial but was given a weighted function.
    #[error("{operation} requires a plain polynomial input (no |x| weights)")]
    WeightedInput { operation: &'static str },

    /// The Fischer pairing requires polynomials in u only.
    #[error("fischer pairing requires weight-free polynomials in u only ({detail})")]
    MixedVariables { detail: String },

    /// A named structural constant vanished for the given parameters.
    #[error("parameter guard: {constant} = 0 at (m, k) = ({m}, {k})")]
    VanishingDenominator {
        constant: &'static str,
        m: u32,
        k: u32,
    },

    /// Input was expected to lie in a particular polynomial space.
    #[error("input not in required space: {space}")]
    NotInSpace { space: String },

    /// Invalid space parameters.
    #[error("invalid space parameters: {detail}")]
    InvalidParams { detail: String },

    /// Text parsing failed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
