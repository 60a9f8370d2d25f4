use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width {0} is outside the supported range 1..=16")]
    WidthOutOfRange(u32),

    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },

    #[error("value {value:#x} does not fit in {width} bits")]
    ValueOutOfRange { value: u32, width: u32 },

    #[error("hyperplane normal must be nonzero")]
    ZeroNormal,

    #[error("component b = {b:#x} is not plateaued")]
    NotPlateaued { b: u32 },

    #[error("difference map in direction a = {a:#x} has no affine hyperplane image: {reason}")]
    NotCrooked { a: u32, reason: String },

    #[error("internal structure check failed: {0}")]
    StructureViolation(String),

    #[error("search budget of {nodes} nodes exhausted")]
    Budget { nodes: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial {0:#b} is not irreducible of the requested degree")]
    NotIrreducible(u32),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
