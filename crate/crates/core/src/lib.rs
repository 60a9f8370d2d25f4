//! Vectorial Boolean functions over F_2, with a focus on quadratic APN
//! functions: Walsh spectra, the vector space partition induced by a crooked
//! function, blocking-set properties of its non-bent components, and the
//! combinatorial constraints on possible partition types.

pub mod admissibility;
pub mod blocking;
pub mod catalog;
pub mod construct;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod report;
pub mod vbf;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use linalg::{PointVec, Subspace};
pub use vbf::Vbf;
