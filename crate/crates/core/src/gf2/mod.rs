//! Bit vectors, GF(2^m) arithmetic and linear algebra over F₂.

mod bits;
mod field;
mod linalg;
mod matrix;

pub use bits::{hamming, weight, BitVector};
#[allow(unused_imports)]
pub(crate) use bits::words_for;
pub use field::{ff_frob, ff_inv, ff_make, ff_mul, Field, FieldElement, FieldSpec, MAX_DEGREE};
pub use linalg::{field_rank, field_solve, moore_matrix};
pub use matrix::{full_rank_completion, mat_solve, BinaryMatrix, Echelon, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("elements of GF(2^{left}) and GF(2^{right}) cannot be combined")]
    FieldMismatch { left: usize, right: usize },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("field degree {0} outside 1..=4096")]
    DegreeOutOfRange(usize),
    #[error("no irreducible polynomial found for degree {0}")]
    NoIrreducible(usize),
    #[error("{width} bits do not fit in GF(2^{degree})")]
    WidthExceeded { width: usize, degree: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix rows are linearly dependent")]
    RowDeficient,
    #[error("matrix is singular")]
    Singular,
}
