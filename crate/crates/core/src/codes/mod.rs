//! Syndrome codes: binary BCH, Reed–Solomon and `B_h` sequences.

mod bch;
mod bh;
pub mod poly;
mod rs;

pub use bch::BchCode;
pub use bh::{bh_sequence, bh_width, BhSequence};
pub use rs::RsCode;

use crate::gf2::{BitVector, Field, GfError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("uncorrectable syndrome")]
    Uncorrectable,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("packed width {width} exceeds field degree {degree}")]
    WidthExceeded { width: usize, degree: usize },
    #[error(transparent)]
    Gf(#[from] GfError),
}

pub fn bch_build(n: usize, e: usize) -> Result<BchCode, CodeError> {
    BchCode::new(n, e)
}

pub fn syndrome(code: &BchCode, x: &BitVector) -> Result<BitVector, CodeError> {
    code.syndrome(x)
}

pub fn decode_syndrome(code: &BchCode, s: &BitVector) -> Result<BitVector, CodeError> {
    code.decode_syndrome(s)
}

pub fn rs_code(field: &Field, length: usize, d: usize) -> Result<RsCode, CodeError> {
    RsCode::new(field, length, d)
}
