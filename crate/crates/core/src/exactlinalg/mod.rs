//! Exact linear algebra over ℚ and prime fields.

pub mod field;
pub mod matrix;
pub mod polymatrix;
pub mod subspace;

pub use field::{Field, FieldDescriptor, PrimeField, Rationals, DEFAULT_PRIME, SECOND_PRIME};
pub use matrix::{gauss_rank, rref_in_place, solve, Matrix};
pub use polymatrix::{flat_limit, poly_left_kernel, PolyMatrix, PolyRow, UPoly};
pub use subspace::{echelon, rank, RowReducer, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("unsupported field `{0}` (expected `qq` or `fp:<odd prime below 2^32>`)")]
    BadField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
}
