//! Exact integer linear algebra: Smith form, determinants, integer solving,
//! primitive-vector basis extension and symmetric inertia.

mod inertia;
mod matrix;
mod smith;

use thiserror::Error;

pub use inertia::{inertia, Inertia};
pub use matrix::{dot, int_vec, unit_vec, IntMatrix};
pub(crate) use smith::solve_with_smith;
pub use smith::{
    determinant, extend_primitive_to_basis, extend_primitive_with_inverse, inverse_unimodular, is_unimodular,
    smith_normal_form, solve_integer_linear, SmithForm,
};

pub type Int = num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("vector is not primitive (gcd of entries is {gcd})")]
    NotPrimitive { gcd: Int },
    #[error("matrix is not invertible over the integers")]
    NotInvertible,
}
