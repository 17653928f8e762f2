//! Finite models of integral cohomology rings in degrees 0..=6, surface
//! rings, products `M × Σ_g`, and the form on `H²/⟨f⟩` cut out by the
//! triple product with `f`.

mod data;
mod kunneth;
mod quotient;
mod ring;

use thiserror::Error;

use crate::forms::FormError;
use crate::linalg::{Int, LinalgError};

pub use data::ManifoldData;
pub(crate) use data::{is_primitive, mod2};
pub(crate) use kunneth::product_data;
pub use kunneth::{kunneth_product, omega, surface_ring, KunnethLayout};
pub(crate) use quotient::f_pairing;
pub use quotient::{poincare_pairing, quotient_by_f, triple_form, QuotientData};
pub use ring::{validate_ring, CupTensor, GradedRing, RingViolation, TOP_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("genus must be at least 1")]
    GenusZero,
    #[error("f is not primitive (gcd {gcd})")]
    NotPrimitive { gcd: Int },
    #[error("f ∪ f pairs nontrivially with basis class {index} of H² (value {value})")]
    IllDefined { index: usize, value: Int },
    #[error("torsion in degree {degree}")]
    TorsionPresent { degree: usize },
    #[error("inconsistent shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[cfg(test)]
mod tests;
