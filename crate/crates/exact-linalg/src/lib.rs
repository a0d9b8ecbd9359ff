//! Exact linear algebra over cyclotomic extensions of the rationals.
//!
//! Everything here is exact: scalars are elements of Q(zeta_m) with
//! arbitrary-precision integer coefficients, elimination is fraction-free,
//! and subspaces are kept in a canonical echelon form so that equality of
//! subspaces is equality of representations.

mod mat;
mod poly;
mod ring;
mod scalar;
mod subspace;

pub use mat::{charpoly_coeffs, pfaffian, Mat};
pub use poly::{interpolate, interpolate_at_integers, minimal_polynomial, UniPoly};
pub use ring::{Dual, RingElem};
pub use scalar::{cyclotomic_order, set_cyclotomic_order, FieldContext, Scalar};
pub use subspace::Subspace;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("repeated interpolation abscissa")]
    RepeatedAbscissa,
    #[error("pfaffian needs even dimension, got {0}")]
    PfaffianOddDimension(usize),
    #[error("pivot is not invertible in this ring")]
    SingularPivot,
    #[error("cyclotomic order already fixed to {fixed}, cannot switch to {requested}")]
    CyclotomicOrderFixed { fixed: u32, requested: u32 },
    #[error("field is missing a root of unity of order {needed} (have zeta_{have})")]
    MissingRootOfUnity { needed: u32, have: u32 },
}
