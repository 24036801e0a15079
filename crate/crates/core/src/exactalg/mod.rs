//! Exact arithmetic kernel: cyclotomic numbers, multivariate polynomials,
//! rational functions in the deformation parameters and truncated τ-series.

pub mod cyclotomic;
pub mod linalg;
pub mod param;
pub mod poly;
pub mod scalar;
pub mod series;
pub(crate) mod upoly;

pub use cyclotomic::Cyclotomic;
pub use param::{Param, ParamScalar};
pub use poly::{Monomial, NotDivisible, Poly};
pub use scalar::{FieldScalar, Scalar};
pub use series::TruncatedSeries;

/// Polynomials in the coordinates x_1..x_ℓ of 𝔥 with parameter-valued
/// coefficients: the polynomial representation ℂ[𝔥].
pub type MultiPoly = Poly<ParamScalar>;
