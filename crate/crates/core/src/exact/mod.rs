//! Exact arithmetic substrate: integer polynomials and the algorithms the
//! rest of the crate trusts. No floating point anywhere in here.

pub mod cyclotomic;
pub mod factor;
pub mod intfactor;
pub mod modp;
pub mod poly;
pub mod resultant;
pub mod sturm;
pub mod transform;

pub use cyclotomic::{cyclotomic_order, cyclotomic_poly};
pub use factor::{factor_over_integers, is_irreducible};
pub use poly::IntPoly;
pub use resultant::{discriminant, resultant};
pub use sturm::{real_root_count, sturm_real_root_count};
pub use transform::{power_transform, product_transform, ratio_transform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("divisor polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("non-squarefree polynomial vanishes at an interval endpoint")]
    NotSquarefreeAtEndpoint,
}
