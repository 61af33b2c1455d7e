//! The ring `M~ = Q[G2, G4, G6]` of level-one quasimodular forms.
//!
//! Polynomials are kept symbolically ([`QMPoly`]) and mapped to q-series by
//! [`qm_expand`]. Series go the other way through [`recognize`], and
//! [`decompose`] splits a form into Eisenstein and cuspidal parts.

mod decompose;
mod expand;
mod poly;
mod recognize;

pub use decompose::{
    cusp_basis, cusp_dimension, decompose, dim_check, CuspTerm, Decomposition, EisensteinTerm,
};
pub use expand::{
    delta, delta_poly, e4_poly, e6_poly, eisenstein_constant, eisenstein_derivative_series, eisenstein_poly,
    eisenstein_series, qm_expand, Expander,
};
pub use poly::{
    modular_monomials, monomial_basis, monomials_of_weight, monomials_up_to, poly_from_json, Monomial, QMPoly,
};
pub use recognize::{recognize, required_truncation, Recognition, ResidualReport};

pub(crate) use recognize::rank_certified_truncation;
