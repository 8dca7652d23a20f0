//! Half-integral matrices and the local Siegel series.

pub mod density;
pub mod fpoly;
pub mod identities;
pub mod invariants;
pub mod matrix;
pub mod oracle;

pub use fpoly::{
    f_poly, f_poly_closed, f_poly_oracle, functional_equation_check, FunctionalEquationReport, LocalPolynomial,
    Method,
};
pub use identities::{katsurada_recursion_check, s_poly_closed, s_poly_sum, KatsuradaReport};
pub use invariants::{invariants_of, HasseConvention, LocalInvariants};
pub use matrix::{block_decompose, enumerate_psd, enumerate_psd_with, HalfIntegralMatrix};
