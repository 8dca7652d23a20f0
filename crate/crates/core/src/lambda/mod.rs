//! Λ-adic layer: Iwasawa-algebra elements, Kubota–Leopoldt branches and the
//! semi-ordinary Λ-adic Siegel Eisenstein family.

pub mod branch;
pub mod element;
pub mod family;

pub use branch::{branch, build_branch, BranchSeries, LambdaConfig};
pub use element::{one_plus_x_pow, LambdaElement};
pub use family::{a_t_lambda, b_poly, lambda_coefficients, lambda_eisenstein, BPoly, FracLambda};
