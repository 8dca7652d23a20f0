//! Number-theoretic primitives shared by every other module.

pub mod bernoulli;
pub mod character;
pub mod factor;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod symbols;

pub use bernoulli::{bernoulli, bernoulli_poly, dirichlet_l_neg, generalized_bernoulli, Coefficient};
pub use character::CharacterSpec;
pub use factor::{factor, factor_with_bound, DEFAULT_FACTOR_BOUND};
pub use padic::{padic_exp, padic_log, s_of, teichmuller, PadicInt, PadicNumber};
pub use poly::QPoly;
pub use rational::{parse_rational, rat, rational_to_string, Rational};
pub use symbols::{
    chi_local, fundamental_discriminant_decompose, hilbert_symbol, hilbert_symbol_real,
    kronecker_symbol, legendre, valuation,
};
