//! Exact arithmetic for Siegel Eisenstein series.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals, Kronecker and Hilbert symbols, Bernoulli numbers,
//!   fixed-precision p-adic integers.
//! * [`quadform`]: half-integral matrices, local invariants and the local
//!   Siegel series polynomials `F_l(T; X)`.
//! * [`eisenstein`]: Fourier coefficients, q-expansions, the operator
//!   `U_{p,n}` and the semi-ordinary p-stabilization.
//! * [`hecke`]: Satake parameters and spinor Hecke polynomials.
//! * [`lambda`]: Iwasawa-algebra elements, Kubota–Leopoldt branch series and
//!   the Λ-adic Eisenstein family.

pub mod arith;
pub mod eisenstein;
pub mod error;
pub mod hecke;
pub mod lambda;
pub mod quadform;

pub use error::{Error, Result};
