//! Siegel Eisenstein series: Fourier coefficients, q-expansions, stabilization.

pub mod coeff;
pub mod qexp;
pub mod stabilize;

pub use coeff::{constant_term, fourier_coeff, fourier_coeff_chi, shape, stabilized_coeff, CoeffShape, EisensteinSpec};
pub use stabilize::{stabilization_polys, StabilizationPolys};
