//! Numerical laboratory for the divergence of Fourier partial sums on the circle.
//!
//! The crate is split by concern:
//!
//! * [`trig`]: sparse trigonometric polynomials, uniform grids on 𝕋 and the FFT engine
//!   behind partial sums, Fejér means and L^p norms.
//! * [`setlib`]: dyadic interval families, comb sets, dyadic approximation exponents,
//!   gauge functions and box-counting dimension.
//! * [`constructions`]: the explicit saturating functions (bump, saturator, disjoint-spectrum
//!   family, holomorphic comb kernel, log-saturator, residual witness).
//! * [`verify`]: empirical certification of the quantitative inequalities.
//! * [`analysis`]: divergence indices, level sets, spectrum curves and the prevalence probe.

pub mod analysis;
pub mod constructions;
mod error;
mod par;
pub mod random;
pub mod setlib;
pub mod trig;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
