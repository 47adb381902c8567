//! Liouville-type analysis for Fourier multiplier operators and Levy generators.
//!
//! The crate is organised in layers:
//!
//! * [`levy`] evaluates characteristic exponents from Levy triplets, their
//!   generalised higher-order analogues, analytic extensions along the
//!   imaginary axis, projections and subordination.
//! * [`growth`] models submultiplicative weights, their directional exponential
//!   rates and the convex envelope built from those rates.
//! * [`spectral`] searches zero sets on grids and turns them into Liouville,
//!   polynomial, strong Liouville and coupling verdicts.
//! * [`lab`] applies multipliers on periodic grids with FFTs and checks
//!   harmonic witnesses through weak residuals.
//! * [`sim`] is the Monte Carlo engine used to check the probabilistic side.
//!
//! Every numerical verdict is relative to the search box, grid and tolerance
//! it was computed with; verdicts carry that certificate.

pub mod error;
pub mod growth;
pub mod lab;
pub mod levy;
pub(crate) mod linalg;
pub mod quadrature;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
