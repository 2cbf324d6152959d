//! Spectral solutions of one-dimensional Fokker–Planck equations whose drift potentials
//! form supersymmetric shape-invariant pairs, and the one-parameter family of solutions
//! interpolating between the two partners.
//!
//! - [`specfun`]: Laguerre polynomials, `ln Γ`, generalized binomials.
//! - [`models`]: radial oscillator and Morse prepotentials with their eigensystems.
//! - [`spectral`]: projection, time evolution, Darboux map, interpolated solutions.
//! - [`oracles`]: quadrature, Crank–Nicolson and Euler–Maruyama cross-checks.
//! - [`cli`]: configuration, figure reproduction, verification suite, CSV output.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod models;
pub mod oracles;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use models::{EigenMode, InterpolationRule, Interval, ModelKind, ParameterSet, SpectrumSize};
pub use oracles::Grid;
pub use spectral::{SolutionFrame, SpectralCoefficients};
