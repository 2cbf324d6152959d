//! Independent verification engines for the spectral solutions.
//!
//! - [`quadrature`]: composite 5-point Gauss–Legendre rule.
//! - [`crank_nicolson_evolve`]: finite-volume Crank–Nicolson integrator of the FPE with
//!   zero-flux ends.
//! - [`euler_maruyama`]: reflected particle ensemble for `dX = D(X) dt + sqrt(2) dW`,
//!   with [`histogram`] density estimates.
//! - [`fd_cross_check`] and [`particle_cross_check`]: L1 comparisons of either oracle
//!   against the spectral family.

mod crank_nicolson;
mod cross;
mod ensemble;
mod grid;
mod quadrature;

pub use crank_nicolson::{
    crank_nicolson_evolve, crank_nicolson_evolve_with, fd_truncation, CrankNicolson, FluxScheme,
    RADIAL_FD_LEFT,
};
pub use cross::{
    fd_cross_check, fd_stationarity, particle_cross_check, particle_stationarity, FdSettings,
    ParticleSettings, SAMPLER_CELLS,
};
pub use ensemble::{
    euler_maruyama, histogram, model_simulation, DensitySampler, EnsembleState, Histogram, InitialSampler,
    ParticleSimulation,
};
pub use grid::{l1_distance, Grid};
pub use quadrature::{gauss_legendre_nodes, quadrature, try_quadrature};
