//! Pseudospectral toolkit for the generalized Camassa-Holm-Novikov equation
//! on a large periodic box: Littlewood-Paley blocks, Besov norms, the
//! nonlocal transport right-hand side, RK4 time stepping and the
//! oscillating-packet initial data used to probe the solution map near
//! `t = 0`.

pub mod cutoff;
pub mod error;
pub mod gchn;
pub mod integrator;
pub mod littlewood_paley;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};
pub use gchn::{ModelParams, Variant};
pub use integrator::{Dynamics, StepControl, Trajectory};
pub use littlewood_paley::{BesovParams, LPFamily};
pub use spectral::{Field, Grid, SpectralField};
pub use witness::{witness_data, BumpSpec, Witness, WitnessSpec};
