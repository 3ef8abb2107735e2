//! Fifth-order hybrid Hermite WENO finite-volume solver for one- and
//! two-dimensional hyperbolic conservation laws.
//!
//! The evolved unknowns are the zeroth moment (cell average) and the first
//! moments (averages weighted by the normalized offset from the cell center)
//! of every conserved variable. Cells flagged by a KXRCF-type indicator get
//! their first moments limited and their interface values reconstructed by
//! a WENO combination of one high-degree and several low-degree candidates
//! whose linear weights may be any positive numbers summing to one. All
//! other cells use the high-degree linear reconstruction directly.
//!
//! Module map:
//!
//! * [`state`] grids, moment storage, ghost cells and initialization
//! * [`physics`] equation models, Lax-Friedrichs flux, quadrature rules
//! * [`reconstruct`] 1D and 2D Hermite reconstructions and moment limiting
//! * [`indicator`] troubled-cell detection
//! * [`integrator`] semi-discrete right-hand sides, TVD-RK3, time steps
//! * [`harness`] problem suite, convergence studies, references, output

pub mod error;
pub mod harness;
pub mod indicator;
pub mod integrator;
pub mod physics;
pub mod reconstruct;
pub mod state;

pub use error::{HwenoError, Result};
