//! Equation models, numerical flux and quadrature.

mod burgers;
mod euler;
mod flux;
mod model;
pub mod quadrature;

pub use burgers::Burgers;
pub use euler::{Euler1d, Euler2d, GAMMA_AIR};
pub use flux::lax_friedrichs;
pub use model::{wavespeed_bound, Axis, Eigensystem, EquationModel, State};
pub use quadrature::{QuadratureRule, GAUSS_3, GAUSS_5, GAUSS_LOBATTO_4};
