//! Hermite reconstructions from zeroth and first moments.

pub mod one_d;
pub mod two_d;
mod weights;

pub use one_d::{
    hweno_interface, linear_interface, linear_internal, modify_first_moment, smoothness_interface,
    smoothness_moment, Side, Stencil1,
};
pub use two_d::{
    gauss_points, modify_moments_2d, Candidates2, GaussPoint, Kernel2, Stencil2, BOTTOM, INTERIOR,
    LEFT, N_INPUTS_2D, N_POINTS_2D, RIGHT, TOP,
};
pub use weights::{combine, nonlinear_weights, LinearWeights, EPSILON};
