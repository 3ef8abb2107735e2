//! Grids, moment storage with ghost layers, boundary conditions and initial
//! moments.

mod boundary;
mod field;
mod grid;
mod init;

pub use boundary::{
    dmr_shock_x, fill_ghosts_1d, fill_ghosts_2d, BoundaryKind, BoundarySpec1, BoundarySpec2,
    Obstacle, DMR_SHOCK_X0,
};
pub use field::{MomentField1, MomentField2, RkState};
pub use grid::{Grid1, Grid2, GHOST_DEPTH};
pub use init::{init_moments_1d, init_moments_2d};
