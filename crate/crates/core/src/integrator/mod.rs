//! Semi-discrete moment equations and their time integration.

mod config;
mod rk3;
mod scheme1d;
mod scheme2d;
mod timestep;

pub use config::{
    GammaChoice, RunSummary, SchemeConfig, SchemeMode, StageStats, StepWeights, WeightSource,
};
pub use rk3::step_rk3;
pub use scheme1d::Scheme1d;
pub use scheme2d::Scheme2d;
pub use timestep::{clamp_dt, dt_1d, dt_2d, DtMode};
