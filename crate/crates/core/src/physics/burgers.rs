use super::model::{Axis, Eigensystem, EquationModel, State};
use crate::error::Result;

/// Inviscid Burgers equation with flux `u^2/2` along every axis.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl EquationModel<1> for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    #[inline]
    fn flux(&self, u: &State<1>, _axis: Axis) -> State<1> {
        [0.5 * u[0] * u[0]]
    }

    #[inline]
    fn spectral_radius(&self, u: &State<1>, _axis: Axis) -> f64 {
        u[0].abs()
    }

    fn eigensystem(&self, _ul: &State<1>, _ur: &State<1>, _axis: Axis) -> Result<Eigensystem<1>> {
        Ok(Eigensystem::identity())
    }

    fn indicator_variables(&self) -> &'static [usize] {
        &[0]
    }

    #[inline]
    fn transport_velocity(&self, u: &State<1>, _axis: Axis) -> f64 {
        u[0]
    }

    fn reflection_signs(&self, _axis: Axis) -> State<1> {
        [1.0]
    }
}
