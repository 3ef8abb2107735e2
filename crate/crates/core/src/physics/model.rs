use crate::error::{HwenoError, Result};

/// Conserved-variable vector.
pub type State<const N: usize> = [f64; N];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Left/right eigenvector pair of a flux Jacobian. Rows of `left` are left
/// eigenvectors, columns of `right` are right eigenvectors, `left = right^-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const N: usize> {
    pub left: [[f64; N]; N],
    pub right: [[f64; N]; N],
}

impl<const N: usize> Eigensystem<N> {
    pub fn identity() -> Self {
        let mut m = [[0.0; N]; N];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Eigensystem { left: m, right: m }
    }

    #[inline]
    pub fn to_characteristic(&self, q: &State<N>) -> State<N> {
        mat_vec(&self.left, q)
    }

    #[inline]
    pub fn to_physical(&self, w: &State<N>) -> State<N> {
        mat_vec(&self.right, w)
    }
}

#[inline]
pub(crate) fn mat_vec<const N: usize>(m: &[[f64; N]; N], q: &State<N>) -> State<N> {
    let mut out = [0.0; N];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(q).map(|(a, b)| a * b).sum();
    }
    out
}

/// A hyperbolic system `u_t + f(u)_x (+ g(u)_y) = 0` with `N` conserved
/// variables. One-dimensional models only ever see [`Axis::X`].
pub trait EquationModel<const N: usize>: Send + Sync {
    fn name(&self) -> &'static str;

    fn flux(&self, u: &State<N>, axis: Axis) -> State<N>;

    /// Spectral radius of the flux Jacobian along `axis`.
    fn spectral_radius(&self, u: &State<N>, axis: Axis) -> f64;

    /// Local characteristic system at the arithmetic mean of `ul` and `ur`.
    fn eigensystem(&self, ul: &State<N>, ur: &State<N>, axis: Axis) -> Result<Eigensystem<N>>;

    /// Whether reconstructions must be done in characteristic variables.
    fn is_system(&self) -> bool {
        N > 1
    }

    /// Indices of the variables the troubled-cell indicator inspects.
    fn indicator_variables(&self) -> &'static [usize];

    /// Transport velocity used to split a cell boundary into inflow and
    /// outflow parts.
    fn transport_velocity(&self, u: &State<N>, axis: Axis) -> f64;

    /// Sign applied to each variable when mirrored across a wall normal to
    /// `axis` (-1 for the normal momentum).
    fn reflection_signs(&self, axis: Axis) -> State<N>;

    /// Physical admissibility (positive density and pressure for gases).
    fn is_admissible(&self, _u: &State<N>) -> bool {
        true
    }

    /// Density and pressure of a state, if the model has them.
    fn density_pressure(&self, _u: &State<N>) -> Option<(f64, f64)> {
        None
    }
}

/// Global Lax-Friedrichs speed: the largest spectral radius over `states`.
pub fn wavespeed_bound<'a, M, const N: usize, I>(states: I, model: &M, axis: Axis) -> Result<f64>
where
    M: EquationModel<N> + ?Sized,
    I: IntoIterator<Item = &'a State<N>>,
{
    let mut any = false;
    let mut alpha = 0.0_f64;
    for u in states {
        any = true;
        alpha = alpha.max(model.spectral_radius(u, axis));
    }
    if !any {
        return Err(HwenoError::config(
            "wave-speed bound over an empty set of states",
        ));
    }
    Ok(alpha)
}
