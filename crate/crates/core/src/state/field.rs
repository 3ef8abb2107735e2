use super::grid::{Grid1, Grid2};
use crate::physics::State;

/// Vector-space operations needed by the Runge-Kutta stages.
pub trait RkState: Clone {
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    /// `self *= a`
    fn scale(&mut self, a: f64);
    /// First non-finite interior entry, if any.
    fn first_non_finite(&self) -> Option<usize>;
}

/// 1D moments per cell and variable: `u` holds cell averages, `v` the first
/// moments `(1/dx) int u (x - x_i)/dx dx`. Both include ghost cells.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentField1<const N: usize> {
    pub grid: Grid1,
    pub u: Vec<State<N>>,
    pub v: Vec<State<N>>,
}

impl<const N: usize> MomentField1<N> {
    pub fn zeros(grid: Grid1) -> Self {
        MomentField1 {
            grid,
            u: vec![[0.0; N]; grid.len()],
            v: vec![[0.0; N]; grid.len()],
        }
    }

    pub fn interior_u(&self) -> &[State<N>] {
        &self.u[self.grid.interior()]
    }

    /// Cell averages of one variable over the interior.
    pub fn component(&self, var: usize) -> Vec<f64> {
        self.interior_u().iter().map(|s| s[var]).collect()
    }

    /// `sum u dx` per variable over the interior.
    pub fn total(&self) -> State<N> {
        let mut t = [0.0; N];
        for s in self.interior_u() {
            for k in 0..N {
                t[k] += s[k] * self.grid.dx;
            }
        }
        t
    }
}

/// 2D moments: `u` averages, `v` x-moments, `w` y-moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentField2<const N: usize> {
    pub grid: Grid2,
    pub u: Vec<State<N>>,
    pub v: Vec<State<N>>,
    pub w: Vec<State<N>>,
}

impl<const N: usize> MomentField2<N> {
    pub fn zeros(grid: Grid2) -> Self {
        let n = grid.len();
        MomentField2 {
            grid,
            u: vec![[0.0; N]; n],
            v: vec![[0.0; N]; n],
            w: vec![[0.0; N]; n],
        }
    }

    /// Row-major (`x` fastest) interior averages of one variable.
    pub fn component(&self, var: usize) -> Vec<f64> {
        let g = &self.grid;
        let mut out = Vec::with_capacity(g.nx * g.ny);
        for j in 0..g.ny as isize {
            for i in 0..g.nx as isize {
                out.push(self.u[g.idx(i, j)][var]);
            }
        }
        out
    }

    pub fn total(&self) -> State<N> {
        let g = &self.grid;
        let mut t = [0.0; N];
        for j in 0..g.ny as isize {
            for i in 0..g.nx as isize {
                let s = &self.u[g.idx(i, j)];
                for k in 0..N {
                    t[k] += s[k] * g.cell_area();
                }
            }
        }
        t
    }
}

fn axpy_states<const N: usize>(y: &mut [State<N>], a: f64, x: &[State<N>]) {
    for (ys, xs) in y.iter_mut().zip(x) {
        for k in 0..N {
            ys[k] += a * xs[k];
        }
    }
}

fn scale_states<const N: usize>(y: &mut [State<N>], a: f64) {
    for ys in y.iter_mut() {
        for v in ys.iter_mut() {
            *v *= a;
        }
    }
}

fn non_finite<const N: usize>(
    arrays: &[&[State<N>]],
    interior: impl Fn(usize) -> bool,
) -> Option<usize> {
    for arr in arrays {
        for (k, s) in arr.iter().enumerate() {
            if interior(k) && s.iter().any(|v| !v.is_finite()) {
                return Some(k);
            }
        }
    }
    None
}

impl<const N: usize> RkState for MomentField1<N> {
    fn axpy(&mut self, a: f64, x: &Self) {
        axpy_states(&mut self.u, a, &x.u);
        axpy_states(&mut self.v, a, &x.v);
    }

    fn scale(&mut self, a: f64) {
        scale_states(&mut self.u, a);
        scale_states(&mut self.v, a);
    }

    fn first_non_finite(&self) -> Option<usize> {
        let r = self.grid.interior();
        non_finite(&[&self.u, &self.v], |k| r.contains(&k))
    }
}

impl<const N: usize> RkState for MomentField2<N> {
    fn axpy(&mut self, a: f64, x: &Self) {
        axpy_states(&mut self.u, a, &x.u);
        axpy_states(&mut self.v, a, &x.v);
        axpy_states(&mut self.w, a, &x.w);
    }

    fn scale(&mut self, a: f64) {
        scale_states(&mut self.u, a);
        scale_states(&mut self.v, a);
        scale_states(&mut self.w, a);
    }

    fn first_non_finite(&self) -> Option<usize> {
        let g = self.grid;
        non_finite(&[&self.u, &self.v, &self.w], |k| {
            let (i, j) = g.ij(k);
            g.is_interior(i, j)
        })
    }
}
