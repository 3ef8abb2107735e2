use super::field::{MomentField1, MomentField2};
use super::grid::{Grid1, Grid2};
use crate::physics::{State, GAUSS_5};

/// Initial moments by 5-point Gauss-Legendre quadrature on every interior
/// cell. Ghosts are left zero.
pub fn init_moments_1d<const N: usize>(
    u0: impl Fn(f64) -> State<N>,
    grid: Grid1,
) -> MomentField1<N> {
    let mut field = MomentField1::zeros(grid);
    for i in 0..grid.n_cells as isize {
        let xc = grid.center(i);
        let mut u = [0.0; N];
        let mut v = [0.0; N];
        for (s, w) in GAUSS_5.nodes.iter().zip(&GAUSS_5.weights) {
            let q = u0(xc + s * grid.dx);
            for k in 0..N {
                u[k] += w * q[k];
                v[k] += w * q[k] * s;
            }
        }
        let k = grid.idx(i);
        field.u[k] = u;
        field.v[k] = v;
    }
    field
}

/// Tensor-product 5x5 Gauss initialization for 2D fields.
pub fn init_moments_2d<const N: usize>(
    u0: impl Fn(f64, f64) -> State<N>,
    grid: Grid2,
) -> MomentField2<N> {
    let mut field = MomentField2::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let (xc, yc) = grid.center(i, j);
            let mut u = [0.0; N];
            let mut v = [0.0; N];
            let mut w = [0.0; N];
            for (sy, wy) in GAUSS_5.nodes.iter().zip(&GAUSS_5.weights) {
                for (sx, wx) in GAUSS_5.nodes.iter().zip(&GAUSS_5.weights) {
                    let q = u0(xc + sx * grid.dx, yc + sy * grid.dy);
                    let wt = wx * wy;
                    for k in 0..N {
                        u[k] += wt * q[k];
                        v[k] += wt * q[k] * sx;
                        w[k] += wt * q[k] * sy;
                    }
                }
            }
            let k = grid.idx(i, j);
            field.u[k] = u;
            field.v[k] = v;
            field.w[k] = w;
        }
    }
    field
}
