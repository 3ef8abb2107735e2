//! Ghost-cell realizations of the boundary conditions.
//!
//! Mirroring a cell across a wall normal to `x` maps the averages through
//! the model's reflection signs `S` (normal momentum negated) and the
//! moments as `v -> -S v`, `w -> S w`, since `(x - x_i)/dx` changes sign
//! under the mirror. For the negated momentum the two sign flips cancel.

use super::field::{MomentField1, MomentField2};
use super::grid::{Grid1, Grid2};
use crate::error::{HwenoError, Result};
use crate::physics::{Axis, EquationModel, State};

/// Bottom-wall x-coordinate where the double-Mach reflecting wall starts.
pub const DMR_SHOCK_X0: f64 = 1.0 / 6.0;

/// x-position of the Mach-10 shock of the double-Mach problem at height `y`
/// and time `t` (60 degree incline, shock speed 10).
pub fn dmr_shock_x(y: f64, t: f64) -> f64 {
    DMR_SHOCK_X0 + (y + 20.0 * t) / 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind<const N: usize> {
    Periodic,
    Reflective,
    /// Fixed state; its first moments are zero.
    Inflow(State<N>),
    /// Zero-gradient: ghosts copy the nearest interior cell.
    Outflow,
    /// Double-Mach bottom: post-shock state for `x < 1/6`, wall beyond.
    DmrBottom {
        post: State<N>,
    },
    /// Double-Mach top: exact shock motion.
    DmrTop {
        post: State<N>,
        pre: State<N>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec1<const N: usize> {
    pub lo: BoundaryKind<N>,
    pub hi: BoundaryKind<N>,
}

/// Solid region carved out of a 2D grid. The wall faces must fall on cell
/// faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    /// Forward-facing step occupying `x > x0, y < height`.
    Step { x0: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec2<const N: usize> {
    pub x_lo: BoundaryKind<N>,
    pub x_hi: BoundaryKind<N>,
    pub y_lo: BoundaryKind<N>,
    pub y_hi: BoundaryKind<N>,
    pub obstacle: Option<Obstacle>,
}

fn is_dmr<const N: usize>(k: &BoundaryKind<N>) -> bool {
    matches!(
        k,
        BoundaryKind::DmrBottom { .. } | BoundaryKind::DmrTop { .. }
    )
}

fn check_pair<const N: usize>(a: &BoundaryKind<N>, b: &BoundaryKind<N>, dir: &str) -> Result<()> {
    let pa = matches!(a, BoundaryKind::Periodic);
    let pb = matches!(b, BoundaryKind::Periodic);
    if pa != pb {
        return Err(HwenoError::config(format!(
            "periodic boundary in {dir} must be paired"
        )));
    }
    Ok(())
}

impl<const N: usize> BoundarySpec1<N> {
    pub fn periodic() -> Self {
        BoundarySpec1 {
            lo: BoundaryKind::Periodic,
            hi: BoundaryKind::Periodic,
        }
    }

    pub fn validate(&self, grid: &Grid1) -> Result<()> {
        check_pair(&self.lo, &self.hi, "x")?;
        if is_dmr(&self.lo) || is_dmr(&self.hi) {
            return Err(HwenoError::config("double-Mach boundaries are 2D only"));
        }
        if grid.n_cells < grid.n_ghost {
            return Err(HwenoError::config("grid has fewer cells than ghost layers"));
        }
        Ok(())
    }
}

impl<const N: usize> BoundarySpec2<N> {
    pub fn periodic() -> Self {
        BoundarySpec2 {
            x_lo: BoundaryKind::Periodic,
            x_hi: BoundaryKind::Periodic,
            y_lo: BoundaryKind::Periodic,
            y_hi: BoundaryKind::Periodic,
            obstacle: None,
        }
    }

    pub fn validate(&self, grid: &Grid2) -> Result<()> {
        check_pair(&self.x_lo, &self.x_hi, "x")?;
        check_pair(&self.y_lo, &self.y_hi, "y")?;
        if is_dmr(&self.x_lo) || is_dmr(&self.x_hi) {
            return Err(HwenoError::config("double-Mach boundaries only apply in y"));
        }
        if matches!(self.y_lo, BoundaryKind::DmrTop { .. })
            || matches!(self.y_hi, BoundaryKind::DmrBottom { .. })
        {
            return Err(HwenoError::config("double-Mach boundary on the wrong side"));
        }
        if grid.nx < grid.n_ghost || grid.ny < grid.n_ghost {
            return Err(HwenoError::config("grid has fewer cells than ghost layers"));
        }
        if let Some(ob) = &self.obstacle {
            ob.faces(grid)?;
        }
        Ok(())
    }
}

impl Obstacle {
    /// First solid column and first fluid row above the step.
    pub fn faces(&self, grid: &Grid2) -> Result<(isize, isize)> {
        match *self {
            Obstacle::Step { x0, height } => {
                let fi = (x0 - grid.x_lo) / grid.dx;
                let fj = (height - grid.y_lo) / grid.dy;
                let (ri, rj) = (fi.round(), fj.round());
                if (fi - ri).abs() > 1e-8 || (fj - rj).abs() > 1e-8 {
                    return Err(HwenoError::config("step faces must lie on cell faces"));
                }
                let (ri, rj) = (ri as isize, rj as isize);
                if ri < 1 || ri >= grid.nx as isize || rj < 1 || rj + 2 > grid.ny as isize {
                    return Err(HwenoError::config("step does not fit the grid"));
                }
                Ok((ri, rj))
            }
        }
    }

    pub fn is_solid(&self, grid: &Grid2, i: isize, j: isize) -> bool {
        match *self {
            Obstacle::Step { x0, height } => {
                let (x, y) = grid.center(i, j);
                x > x0 && y < height
            }
        }
    }
}

#[inline]
fn mul<const N: usize>(s: &State<N>, a: &State<N>, factor: f64) -> State<N> {
    let mut o = [0.0; N];
    for k in 0..N {
        o[k] = factor * s[k] * a[k];
    }
    o
}

/// Populate the ghost cells of a 1D field.
pub fn fill_ghosts_1d<M, const N: usize>(
    field: &mut MomentField1<N>,
    bc: &BoundarySpec1<N>,
    model: &M,
    _t: f64,
) -> Result<()>
where
    M: EquationModel<N> + ?Sized,
{
    let grid = field.grid;
    bc.validate(&grid)?;
    let n = grid.n_cells as isize;
    let s = model.reflection_signs(Axis::X);
    for m in 0..grid.n_ghost as isize {
        for (ghost, kind, mirror, nearest) in
            [(-1 - m, &bc.lo, m, 0), (n + m, &bc.hi, n - 1 - m, n - 1)]
        {
            let dst = grid.idx(ghost);
            match kind {
                BoundaryKind::Periodic => {
                    let src = grid.idx(ghost.rem_euclid(n));
                    field.u[dst] = field.u[src];
                    field.v[dst] = field.v[src];
                }
                BoundaryKind::Reflective => {
                    let src = grid.idx(mirror);
                    field.u[dst] = mul(&s, &field.u[src], 1.0);
                    field.v[dst] = mul(&s, &field.v[src], -1.0);
                }
                BoundaryKind::Outflow => {
                    let src = grid.idx(nearest);
                    field.u[dst] = field.u[src];
                    field.v[dst] = field.v[src];
                }
                BoundaryKind::Inflow(state) => {
                    field.u[dst] = *state;
                    field.v[dst] = [0.0; N];
                }
                BoundaryKind::DmrBottom { .. } | BoundaryKind::DmrTop { .. } => {
                    return Err(HwenoError::config("double-Mach boundaries are 2D only"));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Mirror {
    X,
    Y,
    Point,
}

fn copy_mirrored<const N: usize>(
    field: &mut MomentField2<N>,
    dst: usize,
    src: usize,
    mirror: Mirror,
    sx: &State<N>,
    sy: &State<N>,
) {
    let (u, v, w) = (field.u[src], field.v[src], field.w[src]);
    let (a, b, c) = match mirror {
        Mirror::X => (mul(sx, &u, 1.0), mul(sx, &v, -1.0), mul(sx, &w, 1.0)),
        Mirror::Y => (mul(sy, &u, 1.0), mul(sy, &v, 1.0), mul(sy, &w, -1.0)),
        Mirror::Point => {
            let sxy = mul(sx, sy, 1.0);
            (mul(&sxy, &u, 1.0), mul(&sxy, &v, -1.0), mul(&sxy, &w, -1.0))
        }
    };
    field.u[dst] = a;
    field.v[dst] = b;
    field.w[dst] = c;
}

fn set_state<const N: usize>(field: &mut MomentField2<N>, dst: usize, state: &State<N>) {
    field.u[dst] = *state;
    field.v[dst] = [0.0; N];
    field.w[dst] = [0.0; N];
}

fn copy_cell<const N: usize>(field: &mut MomentField2<N>, dst: usize, src: usize) {
    field.u[dst] = field.u[src];
    field.v[dst] = field.v[src];
    field.w[dst] = field.w[src];
}

/// Populate the ghost cells (and wall images inside an obstacle) of a 2D
/// field. `x` sides are filled first over interior rows, then `y` sides over
/// the full padded width, so corner ghosts are consistent.
pub fn fill_ghosts_2d<M, const N: usize>(
    field: &mut MomentField2<N>,
    bc: &BoundarySpec2<N>,
    model: &M,
    t: f64,
) -> Result<()>
where
    M: EquationModel<N> + ?Sized,
{
    let grid = field.grid;
    bc.validate(&grid)?;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let g = grid.n_ghost as isize;
    let sx = model.reflection_signs(Axis::X);
    let sy = model.reflection_signs(Axis::Y);

    for j in 0..ny {
        for m in 0..g {
            for (gi, kind, mirror, nearest) in [
                (-1 - m, &bc.x_lo, m, 0),
                (nx + m, &bc.x_hi, nx - 1 - m, nx - 1),
            ] {
                let dst = grid.idx(gi, j);
                match kind {
                    BoundaryKind::Periodic => copy_cell(field, dst, grid.idx(gi.rem_euclid(nx), j)),
                    BoundaryKind::Reflective => {
                        copy_mirrored(field, dst, grid.idx(mirror, j), Mirror::X, &sx, &sy)
                    }
                    BoundaryKind::Outflow => copy_cell(field, dst, grid.idx(nearest, j)),
                    BoundaryKind::Inflow(s) => set_state(field, dst, s),
                    _ => return Err(HwenoError::config("double-Mach boundaries only apply in y")),
                }
            }
        }
    }

    for i in -g..nx + g {
        let (xc, _) = grid.center(i, 0);
        for m in 0..g {
            for (gj, kind, mirror, nearest) in [
                (-1 - m, &bc.y_lo, m, 0),
                (ny + m, &bc.y_hi, ny - 1 - m, ny - 1),
            ] {
                let dst = grid.idx(i, gj);
                match kind {
                    BoundaryKind::Periodic => copy_cell(field, dst, grid.idx(i, gj.rem_euclid(ny))),
                    BoundaryKind::Reflective => {
                        copy_mirrored(field, dst, grid.idx(i, mirror), Mirror::Y, &sx, &sy)
                    }
                    BoundaryKind::Outflow => copy_cell(field, dst, grid.idx(i, nearest)),
                    BoundaryKind::Inflow(s) => set_state(field, dst, s),
                    BoundaryKind::DmrBottom { post } => {
                        if xc < DMR_SHOCK_X0 {
                            set_state(field, dst, post);
                        } else {
                            copy_mirrored(field, dst, grid.idx(i, mirror), Mirror::Y, &sx, &sy);
                        }
                    }
                    BoundaryKind::DmrTop { post, pre } => {
                        let (_, yc) = grid.center(i, gj);
                        let s = if xc < dmr_shock_x(yc, t) { post } else { pre };
                        set_state(field, dst, s);
                    }
                }
            }
        }
    }

    if let Some(ob) = &bc.obstacle {
        let (fi, fj) = ob.faces(&grid)?;
        for j in 0..fj {
            for i in fi..nx {
                let dxw = i - fi;
                let dyw = fj - 1 - j;
                if dxw >= g && dyw >= g {
                    continue;
                }
                let dst = grid.idx(i, j);
                if dyw < dxw {
                    copy_mirrored(field, dst, grid.idx(i, fj + dyw), Mirror::Y, &sx, &sy);
                } else if dxw < dyw {
                    copy_mirrored(field, dst, grid.idx(fi - 1 - dxw, j), Mirror::X, &sx, &sy);
                } else {
                    let src = grid.idx(fi - 1 - dxw, fj + dyw);
                    copy_mirrored(field, dst, src, Mirror::Point, &sx, &sy);
                }
            }
        }
    }
    Ok(())
}
