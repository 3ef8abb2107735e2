//! KXRCF troubled-cell detection.
//!
//! For an indicator variable `q` the cell value is
//! `|sum over inflow points of len (q_in - q_nb)| / (r^e |inflow boundary| max|q_in|)`
//! with the in-cell and neighbor traces taken from the linear
//! reconstruction, `r` the circumradius of the cell (half the width in 1D)
//! and `e` the configured exponent. A face is inflow when the mean of the
//! two cell-average transport velocities points into the cell. A cell is
//! troubled if the value exceeds the threshold for any indicator variable.
//! Only troubled cells get their first moments limited; interface values of
//! a cell are nonlinear when any cell of its stencil is troubled.

use crate::physics::{Axis, EquationModel, State, GAUSS_3};
use crate::reconstruct::{
    linear_interface, Kernel2, Side, Stencil1, BOTTOM, LEFT, N_INPUTS_2D, RIGHT, TOP,
};
use crate::state::{BoundaryKind, BoundarySpec1, BoundarySpec2, Grid2, MomentField1, MomentField2};

/// Below this cell scale the indicator is undefined and the cell is left
/// unflagged.
pub const VACUUM_LEVEL: f64 = 1e-13;

/// Default power of the circumradius in the normalization.
pub const KXRCF_EXPONENT: f64 = 2.0;

/// How cells are marked troubled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndicatorMode {
    Kxrcf {
        threshold: f64,
        exponent: f64,
    },
    /// Every cell troubled.
    ForceAll,
    /// No cell troubled: the purely linear scheme.
    ForceNone,
}

impl Default for IndicatorMode {
    fn default() -> Self {
        IndicatorMode::Kxrcf {
            threshold: 1.0,
            exponent: KXRCF_EXPONENT,
        }
    }
}

/// Flags over the full storage (ghosts included). `stencil[k]` is the
/// dilation of `troubled` by the reconstruction stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct TroubleMap {
    pub troubled: Vec<bool>,
    pub stencil: Vec<bool>,
    /// Number of flagged interior cells.
    pub count: usize,
    /// Number of interior cells eligible for flagging.
    pub total: usize,
}

impl TroubleMap {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count as f64 / self.total as f64
        }
    }

    pub fn any(&self) -> bool {
        self.count > 0
    }
}

#[inline]
fn kxrcf_ratio(jump: f64, measure: f64, norm: f64, scale: f64) -> f64 {
    if measure <= 0.0 || scale < VACUUM_LEVEL {
        0.0
    } else {
        jump.abs() / (norm * measure * scale)
    }
}

// ---------------------------------------------------------------- 1D

fn stencil_1d<const N: usize>(f: &MomentField1<N>, k: usize, var: usize) -> Stencil1 {
    Stencil1::new(
        [f.u[k - 1][var], f.u[k][var], f.u[k + 1][var]],
        [f.v[k - 1][var], f.v[k][var], f.v[k + 1][var]],
    )
}

/// Linear `(left, right)` traces of every variable for cells `-1..=n`.
fn linear_traces_1d<const N: usize>(f: &MomentField1<N>) -> Vec<(State<N>, State<N>)> {
    let g = f.grid;
    (-1..=g.n_cells as isize)
        .map(|i| {
            let k = g.idx(i);
            let mut l = [0.0; N];
            let mut r = [0.0; N];
            for var in 0..N {
                let s = stencil_1d(f, k, var);
                l[var] = linear_interface(&s, Side::Left);
                r[var] = linear_interface(&s, Side::Right);
            }
            (l, r)
        })
        .collect()
}

/// Raw KXRCF flags of the interior cells.
pub fn kxrcf_1d<M, const N: usize>(
    f: &MomentField1<N>,
    model: &M,
    threshold: f64,
    exponent: f64,
) -> Vec<bool>
where
    M: EquationModel<N> + ?Sized,
{
    let n = f.grid.n_cells;
    let norm = (0.5 * f.grid.dx).powf(exponent);
    let traces = linear_traces_1d(f);
    (0..n)
        .map(|i| {
            let (own_l, own_r) = &traces[i + 1];
            let nb_l = &traces[i].1;
            let nb_r = &traces[i + 2].0;
            // face velocity from the two cell averages, traces can overshoot
            let vel = |k: isize| model.transport_velocity(&f.u[f.grid.idx(k)], Axis::X);
            let own = vel(i as isize);
            let in_left = 0.5 * (own + vel(i as isize - 1)) >= 0.0;
            let in_right = 0.5 * (own + vel(i as isize + 1)) <= 0.0;
            model.indicator_variables().iter().any(|&q| {
                let mut jump = 0.0;
                let mut measure = 0.0;
                if in_left {
                    jump += own_l[q] - nb_l[q];
                    measure += 1.0;
                }
                if in_right {
                    jump += own_r[q] - nb_r[q];
                    measure += 1.0;
                }
                let scale = own_l[q].abs().max(own_r[q].abs());
                kxrcf_ratio(jump, measure, norm, scale) > threshold
            })
        })
        .collect()
}

/// Interior cell whose flag a (possibly ghost) 1D cell inherits.
fn flag_source_1d<const N: usize>(i: isize, n: isize, bc: &BoundarySpec1<N>) -> Option<isize> {
    let side = |kind: &BoundaryKind<N>, mirror: isize, nearest: isize| match kind {
        BoundaryKind::Periodic => Some(i.rem_euclid(n)),
        BoundaryKind::Reflective => Some(mirror),
        BoundaryKind::Inflow(_) => None,
        _ => Some(nearest),
    };
    if i < 0 {
        side(&bc.lo, -1 - i, 0)
    } else if i >= n {
        side(&bc.hi, 2 * n - 1 - i, n - 1)
    } else {
        Some(i)
    }
    .map(|k| k.clamp(0, n - 1))
}

pub fn trouble_map_1d<M, const N: usize>(
    f: &MomentField1<N>,
    model: &M,
    bc: &BoundarySpec1<N>,
    mode: IndicatorMode,
) -> TroubleMap
where
    M: EquationModel<N> + ?Sized,
{
    let g = f.grid;
    let n = g.n_cells;
    let raw = match mode {
        IndicatorMode::Kxrcf {
            threshold,
            exponent,
        } => kxrcf_1d(f, model, threshold, exponent),
        IndicatorMode::ForceAll => vec![true; n],
        IndicatorMode::ForceNone => vec![false; n],
    };
    let gh = g.n_ghost as isize;
    let mut troubled = vec![false; g.len()];
    for i in -gh..n as isize + gh {
        if let Some(src) = flag_source_1d(i, n as isize, bc) {
            troubled[g.idx(i)] = raw[src as usize];
        }
    }
    let mut stencil = troubled.clone();
    for k in 1..g.len() - 1 {
        stencil[k] = troubled[k - 1] || troubled[k] || troubled[k + 1];
    }
    let count = raw.iter().filter(|&&b| b).count();
    TroubleMap {
        troubled,
        stencil,
        count,
        total: n,
    }
}

// ---------------------------------------------------------------- 2D

/// Labels 1..9 as storage offsets, plus the first-moment label subset.
pub(crate) fn block_offsets(grid: &Grid2) -> [isize; 9] {
    let s = grid.stride() as isize;
    [-s - 1, -s, -s + 1, -1, 0, 1, s - 1, s, s + 1]
}

/// The 19 reconstruction inputs of variable `var` around storage cell `k`.
#[inline]
pub(crate) fn gather_2d<const N: usize>(
    f: &MomentField2<N>,
    off: &[isize; 9],
    k: usize,
    var: usize,
) -> [f64; N_INPUTS_2D] {
    let at = |o: isize| (k as isize + o) as usize;
    let mut s = [0.0; N_INPUTS_2D];
    for (slot, o) in off.iter().enumerate() {
        s[slot] = f.u[at(*o)][var];
    }
    for (slot, label) in [1usize, 3, 4, 5, 7].iter().enumerate() {
        s[9 + slot] = f.v[at(off[*label])][var];
        s[14 + slot] = f.w[at(off[*label])][var];
    }
    s
}

/// Cells that are flow cells (interior and not inside an obstacle).
pub fn fluid_mask<const N: usize>(grid: &Grid2, bc: &BoundarySpec2<N>) -> Vec<bool> {
    let mut m = vec![false; grid.len()];
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let solid = bc.obstacle.map(|o| o.is_solid(grid, i, j)).unwrap_or(false);
            m[grid.idx(i, j)] = !solid;
        }
    }
    m
}

/// Linear traces at the 12 edge points of cell `k`, all variables.
fn edge_traces<const N: usize>(
    f: &MomentField2<N>,
    kernel: &Kernel2,
    off: &[isize; 9],
    k: usize,
) -> [State<N>; 12] {
    let mut t = [[0.0; N]; 12];
    for var in 0..N {
        let s = gather_2d(f, off, k, var);
        for (p, tp) in t.iter_mut().enumerate() {
            tp[var] = kernel.linear_point(&s, p);
        }
    }
    t
}

/// Raw KXRCF flags over the storage; only `fluid` cells can be flagged.
pub fn kxrcf_2d<M, const N: usize>(
    f: &MomentField2<N>,
    model: &M,
    kernel: &Kernel2,
    fluid: &[bool],
    threshold: f64,
    exponent: f64,
) -> Vec<bool>
where
    M: EquationModel<N> + ?Sized,
{
    let g = f.grid;
    let off = block_offsets(&g);
    let s = g.stride();
    let norm = (0.5 * g.dx.hypot(g.dy)).powf(exponent);
    let w = GAUSS_3.weights;
    // traces for every cell that touches a fluid cell
    let mut traces: Vec<Option<[State<N>; 12]>> = vec![None; g.len()];
    for k in 0..g.len() {
        let touches = fluid[k]
            || [k.wrapping_sub(1), k + 1, k.wrapping_sub(s), k + s]
                .iter()
                .any(|&q| q < g.len() && fluid[q]);
        let (i, j) = g.ij(k);
        let inner = i >= -1 && j >= -1 && i <= g.nx as isize && j <= g.ny as isize;
        if touches && inner {
            traces[k] = Some(edge_traces(f, kernel, &off, k));
        }
    }
    let mut flags = vec![false; g.len()];
    for k in 0..g.len() {
        if !fluid[k] {
            continue;
        }
        let own = traces[k].as_ref().expect("fluid trace");
        let nb = |q: usize| traces[q].as_ref().expect("neighbor trace");
        // (own point, neighbor point, neighbor cell, axis, outward sign, face length)
        let faces = [
            (LEFT, RIGHT, k - 1, Axis::X, -1.0, g.dy),
            (RIGHT, LEFT, k + 1, Axis::X, 1.0, g.dy),
            (BOTTOM, TOP, k - s, Axis::Y, -1.0, g.dx),
            (TOP, BOTTOM, k + s, Axis::Y, 1.0, g.dx),
        ];
        flags[k] = model.indicator_variables().iter().any(|&q| {
            let mut jump = 0.0;
            let mut measure = 0.0;
            let mut scale = 0.0f64;
            for &(pa, pb, kn, axis, sign, len) in &faces {
                let other = nb(kn);
                let v = 0.5
                    * (model.transport_velocity(&f.u[k], axis)
                        + model.transport_velocity(&f.u[kn], axis));
                for m in 0..3 {
                    let a = &own[pa + m];
                    scale = scale.max(a[q].abs());
                    if sign * v <= 0.0 {
                        jump += w[m] * len * (a[q] - other[pb + m][q]);
                        measure += w[m] * len;
                    }
                }
            }
            kxrcf_ratio(jump, measure, norm, scale) > threshold
        });
    }
    flags
}

/// Interior cell whose flag a storage cell inherits, by boundary kind.
fn flag_source_2d<const N: usize>(
    grid: &Grid2,
    bc: &BoundarySpec2<N>,
    i: isize,
    j: isize,
) -> Option<(isize, isize)> {
    let map = |x: isize, n: isize, lo: &BoundaryKind<N>, hi: &BoundaryKind<N>| {
        let side = |kind: &BoundaryKind<N>, mirror: isize, nearest: isize| match kind {
            BoundaryKind::Periodic => Some(x.rem_euclid(n)),
            BoundaryKind::Reflective | BoundaryKind::DmrBottom { .. } => Some(mirror),
            BoundaryKind::Inflow(_) => None,
            _ => Some(nearest),
        };
        if x < 0 {
            side(lo, -1 - x, 0)
        } else if x >= n {
            side(hi, 2 * n - 1 - x, n - 1)
        } else {
            Some(x)
        }
        .map(|v| v.clamp(0, n - 1))
    };
    let si = map(i, grid.nx as isize, &bc.x_lo, &bc.x_hi)?;
    let sj = map(j, grid.ny as isize, &bc.y_lo, &bc.y_hi)?;
    Some((si, sj))
}

pub fn trouble_map_2d<M, const N: usize>(
    f: &MomentField2<N>,
    model: &M,
    bc: &BoundarySpec2<N>,
    kernel: &Kernel2,
    fluid: &[bool],
    mode: IndicatorMode,
) -> TroubleMap
where
    M: EquationModel<N> + ?Sized,
{
    let g = f.grid;
    let raw = match mode {
        IndicatorMode::Kxrcf {
            threshold,
            exponent,
        } => kxrcf_2d(f, model, kernel, fluid, threshold, exponent),
        IndicatorMode::ForceAll => fluid.to_vec(),
        IndicatorMode::ForceNone => vec![false; g.len()],
    };
    let gh = g.n_ghost as isize;
    let mut troubled = vec![false; g.len()];
    for j in -gh..g.ny as isize + gh {
        for i in -gh..g.nx as isize + gh {
            if let Some((si, sj)) = flag_source_2d(&g, bc, i, j) {
                troubled[g.idx(i, j)] = raw[g.idx(si, sj)];
            }
        }
    }
    let off = block_offsets(&g);
    let mut stencil = troubled.clone();
    for j in 1 - gh..g.ny as isize + gh - 1 {
        for i in 1 - gh..g.nx as isize + gh - 1 {
            let k = g.idx(i, j);
            stencil[k] = off.iter().any(|&o| troubled[(k as isize + o) as usize]);
        }
    }
    let total = fluid.iter().filter(|&&b| b).count();
    let count = raw.iter().zip(fluid).filter(|(&r, &fl)| r && fl).count();
    TroubleMap {
        troubled,
        stencil,
        count,
        total,
    }
}
