//! Semi-discrete 2D moment scheme and its time loop.

use rayon::prelude::*;

use super::config::{RunSummary, SchemeConfig, StageStats, StepWeights, WeightSource};
use super::rk3::step_rk3;
use super::timestep::{clamp_dt, dt_2d};
use crate::error::{HwenoError, Result};
use crate::indicator::{block_offsets, fluid_mask, gather_2d, trouble_map_2d, TroubleMap};
use crate::physics::{lax_friedrichs, Axis, Eigensystem, EquationModel, State, GAUSS_3};
use crate::reconstruct::{
    modify_first_moment, nonlinear_weights, Candidates2, Kernel2, Stencil1, BOTTOM, LEFT,
    N_INPUTS_2D, RIGHT, TOP,
};
use crate::state::{fill_ghosts_2d, BoundarySpec2, MomentField2};

/// Reconstructed data of one cell.
#[derive(Debug, Clone, Copy)]
struct CellData<const N: usize> {
    /// Values at the 12 edge points in the kernel's point layout.
    edge: [State<N>; 12],
    /// `sum w_k w_l f(u_kl)` and the same for `g` (fluid cells only).
    vol_f: State<N>,
    vol_g: State<N>,
    stats: StageStats,
}

pub struct Scheme2d<M, const N: usize> {
    pub model: M,
    pub bc: BoundarySpec2<N>,
    pub config: SchemeConfig,
    pub kernel: Kernel2,
    /// Interior cells outside any obstacle.
    pub fluid: Vec<bool>,
    fluid_cells: Vec<usize>,
    /// Cells whose traces are needed: fluid cells and their face neighbors.
    trace_cells: Vec<usize>,
    trace_pos: Vec<u32>,
    x_faces: Vec<usize>,
    y_faces: Vec<usize>,
    weights: WeightSource,
}

const NONE: u32 = u32::MAX;

#[inline]
fn track<M: EquationModel<N> + ?Sized, const N: usize>(
    model: &M,
    q: &State<N>,
    interface: bool,
    stats: &mut StageStats,
) {
    if let Some((rho, p)) = model.density_pressure(q) {
        stats.record(rho, p, interface);
    }
}

#[inline]
fn project3<const N: usize>(e: &Eigensystem<N>, s: [State<N>; 3]) -> [State<N>; 3] {
    s.map(|q| e.to_characteristic(&q))
}

#[inline]
fn modify_along<const N: usize>(
    u: [State<N>; 3],
    m: [State<N>; 3],
    e: Option<&Eigensystem<N>>,
    w: &StepWeights,
    eps: f64,
) -> State<N> {
    let (u, m) = match e {
        Some(e) => (project3(e, u), project3(e, m)),
        None => (u, m),
    };
    let mut out = [0.0; N];
    for (var, o) in out.iter_mut().enumerate() {
        let s = Stencil1::new(
            [u[0][var], u[1][var], u[2][var]],
            [m[0][var], m[1][var], m[2][var]],
        );
        *o = modify_first_moment(&s, &w.moment, eps);
    }
    match e {
        Some(e) => e.to_physical(&out),
        None => out,
    }
}

impl<M: EquationModel<N>, const N: usize> Scheme2d<M, N> {
    pub fn new(
        model: M,
        bc: BoundarySpec2<N>,
        config: SchemeConfig,
        grid: &crate::state::Grid2,
    ) -> Result<Self> {
        config.validate()?;
        bc.validate(grid)?;
        let kernel = Kernel2::new(grid.dx, grid.dy)?;
        let fluid = fluid_mask(grid, &bc);
        let s = grid.stride();
        let fluid_cells: Vec<usize> = (0..grid.len()).filter(|&k| fluid[k]).collect();
        let mut need = vec![false; grid.len()];
        for &k in &fluid_cells {
            for q in [k, k - 1, k + 1, k - s, k + s] {
                need[q] = true;
            }
        }
        let trace_cells: Vec<usize> = (0..grid.len()).filter(|&k| need[k]).collect();
        let mut trace_pos = vec![NONE; grid.len()];
        for (p, &k) in trace_cells.iter().enumerate() {
            trace_pos[k] = p as u32;
        }
        let x_faces = (0..grid.len())
            .filter(|&k| k >= 1 && (fluid[k] || fluid[k - 1]))
            .collect();
        let y_faces = (0..grid.len())
            .filter(|&k| k >= s && (fluid[k] || fluid[k - s]))
            .collect();
        let weights = WeightSource::new(config.gamma)?;
        Ok(Scheme2d {
            model,
            bc,
            config,
            kernel,
            fluid,
            fluid_cells,
            trace_cells,
            trace_pos,
            x_faces,
            y_faces,
            weights,
        })
    }

    /// Global `(alpha, beta)` over the flow cells.
    pub fn wave_speeds(&self, f: &MomentField2<N>) -> Result<(f64, f64)> {
        if self.fluid_cells.is_empty() {
            return Err(HwenoError::config("no flow cells"));
        }
        let mut a = 0.0f64;
        let mut b = 0.0f64;
        for &k in &self.fluid_cells {
            a = a.max(self.model.spectral_radius(&f.u[k], Axis::X));
            b = b.max(self.model.spectral_radius(&f.u[k], Axis::Y));
        }
        Ok((a, b))
    }

    pub fn flags(&self, f: &MomentField2<N>) -> TroubleMap {
        trouble_map_2d(
            f,
            &self.model,
            &self.bc,
            &self.kernel,
            &self.fluid,
            self.config.indicator(),
        )
    }

    /// Replace the first moments of troubled flow cells, direction by
    /// direction, from the unmodified data.
    pub fn limit(&self, f: &mut MomentField2<N>, map: &TroubleMap, w: &StepWeights) -> Result<()> {
        if !map.any() {
            return Ok(());
        }
        let s = f.grid.stride();
        let eps = self.config.eps;
        let system = self.model.is_system();
        let troubled: Vec<usize> = self
            .fluid_cells
            .iter()
            .copied()
            .filter(|&k| map.troubled[k])
            .collect();
        let fr = &*f;
        let updates: Vec<(usize, State<N>, State<N>)> = troubled
            .par_iter()
            .map(|&k| -> Result<(usize, State<N>, State<N>)> {
                let (ex, ey) = if system {
                    (
                        Some(self.model.eigensystem(&fr.u[k], &fr.u[k], Axis::X)?),
                        Some(self.model.eigensystem(&fr.u[k], &fr.u[k], Axis::Y)?),
                    )
                } else {
                    (None, None)
                };
                let v = modify_along(
                    [fr.u[k - 1], fr.u[k], fr.u[k + 1]],
                    [fr.v[k - 1], fr.v[k], fr.v[k + 1]],
                    ex.as_ref(),
                    w,
                    eps,
                );
                let wm = modify_along(
                    [fr.u[k - s], fr.u[k], fr.u[k + s]],
                    [fr.w[k - s], fr.w[k], fr.w[k + s]],
                    ey.as_ref(),
                    w,
                    eps,
                );
                Ok((k, v, wm))
            })
            .collect::<Result<_>>()?;
        for (k, v, wm) in updates {
            f.v[k] = v;
            f.w[k] = wm;
        }
        Ok(())
    }

    fn cell_data(
        &self,
        f: &MomentField2<N>,
        off: &[isize; 9],
        k: usize,
        nonlinear: bool,
        w: &StepWeights,
    ) -> Result<CellData<N>> {
        let kernel = &self.kernel;
        let mut inputs = [[0.0; N_INPUTS_2D]; N];
        for (var, inp) in inputs.iter_mut().enumerate() {
            *inp = gather_2d(f, off, k, var);
        }
        let mut edge = [[0.0; N]; 12];
        if !nonlinear {
            for var in 0..N {
                for (p, e) in edge.iter_mut().enumerate() {
                    e[var] = kernel.linear_point(&inputs[var], p);
                }
            }
        } else {
            let g = &w.interface_2d;
            let eps = self.config.eps;
            let phys: [Candidates2; N] =
                std::array::from_fn(|var| kernel.coefficients(&inputs[var]));
            if self.model.is_system() {
                let s = f.grid.stride();
                for (first, nb, axis) in [
                    (LEFT, k - 1, Axis::X),
                    (RIGHT, k + 1, Axis::X),
                    (BOTTOM, k - s, Axis::Y),
                    (TOP, k + s, Axis::Y),
                ] {
                    let e = self.model.eigensystem(&f.u[nb], &f.u[k], axis)?;
                    let mut chars = [[0.0; N]; 3];
                    for m in 0..N {
                        let mut c = Candidates2::combination(&phys, &e.left[m]);
                        kernel.update_smoothness(&mut c);
                        let omega = nonlinear_weights(&c.beta, g, eps);
                        for (q, ch) in chars.iter_mut().enumerate() {
                            ch[m] = kernel.hweno_with_weights(&c, first + q, &omega, g);
                        }
                    }
                    for q in 0..3 {
                        edge[first + q] = e.to_physical(&chars[q]);
                    }
                }
            } else {
                for var in 0..N {
                    let mut c = phys[var];
                    kernel.update_smoothness(&mut c);
                    let omega = nonlinear_weights(&c.beta, g, eps);
                    for (p, e) in edge.iter_mut().enumerate() {
                        e[var] = kernel.hweno_with_weights(&c, p, &omega, g);
                    }
                }
            }
        }
        let mut data = CellData {
            edge,
            vol_f: [0.0; N],
            vol_g: [0.0; N],
            stats: StageStats::default(),
        };
        if edge.iter().flatten().any(|x| !x.is_finite()) {
            return Err(HwenoError::DegenerateStencil { cell: k });
        }
        if self.fluid[k] {
            let mut inner = [[0.0; N]; 9];
            for var in 0..N {
                let vals = kernel.linear_interior(&inputs[var]);
                for (q, x) in vals.iter().enumerate() {
                    inner[q][var] = *x;
                }
            }
            let wq = GAUSS_3.weights;
            for (q, val) in inner.iter().enumerate() {
                let wt = wq[q % 3] * wq[q / 3];
                let fx = self.model.flux(val, Axis::X);
                let gy = self.model.flux(val, Axis::Y);
                for var in 0..N {
                    data.vol_f[var] += wt * fx[var];
                    data.vol_g[var] += wt * gy[var];
                }
                track(&self.model, val, false, &mut data.stats);
            }
            for e in &edge {
                track(&self.model, e, true, &mut data.stats);
            }
        }
        Ok(data)
    }

    /// Time derivatives of all moments. Ghosts must be filled and troubled
    /// moments already limited.
    pub fn rhs(
        &self,
        f: &MomentField2<N>,
        map: &TroubleMap,
        w: &StepWeights,
    ) -> Result<(MomentField2<N>, StageStats)> {
        let g = f.grid;
        let s = g.stride();
        let off = block_offsets(&g);
        let (alpha, beta) = self.wave_speeds(f)?;
        let data: Vec<CellData<N>> = self
            .trace_cells
            .par_iter()
            .map(|&k| self.cell_data(f, &off, k, map.stencil[k], w))
            .collect::<Result<_>>()?;
        let at = |k: usize| &data[self.trace_pos[k] as usize];
        let model = &self.model;

        let face_flux =
            |faces: &[usize], lo_off: usize, axis: Axis, speed: f64, lo_pt: usize, hi_pt: usize| {
                faces
                    .par_iter()
                    .map(|&k| {
                        let minus = &at(k - lo_off).edge;
                        let plus = &at(k).edge;
                        let mut out = [[0.0; N]; 3];
                        for q in 0..3 {
                            out[q] = lax_friedrichs(
                                &minus[hi_pt + q],
                                &plus[lo_pt + q],
                                |u| model.flux(u, axis),
                                speed,
                            );
                        }
                        out
                    })
                    .collect::<Vec<_>>()
            };
        let xf = face_flux(&self.x_faces, 1, Axis::X, alpha, LEFT, RIGHT);
        let yf = face_flux(&self.y_faces, s, Axis::Y, beta, BOTTOM, TOP);
        let mut xpos = vec![NONE; g.len()];
        for (p, &k) in self.x_faces.iter().enumerate() {
            xpos[k] = p as u32;
        }
        let mut ypos = vec![NONE; g.len()];
        for (p, &k) in self.y_faces.iter().enumerate() {
            ypos[k] = p as u32;
        }

        let (dx, dy) = (g.dx, g.dy);
        let wq = GAUSS_3.weights;
        let nodes = GAUSS_3.nodes;
        let mut out = MomentField2::zeros(g);
        let mut stats = StageStats::default();
        for &k in &self.fluid_cells {
            let d = at(k);
            stats = stats.merge(d.stats);
            let fl = &xf[xpos[k] as usize];
            let fr = &xf[xpos[k + 1] as usize];
            let gb = &yf[ypos[k] as usize];
            let gt = &yf[ypos[k + s] as usize];
            for var in 0..N {
                let (mut dfx, mut sfx, mut dgy, mut sgy, mut xi_dg, mut eta_df) =
                    (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
                for q in 0..3 {
                    let df = fr[q][var] - fl[q][var];
                    let dg = gt[q][var] - gb[q][var];
                    dfx += wq[q] * df;
                    sfx += wq[q] * (fr[q][var] + fl[q][var]);
                    dgy += wq[q] * dg;
                    sgy += wq[q] * (gt[q][var] + gb[q][var]);
                    xi_dg += wq[q] * nodes[q] * dg;
                    eta_df += wq[q] * nodes[q] * df;
                }
                out.u[k][var] = -dfx / dx - dgy / dy;
                out.v[k][var] = -sfx / (2.0 * dx) + d.vol_f[var] / dx - xi_dg / dy;
                out.w[k][var] = -eta_df / dx - sgy / (2.0 * dy) + d.vol_g[var] / dy;
            }
        }
        Ok((out, stats))
    }

    pub fn stage(
        &self,
        f: &mut MomentField2<N>,
        t: f64,
        map: &TroubleMap,
        w: &StepWeights,
    ) -> Result<(MomentField2<N>, StageStats)> {
        fill_ghosts_2d(f, &self.bc, &self.model, t)?;
        let fresh;
        let map = if self.config.reflag_each_stage {
            fresh = self.flags(f);
            &fresh
        } else {
            map
        };
        if map.any() {
            self.limit(f, map, w)?;
            fill_ghosts_2d(f, &self.bc, &self.model, t)?;
        }
        self.rhs(f, map, w)
    }

    pub fn step(
        &mut self,
        f: &mut MomentField2<N>,
        t: f64,
        dt: f64,
        map: &TroubleMap,
    ) -> Result<StageStats> {
        let w = self.weights.next_step();
        let mut stats = StageStats::default();
        let times = [t, t + dt, t + 0.5 * dt];
        step_rk3(f, dt, t, |s, k| {
            let (r, st) = self.stage(s, times[k], map, &w)?;
            stats = stats.merge(st);
            Ok(r)
        })?;
        Ok(stats)
    }

    pub fn run(&mut self, f: &mut MomentField2<N>, t0: f64, t_end: f64) -> Result<RunSummary> {
        self.run_observed(f, t0, t_end, |_, _, _| {})
    }

    pub fn run_observed(
        &mut self,
        f: &mut MomentField2<N>,
        t0: f64,
        t_end: f64,
        mut observe: impl FnMut(usize, f64, &TroubleMap),
    ) -> Result<RunSummary> {
        if t_end < t0 {
            return Err(HwenoError::config("final time precedes start time"));
        }
        let g = f.grid;
        let mut summary = RunSummary {
            t_final: t0,
            ..Default::default()
        };
        let mut t = t0;
        while t < t_end {
            fill_ghosts_2d(f, &self.bc, &self.model, t)?;
            let map = self.flags(f);
            observe(summary.steps, t, &map);
            summary.flag_history.push(map.fraction());
            let (a, b) = self.wave_speeds(f)?;
            let dt = dt_2d(a, b, g.dx, g.dy, self.config.cfl, self.config.dt_mode);
            let (dt, last) = clamp_dt(t, dt, t_end);
            let st = self.step(f, t, dt, &map)?;
            summary.stats = summary.stats.merge(st);
            summary.steps += 1;
            t = if last { t_end } else { t + dt };
        }
        fill_ghosts_2d(f, &self.bc, &self.model, t)?;
        summary.t_final = t;
        Ok(summary)
    }
}
