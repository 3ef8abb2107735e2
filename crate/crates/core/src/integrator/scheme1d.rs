//! Semi-discrete 1D moment scheme and its time loop.

use super::config::{RunSummary, SchemeConfig, StageStats, StepWeights, WeightSource};
use super::rk3::step_rk3;
use super::timestep::{clamp_dt, dt_1d};
use crate::error::{HwenoError, Result};
use crate::indicator::{trouble_map_1d, TroubleMap};
use crate::physics::{
    lax_friedrichs, wavespeed_bound, Axis, Eigensystem, EquationModel, State, GAUSS_LOBATTO_4,
};
use crate::reconstruct::{
    hweno_interface, linear_interface, linear_internal, modify_first_moment, Side, Stencil1,
};
use crate::state::{fill_ghosts_1d, BoundarySpec1, MomentField1};

pub struct Scheme1d<M, const N: usize> {
    pub model: M,
    pub bc: BoundarySpec1<N>,
    pub config: SchemeConfig,
    weights: WeightSource,
}

#[inline]
fn stencil_of<const N: usize>(u: &[State<N>; 3], v: &[State<N>; 3], var: usize) -> Stencil1 {
    Stencil1::new(
        [u[0][var], u[1][var], u[2][var]],
        [v[0][var], v[1][var], v[2][var]],
    )
}

#[inline]
fn project<const N: usize>(e: &Eigensystem<N>, s: &[State<N>; 3]) -> [State<N>; 3] {
    [
        e.to_characteristic(&s[0]),
        e.to_characteristic(&s[1]),
        e.to_characteristic(&s[2]),
    ]
}

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

impl<M: EquationModel<N>, const N: usize> Scheme1d<M, N> {
    pub fn new(model: M, bc: BoundarySpec1<N>, config: SchemeConfig) -> Result<Self> {
        config.validate()?;
        let weights = WeightSource::new(config.gamma)?;
        Ok(Scheme1d {
            model,
            bc,
            config,
            weights,
        })
    }

    /// Global Lax-Friedrichs speed over the interior averages.
    pub fn wave_speed(&self, f: &MomentField1<N>) -> Result<f64> {
        wavespeed_bound(f.interior_u(), &self.model, Axis::X)
    }

    /// Indicator flags; ghosts must be filled.
    pub fn flags(&self, f: &MomentField1<N>) -> TroubleMap {
        trouble_map_1d(f, &self.model, &self.bc, self.config.indicator())
    }

    /// Replace the first moments of troubled interior cells. All new values
    /// are computed from the unmodified data.
    pub fn limit(&self, f: &mut MomentField1<N>, map: &TroubleMap, w: &StepWeights) -> Result<()> {
        if !map.any() {
            return Ok(());
        }
        let g = f.grid;
        let mut updates = Vec::new();
        for k in g.interior() {
            if !map.troubled[k] {
                continue;
            }
            let u = [f.u[k - 1], f.u[k], f.u[k + 1]];
            let v = [f.v[k - 1], f.v[k], f.v[k + 1]];
            let new_v = if self.model.is_system() {
                let e = self.model.eigensystem(&u[1], &u[1], Axis::X)?;
                let (cu, cv) = (project(&e, &u), project(&e, &v));
                let mut cm = [0.0; N];
                for (var, m) in cm.iter_mut().enumerate() {
                    *m =
                        modify_first_moment(&stencil_of(&cu, &cv, var), &w.moment, self.config.eps);
                }
                e.to_physical(&cm)
            } else {
                let mut m = [0.0; N];
                for (var, x) in m.iter_mut().enumerate() {
                    *x = modify_first_moment(&stencil_of(&u, &v, var), &w.moment, self.config.eps);
                }
                m
            };
            updates.push((k, new_v));
        }
        for (k, v) in updates {
            f.v[k] = v;
        }
        Ok(())
    }

    /// Interface traces `(left, right)` of storage cell `k`.
    fn traces(
        &self,
        f: &MomentField1<N>,
        k: usize,
        nonlinear: bool,
        w: &StepWeights,
    ) -> Result<(State<N>, State<N>)> {
        let u = [f.u[k - 1], f.u[k], f.u[k + 1]];
        let v = [f.v[k - 1], f.v[k], f.v[k + 1]];
        let mut left = [0.0; N];
        let mut right = [0.0; N];
        if !nonlinear {
            for var in 0..N {
                let s = stencil_of(&u, &v, var);
                left[var] = linear_interface(&s, Side::Left);
                right[var] = linear_interface(&s, Side::Right);
            }
            return Ok((left, right));
        }
        let (g, eps) = (&w.interface_1d, self.config.eps);
        if self.model.is_system() {
            for (side, nb, out) in [
                (Side::Left, k - 1, &mut left),
                (Side::Right, k + 1, &mut right),
            ] {
                let e = self.model.eigensystem(&f.u[nb], &f.u[k], Axis::X)?;
                let (cu, cv) = (project(&e, &u), project(&e, &v));
                let mut c = [0.0; N];
                for (var, x) in c.iter_mut().enumerate() {
                    *x = hweno_interface(&stencil_of(&cu, &cv, var), side, g, eps);
                }
                *out = e.to_physical(&c);
            }
        } else {
            for var in 0..N {
                let s = stencil_of(&u, &v, var);
                left[var] = hweno_interface(&s, Side::Left, g, eps);
                right[var] = hweno_interface(&s, Side::Right, g, eps);
            }
        }
        Ok((left, right))
    }

    /// Time derivatives of all moments. Ghosts must be filled and troubled
    /// moments already limited.
    pub fn rhs(
        &self,
        f: &MomentField1<N>,
        map: &TroubleMap,
        w: &StepWeights,
    ) -> Result<(MomentField1<N>, StageStats)> {
        let g = f.grid;
        let n = g.n_cells as isize;
        let dx = g.dx;
        let alpha = self.wave_speed(f)?;
        let model = &self.model;
        let mut stats = StageStats::default();

        // traces of cells -1..=n
        let mut tr = Vec::with_capacity(g.n_cells + 2);
        for i in -1..=n {
            let k = g.idx(i);
            let (l, r) = self.traces(f, k, map.stencil[k], w)?;
            if l.iter().chain(&r).any(|x| !x.is_finite()) {
                return Err(HwenoError::DegenerateStencil { cell: k });
            }
            tr.push((l, r));
        }
        // flux through the left face of interior cell i is fluxes[i]
        let flux = |q: &State<N>| model.flux(q, Axis::X);
        let fluxes: Vec<State<N>> = (0..=g.n_cells)
            .map(|i| lax_friedrichs(&tr[i].1, &tr[i + 1].0, flux, alpha))
            .collect();

        let mut out = MomentField1::zeros(g);
        let wq = GAUSS_LOBATTO_4.weights;
        for i in 0..g.n_cells {
            let k = g.idx(i as isize);
            let (l, r) = &tr[i + 1];
            let mut inner = [[0.0; N]; 2];
            for var in 0..N {
                let s = Stencil1::new(
                    [f.u[k - 1][var], f.u[k][var], f.u[k + 1][var]],
                    [f.v[k - 1][var], f.v[k][var], f.v[k + 1][var]],
                );
                let [a, b] = linear_internal(&s);
                inner[0][var] = a;
                inner[1][var] = b;
            }
            track(model, l, true, &mut stats);
            track(model, r, true, &mut stats);
            for q in &inner {
                track(model, q, false, &mut stats);
            }
            let fl = flux(l);
            let fa = flux(&inner[0]);
            let fb = flux(&inner[1]);
            let fr = flux(r);
            let (lo, hi) = (&fluxes[i], &fluxes[i + 1]);
            for var in 0..N {
                out.u[k][var] = -(hi[var] - lo[var]) / dx;
                let volume = wq[0] * fl[var] + wq[1] * fa[var] + wq[2] * fb[var] + wq[3] * fr[var];
                out.v[k][var] = -(lo[var] + hi[var]) / (2.0 * dx) + volume / dx;
            }
        }
        Ok((out, stats))
    }

    /// Ghost fill, limiting, ghost refill, then the right-hand side.
    pub fn stage(
        &self,
        f: &mut MomentField1<N>,
        t: f64,
        map: &TroubleMap,
        w: &StepWeights,
    ) -> Result<(MomentField1<N>, StageStats)> {
        fill_ghosts_1d(f, &self.bc, &self.model, t)?;
        let fresh;
        let map = if self.config.reflag_each_stage {
            fresh = self.flags(f);
            &fresh
        } else {
            map
        };
        if map.any() {
            self.limit(f, map, w)?;
            fill_ghosts_1d(f, &self.bc, &self.model, t)?;
        }
        self.rhs(f, map, w)
    }

    /// One RK3 step of size `dt` from time `t` using a precomputed map.
    pub fn step(
        &mut self,
        f: &mut MomentField1<N>,
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

    /// Advance from `t0` to `t_end`.
    pub fn run(&mut self, f: &mut MomentField1<N>, t0: f64, t_end: f64) -> Result<RunSummary> {
        self.run_observed(f, t0, t_end, |_, _, _| {})
    }

    /// As [`Scheme1d::run`], calling `observe(step, t, map)` with the flags
    /// used for each step.
    pub fn run_observed(
        &mut self,
        f: &mut MomentField1<N>,
        t0: f64,
        t_end: f64,
        mut observe: impl FnMut(usize, f64, &TroubleMap),
    ) -> Result<RunSummary> {
        if t_end < t0 {
            return Err(HwenoError::config("final time precedes start time"));
        }
        let mut summary = RunSummary {
            t_final: t0,
            ..Default::default()
        };
        let mut t = t0;
        while t < t_end {
            fill_ghosts_1d(f, &self.bc, &self.model, t)?;
            let map = self.flags(f);
            observe(summary.steps, t, &map);
            summary.flag_history.push(map.fraction());
            let alpha = self.wave_speed(f)?;
            let (dt, last) = clamp_dt(
                t,
                dt_1d(alpha, f.grid.dx, self.config.cfl, self.config.dt_mode),
                t_end,
            );
            let st = self.step(f, t, dt, &map)?;
            summary.stats = summary.stats.merge(st);
            summary.steps += 1;
            t = if last { t_end } else { t + dt };
        }
        fill_ghosts_1d(f, &self.bc, &self.model, t)?;
        summary.t_final = t;
        Ok(summary)
    }
}
