//! The registered test problems and a dimension-independent view of their
//! solutions.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use super::exact::{burgers_sine, burgers_sine_2d, RiemannSolution};
use crate::error::{HwenoError, Result};
use crate::integrator::{RunSummary, Scheme1d, Scheme2d, SchemeConfig};
use crate::physics::{Burgers, EquationModel, Euler1d, Euler2d, State, GAUSS_5};
use crate::state::{
    dmr_shock_x, init_moments_1d, init_moments_2d, BoundaryKind, BoundarySpec1, BoundarySpec2,
    Grid1, Grid2, Obstacle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Burgers1d,
    Euler1d,
    Burgers2d,
    Euler2d,
    Burgers1dShock,
    Lax,
    ShuOsher,
    Blast,
    Burgers2dShock,
    DoubleMach,
    ForwardStep,
}

/// Static facts about a problem.
#[derive(Debug, Clone, Copy)]
pub struct ProblemInfo {
    pub name: &'static str,
    pub dim: usize,
    pub summary: &'static str,
    pub t_end: f64,
    pub default_mesh: Mesh,
    /// Exact cell averages of the first variable are available.
    pub exact: bool,
    /// Smooth solution, suitable for convergence studies.
    pub smooth: bool,
}

/// Cells per direction (`ny = 1` in 1D).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
}

impl Mesh {
    pub fn new(nx: usize, ny: usize) -> Self {
        Mesh { nx, ny }
    }
}

impl std::fmt::Display for Mesh {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ny == 1 {
            write!(f, "{}", self.nx)
        } else {
            write!(f, "{}x{}", self.nx, self.ny)
        }
    }
}

impl ProblemId {
    pub const ALL: [ProblemId; 11] = [
        ProblemId::Burgers1d,
        ProblemId::Euler1d,
        ProblemId::Burgers2d,
        ProblemId::Euler2d,
        ProblemId::Burgers1dShock,
        ProblemId::Lax,
        ProblemId::ShuOsher,
        ProblemId::Blast,
        ProblemId::Burgers2dShock,
        ProblemId::DoubleMach,
        ProblemId::ForwardStep,
    ];

    pub fn info(self) -> ProblemInfo {
        let p = |name, dim, summary, t_end, nx, ny, exact, smooth| ProblemInfo {
            name,
            dim,
            summary,
            t_end,
            default_mesh: Mesh::new(nx, ny),
            exact,
            smooth,
        };
        match self {
            ProblemId::Burgers1d => p(
                "burgers1d",
                1,
                "Burgers, 0.5+sin(pi x) on [0,2], smooth",
                0.5 / PI,
                80,
                1,
                true,
                true,
            ),
            ProblemId::Euler1d => p(
                "euler1d",
                1,
                "Euler, advected density sine wave on [0,2]",
                2.0,
                80,
                1,
                true,
                true,
            ),
            ProblemId::Burgers2d => p(
                "burgers2d",
                2,
                "Burgers, 0.5+sin(pi(x+y)/2) on [0,4]^2, smooth",
                0.5 / PI,
                80,
                80,
                true,
                true,
            ),
            ProblemId::Euler2d => p(
                "euler2d",
                2,
                "Euler, diagonal density sine wave on [0,2]^2",
                2.0,
                60,
                60,
                true,
                true,
            ),
            ProblemId::Burgers1dShock => p(
                "burgers1d-shock",
                1,
                "Burgers sine data after the shock forms",
                1.5 / PI,
                80,
                1,
                true,
                false,
            ),
            ProblemId::Lax => p(
                "lax",
                1,
                "Lax shock tube on [-0.5,0.5]",
                0.16,
                200,
                1,
                true,
                false,
            ),
            ProblemId::ShuOsher => p(
                "shu-osher",
                1,
                "Mach 3 shock meeting an entropy wave on [-5,5]",
                1.8,
                400,
                1,
                false,
                false,
            ),
            ProblemId::Blast => p(
                "blast",
                1,
                "Interacting blast waves between walls on [0,1]",
                0.038,
                800,
                1,
                false,
                false,
            ),
            ProblemId::Burgers2dShock => p(
                "burgers2d-shock",
                2,
                "2D Burgers sine data after the shock forms",
                1.5 / PI,
                80,
                80,
                true,
                false,
            ),
            ProblemId::DoubleMach => p(
                "dmr",
                2,
                "Double Mach reflection on [0,4]x[0,1]",
                0.2,
                480,
                120,
                false,
                false,
            ),
            ProblemId::ForwardStep => p(
                "step",
                2,
                "Mach 3 wind tunnel with a forward step",
                4.0,
                240,
                80,
                false,
                false,
            ),
        }
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }

    /// Mesh for a single refinement number: `n` cells along x, with the
    /// problem's aspect ratio in 2D.
    pub fn mesh_for(self, n: usize) -> Mesh {
        match self.info().dim {
            1 => Mesh::new(n, 1),
            _ => {
                let d = self.info().default_mesh;
                Mesh::new(n, (n * d.ny).div_ceil(d.nx))
            }
        }
    }

    /// Contour levels for density plots of the 2D gas benchmarks.
    pub fn contour_levels(self) -> Option<Vec<f64>> {
        let (lo, hi) = match self {
            ProblemId::DoubleMach => (1.5, 22.7),
            ProblemId::ForwardStep => (0.32, 6.15),
            _ => return None,
        };
        Some((0..30).map(|k| lo + (hi - lo) * k as f64 / 29.0).collect())
    }
}

impl FromStr for ProblemId {
    type Err = HwenoError;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| HwenoError::config(format!("unknown problem {s:?}; see list-problems")))
    }
}

impl FromStr for Mesh {
    type Err = HwenoError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HwenoError::Parse(format!("bad mesh {s:?}; expected N or NXxNY"));
        let mut parts = s.split(['x', 'X']);
        let nx: usize = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let ny: usize = match parts.next() {
            Some(p) => p.trim().parse().map_err(|_| bad())?,
            None => 1,
        };
        if parts.next().is_some() || nx == 0 || ny == 0 {
            return Err(bad());
        }
        Ok(Mesh::new(nx, ny))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    One(Grid1),
    Two(Grid2),
}

impl Geometry {
    pub fn n_cells(&self) -> usize {
        match self {
            Geometry::One(g) => g.n_cells,
            Geometry::Two(g) => g.nx * g.ny,
        }
    }

    pub fn mesh(&self) -> Mesh {
        match self {
            Geometry::One(g) => Mesh::new(g.n_cells, 1),
            Geometry::Two(g) => Mesh::new(g.nx, g.ny),
        }
    }
}

/// Interior moments by variable, cells in row-major order from the
/// bottom-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub problem: String,
    pub t: f64,
    pub geometry: Geometry,
    pub names: Vec<String>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    /// Empty in 1D.
    pub w: Vec<Vec<f64>>,
    pub flags: Vec<bool>,
    /// Cells inside an obstacle (2D only, else all false).
    pub solid: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub snapshot: Snapshot,
    pub summary: RunSummary,
    pub seconds: f64,
}

fn names(model: &str) -> Vec<String> {
    let v: &[&str] = match model {
        "euler1d" => &["rho", "mom", "energy"],
        "euler2d" => &["rho", "mom_x", "mom_y", "energy"],
        _ => &["u"],
    };
    v.iter().map(|s| s.to_string()).collect()
}

fn run_1d<M: EquationModel<N>, const N: usize>(
    id: ProblemId,
    model: M,
    grid: Grid1,
    bc: BoundarySpec1<N>,
    u0: impl Fn(f64) -> State<N>,
    cfg: SchemeConfig,
    t_end: f64,
) -> Result<RunOutcome> {
    bc.validate(&grid)?;
    let mut f = init_moments_1d(u0, grid);
    let mut scheme = Scheme1d::new(model, bc, cfg)?;
    let start = Instant::now();
    let summary = scheme.run(&mut f, 0.0, t_end)?;
    let seconds = start.elapsed().as_secs_f64();
    let map = scheme.flags(&f);
    let pick = |a: &[State<N>], var: usize| grid.interior().map(|k| a[k][var]).collect::<Vec<_>>();
    let snapshot = Snapshot {
        problem: id.name().into(),
        t: summary.t_final,
        geometry: Geometry::One(grid),
        names: names(scheme.model.name()),
        u: (0..N).map(|q| pick(&f.u, q)).collect(),
        v: (0..N).map(|q| pick(&f.v, q)).collect(),
        w: Vec::new(),
        flags: grid.interior().map(|k| map.troubled[k]).collect(),
        solid: vec![false; grid.n_cells],
    };
    Ok(RunOutcome {
        snapshot,
        summary,
        seconds,
    })
}

fn run_2d<M: EquationModel<N>, const N: usize>(
    id: ProblemId,
    model: M,
    grid: Grid2,
    bc: BoundarySpec2<N>,
    u0: impl Fn(f64, f64) -> State<N>,
    cfg: SchemeConfig,
    t_end: f64,
) -> Result<RunOutcome> {
    let mut f = init_moments_2d(u0, grid);
    let mut scheme = Scheme2d::new(model, bc, cfg, &grid)?;
    let start = Instant::now();
    let summary = scheme.run(&mut f, 0.0, t_end)?;
    let seconds = start.elapsed().as_secs_f64();
    let map = scheme.flags(&f);
    let cells: Vec<usize> = (0..grid.ny as isize)
        .flat_map(|j| (0..grid.nx as isize).map(move |i| grid.idx(i, j)))
        .collect();
    let pick = |a: &[State<N>], var: usize| cells.iter().map(|&k| a[k][var]).collect::<Vec<_>>();
    let snapshot = Snapshot {
        problem: id.name().into(),
        t: summary.t_final,
        geometry: Geometry::Two(grid),
        names: names(scheme.model.name()),
        u: (0..N).map(|q| pick(&f.u, q)).collect(),
        v: (0..N).map(|q| pick(&f.v, q)).collect(),
        w: (0..N).map(|q| pick(&f.w, q)).collect(),
        flags: cells.iter().map(|&k| map.troubled[k]).collect(),
        solid: cells.iter().map(|&k| !scheme.fluid[k]).collect(),
    };
    Ok(RunOutcome {
        snapshot,
        summary,
        seconds,
    })
}

const LAX_LEFT: (f64, f64, f64) = (0.445, 0.698, 3.528);
const LAX_RIGHT: (f64, f64, f64) = (0.5, 0.0, 0.571);

/// Post-shock state of the double-Mach problem, `(rho, u, v, p)`.
pub const DMR_POST: (f64, f64, f64, f64) = (8.0, 7.144_709_581_221_619, -4.125, 116.5);
pub const DMR_PRE: (f64, f64, f64, f64) = (1.4, 0.0, 0.0, 1.0);

/// Run problem `id` on `mesh` to `t_end` (default: the problem's final
/// time).
pub fn run_problem(
    id: ProblemId,
    mesh: Mesh,
    cfg: SchemeConfig,
    t_end: Option<f64>,
) -> Result<RunOutcome> {
    let info = id.info();
    let t_end = t_end.unwrap_or(info.t_end);
    if info.dim == 1 && mesh.ny != 1 {
        return Err(HwenoError::config(format!(
            "{} is one-dimensional",
            info.name
        )));
    }
    let e1 = Euler1d::default();
    let e2 = Euler2d::default();
    let periodic1 = BoundarySpec1::periodic();
    let g1 = |lo, hi| Grid1::new(mesh.nx, lo, hi);
    let g2 = |x, y| Grid2::new(mesh.nx, mesh.ny, x, y);
    match id {
        ProblemId::Burgers1d | ProblemId::Burgers1dShock => run_1d(
            id,
            Burgers,
            g1(0.0, 2.0)?,
            periodic1,
            |x| [0.5 + (PI * x).sin()],
            cfg,
            t_end,
        ),
        ProblemId::Euler1d => run_1d(
            id,
            e1,
            g1(0.0, 2.0)?,
            BoundarySpec1::periodic(),
            |x| e1.conserved(1.0 + 0.2 * (PI * x).sin(), 1.0, 1.0),
            cfg,
            t_end,
        ),
        ProblemId::Lax => {
            let out = BoundarySpec1 {
                lo: BoundaryKind::Outflow,
                hi: BoundaryKind::Outflow,
            };
            let (l, r) = (LAX_LEFT, LAX_RIGHT);
            run_1d(
                id,
                e1,
                g1(-0.5, 0.5)?,
                out,
                |x| {
                    if x < 0.0 {
                        e1.conserved(l.0, l.1, l.2)
                    } else {
                        e1.conserved(r.0, r.1, r.2)
                    }
                },
                cfg,
                t_end,
            )
        }
        ProblemId::ShuOsher => {
            let left = e1.conserved(3.857143, 2.629369, 10.333333);
            let bc = BoundarySpec1 {
                lo: BoundaryKind::Inflow(left),
                hi: BoundaryKind::Outflow,
            };
            run_1d(
                id,
                e1,
                g1(-5.0, 5.0)?,
                bc,
                |x| {
                    if x < -4.0 {
                        left
                    } else {
                        e1.conserved(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                    }
                },
                cfg,
                t_end,
            )
        }
        ProblemId::Blast => {
            let bc = BoundarySpec1 {
                lo: BoundaryKind::Reflective,
                hi: BoundaryKind::Reflective,
            };
            run_1d(
                id,
                e1,
                g1(0.0, 1.0)?,
                bc,
                |x| {
                    let p = if x < 0.1 {
                        1e3
                    } else if x < 0.9 {
                        1e-2
                    } else {
                        1e2
                    };
                    e1.conserved(1.0, 0.0, p)
                },
                cfg,
                t_end,
            )
        }
        ProblemId::Burgers2d | ProblemId::Burgers2dShock => run_2d(
            id,
            Burgers,
            g2((0.0, 4.0), (0.0, 4.0))?,
            BoundarySpec2::periodic(),
            |x, y| [0.5 + (PI * (x + y) / 2.0).sin()],
            cfg,
            t_end,
        ),
        ProblemId::Euler2d => run_2d(
            id,
            e2,
            g2((0.0, 2.0), (0.0, 2.0))?,
            BoundarySpec2::periodic(),
            |x, y| e2.conserved(1.0 + 0.2 * (PI * (x + y)).sin(), 1.0, 1.0, 1.0),
            cfg,
            t_end,
        ),
        ProblemId::DoubleMach => {
            let post = e2.conserved(DMR_POST.0, DMR_POST.1, DMR_POST.2, DMR_POST.3);
            let pre = e2.conserved(DMR_PRE.0, DMR_PRE.1, DMR_PRE.2, DMR_PRE.3);
            let bc = BoundarySpec2 {
                x_lo: BoundaryKind::Inflow(post),
                x_hi: BoundaryKind::Outflow,
                y_lo: BoundaryKind::DmrBottom { post },
                y_hi: BoundaryKind::DmrTop { post, pre },
                obstacle: None,
            };
            run_2d(
                id,
                e2,
                g2((0.0, 4.0), (0.0, 1.0))?,
                bc,
                |x, y| if x < dmr_shock_x(y, 0.0) { post } else { pre },
                cfg,
                t_end,
            )
        }
        ProblemId::ForwardStep => {
            let inflow = e2.conserved(1.4, 3.0, 0.0, 1.0);
            let bc = BoundarySpec2 {
                x_lo: BoundaryKind::Inflow(inflow),
                x_hi: BoundaryKind::Outflow,
                y_lo: BoundaryKind::Reflective,
                y_hi: BoundaryKind::Reflective,
                obstacle: Some(Obstacle::Step {
                    x0: 0.6,
                    height: 0.2,
                }),
            };
            run_2d(
                id,
                e2,
                g2((0.0, 3.0), (0.0, 1.0))?,
                bc,
                |_, _| inflow,
                cfg,
                t_end,
            )
        }
    }
}

/// Exact first-variable value (`u` or density) at a point, if known.
pub fn exact_point(id: ProblemId, x: f64, y: f64, t: f64) -> Option<f64> {
    match id {
        ProblemId::Burgers1d | ProblemId::Burgers1dShock => Some(burgers_sine(x, t)),
        ProblemId::Burgers2d | ProblemId::Burgers2dShock => Some(burgers_sine_2d(x, y, t)),
        ProblemId::Euler1d => Some(1.0 + 0.2 * (PI * (x - t)).sin()),
        ProblemId::Euler2d => Some(1.0 + 0.2 * (PI * (x + y - 2.0 * t)).sin()),
        ProblemId::Lax => {
            let r = RiemannSolution::new(LAX_LEFT, LAX_RIGHT, 1.4).ok()?;
            Some(r.at(x, 0.0, t).0)
        }
        _ => None,
    }
}

/// Exact cell averages of the first variable on `geometry` at time `t`, by
/// 5-point Gauss quadrature on `sub` equal sub-intervals per direction.
pub fn exact_averages(id: ProblemId, geometry: &Geometry, t: f64) -> Option<Vec<f64>> {
    if !id.info().exact {
        return None;
    }
    let sub = if id.info().smooth { 1 } else { 8 };
    let lax = RiemannSolution::new(LAX_LEFT, LAX_RIGHT, 1.4).ok()?;
    let point = |x: f64, y: f64| match id {
        ProblemId::Lax => lax.at(x, 0.0, t).0,
        _ => exact_point(id, x, y, t).unwrap_or(f64::NAN),
    };
    let avg1 = |xc: f64, h: f64, f: &dyn Fn(f64) -> f64| {
        let hs = h / sub as f64;
        (0..sub)
            .map(|s| GAUSS_5.average(xc - 0.5 * h + (s as f64 + 0.5) * hs, hs, f))
            .sum::<f64>()
            / sub as f64
    };
    Some(match geometry {
        Geometry::One(g) => (0..g.n_cells as isize)
            .map(|i| avg1(g.center(i), g.dx, &|x| point(x, 0.0)))
            .collect(),
        Geometry::Two(g) => {
            let mut out = Vec::with_capacity(g.nx * g.ny);
            for j in 0..g.ny as isize {
                for i in 0..g.nx as isize {
                    let (xc, yc) = g.center(i, j);
                    out.push(avg1(yc, g.dy, &|y| avg1(xc, g.dx, &|x| point(x, y))));
                }
            }
            out
        }
    })
}
