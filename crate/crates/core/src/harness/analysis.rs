//! Error norms, convergence studies and reference comparisons.

use std::fmt::Write as _;

use super::problems::{exact_averages, run_problem, Geometry, Mesh, ProblemId, Snapshot};
use crate::error::{HwenoError, Result};
use crate::integrator::{DtMode, SchemeConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// Mean absolute difference over the compared cells.
    pub l1: f64,
    pub linf: f64,
}

/// Norms of `a - b` over the cells where `mask` is false.
pub fn norms(a: &[f64], b: &[f64], mask: Option<&[bool]>) -> Result<Norms> {
    if a.len() != b.len() {
        return Err(HwenoError::config(format!(
            "length mismatch {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (mut sum, mut max, mut count) = (0.0, 0.0f64, 0usize);
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if mask.is_some_and(|m| m[k]) {
            continue;
        }
        let d = (x - y).abs();
        sum += d;
        max = max.max(d);
        count += 1;
    }
    if count == 0 {
        return Err(HwenoError::config("no cells to compare"));
    }
    Ok(Norms {
        l1: sum / count as f64,
        linf: max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub mesh: Mesh,
    pub error: Norms,
    /// Orders against the previous row, `ln(e0/e1) / ln(n1/n0)`.
    pub order_l1: Option<f64>,
    pub order_linf: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub problem: ProblemId,
    pub config: SchemeConfig,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn row(&self, nx: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.mesh.nx == nx)
    }

    /// Plain-text table with one row per mesh.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# problem = {}", self.problem.name());
        let _ = writeln!(
            s,
            "{:>12} {:>12} {:>7} {:>12} {:>7} {:>10}",
            "cells", "L1 error", "order", "Linf error", "order", "seconds"
        );
        let ord = |o: Option<f64>| o.map_or(String::new(), |v| format!("{v:.2}"));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>12} {:>12.2E} {:>7} {:>12.2E} {:>7} {:>10.2}",
                r.mesh.to_string(),
                r.error.l1,
                ord(r.order_l1),
                r.error.linf,
                ord(r.order_linf),
                r.seconds
            );
        }
        s
    }
}

/// Run `problem` on each mesh size and measure the first variable against
/// its exact cell averages. With `accuracy_dt` the time step shrinks like
/// `h^(5/3)` relative to the coarsest mesh.
pub fn run_convergence(
    problem: ProblemId,
    meshes: &[usize],
    config: SchemeConfig,
    accuracy_dt: bool,
) -> Result<ConvergenceReport> {
    if !problem.info().exact {
        return Err(HwenoError::config(format!(
            "{} has no exact solution",
            problem.name()
        )));
    }
    if meshes.is_empty() || meshes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HwenoError::config("meshes must be non-empty and ascending"));
    }
    let mut cfg = config;
    if accuracy_dt {
        // unit reference: dt = cfl * h^(5/3) / alpha on every mesh
        cfg.dt_mode = DtMode::Accuracy { reference: 1.0 };
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in meshes {
        let mesh = problem.mesh_for(n);
        let out = run_problem(problem, mesh, cfg, None)?;
        let exact = exact_averages(problem, &out.snapshot.geometry, out.snapshot.t)
            .ok_or_else(|| HwenoError::config("no exact averages"))?;
        let error = norms(&out.snapshot.u[0], &exact, None)?;
        let order = |f: fn(&Norms) -> f64| {
            rows.last()
                .map(|p| (f(&p.error) / f(&error)).ln() / (n as f64 / p.mesh.nx as f64).ln())
        };
        let row = ConvergenceRow {
            mesh,
            error,
            order_l1: order(|e| e.l1),
            order_linf: order(|e| e.linf),
            seconds: out.seconds,
        };
        rows.push(row);
    }
    Ok(ConvergenceReport {
        problem,
        config: cfg,
        rows,
    })
}

/// Average fine-grid cell values onto a coarser grid of the same domain.
/// Each coarse cell must contain a whole number of fine cells per
/// direction.
pub fn restrict(fine: &[f64], from: &Geometry, to: &Geometry) -> Result<Vec<f64>> {
    let ratio = |nf: usize, nc: usize| -> Result<usize> {
        if nc == 0 || nf % nc != 0 {
            return Err(HwenoError::config(format!(
                "{nf} cells do not refine {nc} by an integer ratio"
            )));
        }
        Ok(nf / nc)
    };
    let close = |a: f64, b: f64, h: f64| (a - b).abs() <= 1e-9 * h.max(1.0);
    match (from, to) {
        (Geometry::One(f), Geometry::One(c)) => {
            if !close(f.x_lo, c.x_lo, c.dx) || !close(f.x_hi, c.x_hi, c.dx) {
                return Err(HwenoError::config("reference domain differs"));
            }
            let r = ratio(f.n_cells, c.n_cells)?;
            Ok(fine
                .chunks(r)
                .map(|ch| ch.iter().sum::<f64>() / r as f64)
                .collect())
        }
        (Geometry::Two(f), Geometry::Two(c)) => {
            let same = close(f.x_lo, c.x_lo, c.dx)
                && close(f.x_hi, c.x_hi, c.dx)
                && close(f.y_lo, c.y_lo, c.dy)
                && close(f.y_hi, c.y_hi, c.dy);
            if !same {
                return Err(HwenoError::config("reference domain differs"));
            }
            let (rx, ry) = (ratio(f.nx, c.nx)?, ratio(f.ny, c.ny)?);
            let mut out = vec![0.0; c.nx * c.ny];
            for jf in 0..f.ny {
                for i_f in 0..f.nx {
                    out[(jf / ry) * c.nx + i_f / rx] += fine[jf * f.nx + i_f];
                }
            }
            let n = (rx * ry) as f64;
            out.iter_mut().for_each(|x| *x /= n);
            Ok(out)
        }
        _ => Err(HwenoError::config("reference dimension differs")),
    }
}

/// Norms of variable `var` of `solution` against `reference` restricted to
/// the solution's grid. Solid cells are skipped.
pub fn compare_to_reference(
    solution: &Snapshot,
    reference: &Snapshot,
    var: usize,
) -> Result<Norms> {
    let (a, b) = match (solution.u.get(var), reference.u.get(var)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(HwenoError::config(format!("variable {var} missing"))),
    };
    let r = restrict(b, &reference.geometry, &solution.geometry)?;
    norms(a, &r, Some(&solution.solid))
}

/// Largest overshoot of `computed` beyond the local range of `exact`,
/// relative to that range, over 1D windows of `2 * half + 1` cells whose
/// exact range exceeds `min_jump`. Measures new extrema next to
/// discontinuities.
pub fn relative_overshoot(computed: &[f64], exact: &[f64], half: usize, min_jump: f64) -> f64 {
    let n = exact.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let (lo, hi) = (i.saturating_sub(half), (i + half + 1).min(n));
        let win = &exact[lo..hi];
        let (mn, mx) = win
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                (a.min(x), b.max(x))
            });
        let range = mx - mn;
        if range <= min_jump {
            continue;
        }
        let over = (computed[i] - mx).max(mn - computed[i]).max(0.0);
        worst = worst.max(over / range);
    }
    worst
}
