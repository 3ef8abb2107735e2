//! Two-dimensional Hermite reconstruction on the 3x3 block around a cell.
//!
//! Cells of the block are labeled 1..9 row by row from the bottom left, so
//! label 5 is the target. Polynomials are built in the scaled variables
//! `xi = (x - x_i)/dx`, `eta = (y - y_j)/dy`; the only mesh dependence left is
//! the aspect ratio inside the smoothness indicators.

use nalgebra::{DMatrix, SMatrix};

use super::one_d::{modify_first_moment, Stencil1};
use super::weights::{combine, nonlinear_weights, LinearWeights};
use crate::error::{HwenoError, Result};
use crate::physics::GAUSS_3;

/// 9 zeroth moments, then first x-moments on labels 2,4,5,6,8, then first
/// y-moments on the same labels.
pub const N_INPUTS_2D: usize = 19;
/// Interface points (3 per side) plus the 3x3 interior tensor points.
pub const N_POINTS_2D: usize = 21;

const N_QUARTIC: usize = 15;
const N_QUAD: usize = 6;

/// Point-index layout: left side, right side, bottom side, top side (each
/// ordered by increasing tangential coordinate), then interior points with
/// index `INTERIOR + 3*l + k` for `(xi_k, eta_l)`.
pub const LEFT: usize = 0;
pub const RIGHT: usize = 3;
pub const BOTTOM: usize = 6;
pub const TOP: usize = 9;
pub const INTERIOR: usize = 12;

/// Position of the zeroth moment of each label in the input vector is
/// `label - 1`; these map the first-moment labels.
const FIRST_LABELS: [usize; 5] = [2, 4, 5, 6, 8];
const V5: usize = 11;
const W5: usize = 16;

/// (di, dj) offsets of labels 1..9.
const OFFSETS: [(i32, i32); 9] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (0, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Exponents `(a, b)` of `xi^a eta^b`, ordered by total degree.
const MONOMIALS: [(i32, i32); N_QUARTIC] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

/// Input positions used by the four quadratic candidates: four zeroth
/// moments, then `v_5` and `w_5`.
const SMALL_INPUTS: [[usize; N_QUAD]; 4] = [
    [0, 1, 3, 4, V5, W5],
    [1, 2, 4, 5, V5, W5],
    [3, 4, 6, 7, V5, W5],
    [4, 5, 7, 8, V5, W5],
];

/// Data of one scalar variable on the 3x3 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil2 {
    pub u: [f64; 9],
    /// First x-moments on labels 2, 4, 5, 6, 8.
    pub v: [f64; 5],
    /// First y-moments on labels 2, 4, 5, 6, 8.
    pub w: [f64; 5],
}

impl Stencil2 {
    pub fn inputs(&self) -> [f64; N_INPUTS_2D] {
        let mut s = [0.0; N_INPUTS_2D];
        s[..9].copy_from_slice(&self.u);
        s[9..14].copy_from_slice(&self.v);
        s[14..].copy_from_slice(&self.w);
        s
    }

    pub fn from_inputs(s: &[f64; N_INPUTS_2D]) -> Self {
        let mut st = Stencil2 {
            u: [0.0; 9],
            v: [0.0; 5],
            w: [0.0; 5],
        };
        st.u.copy_from_slice(&s[..9]);
        st.v.copy_from_slice(&s[9..14]);
        st.w.copy_from_slice(&s[14..]);
        st
    }
}

/// A reconstruction point in scaled cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussPoint {
    pub xi: f64,
    pub eta: f64,
}

/// All 21 points in the index layout described at [`LEFT`].
pub fn gauss_points() -> [GaussPoint; N_POINTS_2D] {
    let g = GAUSS_3.nodes;
    let mut p = [GaussPoint { xi: 0.0, eta: 0.0 }; N_POINTS_2D];
    for k in 0..3 {
        p[LEFT + k] = GaussPoint {
            xi: -0.5,
            eta: g[k],
        };
        p[RIGHT + k] = GaussPoint { xi: 0.5, eta: g[k] };
        p[BOTTOM + k] = GaussPoint {
            xi: g[k],
            eta: -0.5,
        };
        p[TOP + k] = GaussPoint { xi: g[k], eta: 0.5 };
        for l in 0..3 {
            p[INTERIOR + 3 * l + k] = GaussPoint {
                xi: g[k],
                eta: g[l],
            };
        }
    }
    p
}

fn monomial_at(m: usize, p: GaussPoint) -> f64 {
    let (a, b) = MONOMIALS[m];
    p.xi.powi(a) * p.eta.powi(b)
}

/// `int_{d-1/2}^{d+1/2} s^a ds`
fn line_integral(a: i32, d: f64) -> f64 {
    let (lo, hi) = (d - 0.5, d + 0.5);
    (hi.powi(a + 1) - lo.powi(a + 1)) / f64::from(a + 1)
}

#[derive(Clone, Copy)]
enum Moment {
    Zeroth,
    FirstX,
    FirstY,
}

/// Scaled moment of monomial `m` over the cell offset by `(di, dj)`.
fn monomial_moment(m: usize, kind: Moment, (di, dj): (i32, i32)) -> f64 {
    let (a, b) = MONOMIALS[m];
    let (dx, dy) = (f64::from(di), f64::from(dj));
    match kind {
        Moment::Zeroth => line_integral(a, dx) * line_integral(b, dy),
        Moment::FirstX => {
            (line_integral(a + 1, dx) - dx * line_integral(a, dx)) * line_integral(b, dy)
        }
        Moment::FirstY => {
            line_integral(a, dx) * (line_integral(b + 1, dy) - dy * line_integral(b, dy))
        }
    }
}

fn falling(n: i32, k: i32) -> f64 {
    (0..k).map(|j| f64::from(n - j)).product()
}

/// Quadratic form of the smoothness indicator on the first `n` monomials:
/// `sum_l (dy/dx)^l1 (dx/dy)^l2 int (d^l p)^2` over the unit cell.
fn smoothness_form(n: usize, ratio: f64) -> Vec<Vec<f64>> {
    let max_deg = MONOMIALS[..n].iter().map(|(a, b)| a + b).max().unwrap_or(0);
    let mut q = vec![vec![0.0; n]; n];
    for r in 1..=max_deg {
        for l1 in 0..=r {
            let l2 = r - l1;
            let factor = ratio.powi(l1) * ratio.powi(-l2);
            for (mi, &(a1, b1)) in MONOMIALS[..n].iter().enumerate() {
                if a1 < l1 || b1 < l2 {
                    continue;
                }
                let c1 = falling(a1, l1) * falling(b1, l2);
                for (mj, &(a2, b2)) in MONOMIALS[..n].iter().enumerate() {
                    if a2 < l1 || b2 < l2 {
                        continue;
                    }
                    let c2 = falling(a2, l1) * falling(b2, l2);
                    let ex = a1 - l1 + a2 - l1;
                    let ey = b1 - l2 + b2 - l2;
                    q[mi][mj] += factor * c1 * c2 * line_integral(ex, 0.0) * line_integral(ey, 0.0);
                }
            }
        }
    }
    q
}

/// Upper-triangular `R` with `q = R^T R`, so `beta = |R c|^2`. Semidefinite
/// forms (zero row for the constant) are handled by skipping null pivots.
fn factor_form(q: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = q.len();
    let mut r = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d = q[i][i] - (0..i).map(|k| r[k][i] * r[k][i]).sum::<f64>();
        if d <= 1e-14 * q[i][i].abs().max(1.0) {
            continue;
        }
        let piv = d.sqrt();
        r[i][i] = piv;
        for j in i + 1..n {
            let s = q[i][j] - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            r[i][j] = s / piv;
        }
    }
    r
}

/// Precomputed maps from stencil inputs to candidate coefficients, point
/// values and smoothness indicators. Built once per mesh.
#[derive(Debug, Clone)]
pub struct Kernel2 {
    /// Quartic coefficients from the 19 inputs.
    quartic: [[f64; N_INPUTS_2D]; N_QUARTIC],
    /// Quadratic coefficients from the 6 local inputs of each small stencil.
    quadratic: [[[f64; N_QUAD]; N_QUAD]; 4],
    /// Linear evaluation rows: point value = row . inputs.
    rows: [[f64; N_INPUTS_2D]; N_POINTS_2D],
    /// Monomial values at every point.
    basis: [[f64; N_QUARTIC]; N_POINTS_2D],
    /// Factors of the smoothness forms (sparse upper triangles kept dense).
    r_quartic: [[f64; N_QUARTIC]; N_QUARTIC],
    r_quad: [[f64; N_QUAD]; N_QUAD],
    dx: f64,
    dy: f64,
}

/// Candidate polynomials of one stencil, ready for point evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Candidates2 {
    pub quartic: [f64; N_QUARTIC],
    pub quadratic: [[f64; N_QUAD]; 4],
    pub beta: [f64; 5],
}

impl Candidates2 {
    /// `sum_k a_k c_k` over physical components, coefficient-wise.
    pub fn combination(parts: &[Candidates2], a: &[f64]) -> Candidates2 {
        let mut out = Candidates2::default();
        for (p, &w) in parts.iter().zip(a) {
            if w == 0.0 {
                continue;
            }
            for (o, x) in out.quartic.iter_mut().zip(&p.quartic) {
                *o += w * x;
            }
            for n in 0..4 {
                for (o, x) in out.quadratic[n].iter_mut().zip(&p.quadratic[n]) {
                    *o += w * x;
                }
            }
        }
        out
    }
}

impl Kernel2 {
    pub fn new(dx: f64, dy: f64) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(HwenoError::Construction(format!(
                "bad cell size {dx} x {dy}"
            )));
        }
        let quartic = build_quartic()?;
        let quadratic = build_quadratics()?;
        let points = gauss_points();
        let mut basis = [[0.0; N_QUARTIC]; N_POINTS_2D];
        let mut rows = [[0.0; N_INPUTS_2D]; N_POINTS_2D];
        for (p, pt) in points.iter().enumerate() {
            for m in 0..N_QUARTIC {
                basis[p][m] = monomial_at(m, *pt);
                for s in 0..N_INPUTS_2D {
                    rows[p][s] += basis[p][m] * quartic[m][s];
                }
            }
        }
        let ratio = dy / dx;
        let mut r_quartic = [[0.0; N_QUARTIC]; N_QUARTIC];
        for (dst, src) in r_quartic
            .iter_mut()
            .zip(factor_form(&smoothness_form(N_QUARTIC, ratio)))
        {
            dst.copy_from_slice(&src);
        }
        let mut r_quad = [[0.0; N_QUAD]; N_QUAD];
        for (dst, src) in r_quad
            .iter_mut()
            .zip(factor_form(&smoothness_form(N_QUAD, ratio)))
        {
            dst.copy_from_slice(&src);
        }
        Ok(Kernel2 {
            quartic,
            quadratic,
            rows,
            basis,
            r_quartic,
            r_quad,
            dx,
            dy,
        })
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.dx, self.dy)
    }

    /// Linear (quartic) value at point `p`.
    #[inline]
    pub fn linear_point(&self, s: &[f64; N_INPUTS_2D], p: usize) -> f64 {
        dot(&self.rows[p], s)
    }

    /// Linear values at every point.
    pub fn linear_all(&self, s: &[f64; N_INPUTS_2D]) -> [f64; N_POINTS_2D] {
        let mut out = [0.0; N_POINTS_2D];
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = dot(row, s);
        }
        out
    }

    /// Linear values at the interior points only.
    #[inline]
    pub fn linear_interior(&self, s: &[f64; N_INPUTS_2D]) -> [f64; 9] {
        let mut out = [0.0; 9];
        for (o, row) in out.iter_mut().zip(&self.rows[INTERIOR..]) {
            *o = dot(row, s);
        }
        out
    }

    pub fn candidates(&self, s: &[f64; N_INPUTS_2D]) -> Candidates2 {
        let mut c = self.coefficients(s);
        self.update_smoothness(&mut c);
        c
    }

    /// Candidate coefficients without the smoothness indicators. They are
    /// linear in the inputs, so characteristic projection may be applied to
    /// them directly.
    pub fn coefficients(&self, s: &[f64; N_INPUTS_2D]) -> Candidates2 {
        let mut quartic = [0.0; N_QUARTIC];
        for (c, row) in quartic.iter_mut().zip(&self.quartic) {
            *c = dot(row, s);
        }
        let mut quadratic = [[0.0; N_QUAD]; 4];
        for n in 0..4 {
            let local: [f64; N_QUAD] = SMALL_INPUTS[n].map(|k| s[k]);
            for (c, row) in quadratic[n].iter_mut().zip(&self.quadratic[n]) {
                *c = dot(row, &local);
            }
        }
        Candidates2 {
            quartic,
            quadratic,
            beta: [0.0; 5],
        }
    }

    pub fn update_smoothness(&self, c: &mut Candidates2) {
        c.beta[0] = form_value(&self.r_quartic, &c.quartic);
        for n in 0..4 {
            c.beta[n + 1] = form_value(&self.r_quad, &c.quadratic[n]);
        }
    }

    /// Values of all five candidates at point `p`.
    #[inline]
    pub fn candidate_values(&self, c: &Candidates2, p: usize) -> [f64; 5] {
        let b = &self.basis[p];
        let mut out = [dot(b, &c.quartic), 0.0, 0.0, 0.0, 0.0];
        for n in 0..4 {
            out[n + 1] = dot(&b[..N_QUAD], &c.quadratic[n]);
        }
        out
    }

    /// Nonlinear value at point `p` given precomputed weights.
    #[inline]
    pub fn hweno_with_weights(
        &self,
        c: &Candidates2,
        p: usize,
        omega: &[f64; 5],
        gamma: &LinearWeights<5>,
    ) -> f64 {
        combine(&self.candidate_values(c, p), omega, gamma)
    }

    /// Nonlinear value at one point.
    pub fn hweno_point(
        &self,
        s: &[f64; N_INPUTS_2D],
        p: usize,
        gamma: &LinearWeights<5>,
        eps: f64,
    ) -> f64 {
        let c = self.candidates(s);
        let omega = nonlinear_weights(&c.beta, gamma, eps);
        self.hweno_with_weights(&c, p, &omega, gamma)
    }

    pub fn smoothness(&self, s: &[f64; N_INPUTS_2D]) -> [f64; 5] {
        self.candidates(s).beta
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn form_value<const K: usize>(r: &[[f64; K]; K], c: &[f64; K]) -> f64 {
    let mut total = 0.0;
    for (i, row) in r.iter().enumerate() {
        let y: f64 = (i..K).map(|j| row[j] * c[j]).sum();
        total += y * y;
    }
    total
}

/// Null-space elimination for the quartic: 11 exact conditions (all zeroth
/// moments plus `v_5`, `w_5`) and 8 first-moment conditions in the least
/// squares sense.
fn build_quartic() -> Result<[[f64; N_INPUTS_2D]; N_QUARTIC]> {
    // equality rows and their input positions
    let mut eq_rows: Vec<(Moment, (i32, i32), usize)> =
        (0..9).map(|k| (Moment::Zeroth, OFFSETS[k], k)).collect();
    eq_rows.push((Moment::FirstX, (0, 0), V5));
    eq_rows.push((Moment::FirstY, (0, 0), W5));
    let mut ls_rows = Vec::new();
    for (slot, &label) in FIRST_LABELS.iter().enumerate() {
        if label != 5 {
            ls_rows.push((Moment::FirstX, OFFSETS[label - 1], 9 + slot));
        }
    }
    for (slot, &label) in FIRST_LABELS.iter().enumerate() {
        if label != 5 {
            ls_rows.push((Moment::FirstY, OFFSETS[label - 1], 14 + slot));
        }
    }
    let assemble = |rows: &[(Moment, (i32, i32), usize)]| {
        DMatrix::from_fn(rows.len(), N_QUARTIC, |r, m| {
            monomial_moment(m, rows[r].0, rows[r].1)
        })
    };
    let c = assemble(&eq_rows);
    let a = assemble(&ls_rows);
    let n_eq = eq_rows.len();

    // full right singular basis of C via a square padded copy
    let mut padded = DMatrix::<f64>::zeros(N_QUARTIC, N_QUARTIC);
    padded.rows_mut(0, n_eq).copy_from(&c);
    let svd = padded.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| HwenoError::Construction("svd failed".into()))?;
    let mut order: Vec<usize> = (0..N_QUARTIC).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let smax = svd.singular_values[order[0]];
    let tol = 1e-10 * smax;
    if svd.singular_values[order[n_eq - 1]] <= tol || svd.singular_values[order[n_eq]] > tol {
        return Err(HwenoError::Construction(
            "equality constraints are rank deficient".into(),
        ));
    }
    let null = DMatrix::from_fn(N_QUARTIC, N_QUARTIC - n_eq, |r, k| vt[(order[n_eq + k], r)]);
    let c_pinv = c
        .clone()
        .pseudo_inverse(tol)
        .map_err(|e| HwenoError::Construction(e.to_string()))?;
    let an = &a * &null;
    let an_svd = an.clone().svd(false, false);
    let an_max = an_svd.singular_values.max();
    if an_svd.singular_values.min() <= 1e-10 * an_max {
        return Err(HwenoError::Construction(
            "least-squares block is rank deficient".into(),
        ));
    }
    let an_pinv = an
        .pseudo_inverse(1e-12 * an_max)
        .map_err(|e| HwenoError::Construction(e.to_string()))?;
    let z = &null * &an_pinv; // 15 x 8
    let from_eq = (DMatrix::identity(N_QUARTIC, N_QUARTIC) - &z * &a) * &c_pinv; // 15 x 11
    let mut out = [[0.0; N_INPUTS_2D]; N_QUARTIC];
    for m in 0..N_QUARTIC {
        for (r, row) in eq_rows.iter().enumerate() {
            out[m][row.2] += from_eq[(m, r)];
        }
        for (r, row) in ls_rows.iter().enumerate() {
            out[m][row.2] += z[(m, r)];
        }
    }
    Ok(out)
}

fn build_quadratics() -> Result<[[[f64; N_QUAD]; N_QUAD]; 4]> {
    let mut out = [[[0.0; N_QUAD]; N_QUAD]; 4];
    for (n, inputs) in SMALL_INPUTS.iter().enumerate() {
        let mut m = SMatrix::<f64, N_QUAD, N_QUAD>::zeros();
        for (r, &k) in inputs.iter().enumerate() {
            let (kind, off) = match k {
                V5 => (Moment::FirstX, (0, 0)),
                W5 => (Moment::FirstY, (0, 0)),
                _ => (Moment::Zeroth, OFFSETS[k]),
            };
            for c in 0..N_QUAD {
                m[(r, c)] = monomial_moment(c, kind, off);
            }
        }
        let inv = m.try_inverse().ok_or_else(|| {
            HwenoError::Construction(format!("small stencil {} is singular", n + 1))
        })?;
        for c in 0..N_QUAD {
            for r in 0..N_QUAD {
                out[n][c][r] = inv[(c, r)];
            }
        }
    }
    Ok(out)
}

/// Limited `(v_5, w_5)`, each from the 1D rule along its own direction.
pub fn modify_moments_2d(s: &Stencil2, gamma: &LinearWeights<3>, eps: f64) -> (f64, f64) {
    // labels 4,5,6 along x; 2,5,8 along y
    let row = Stencil1::new([s.u[3], s.u[4], s.u[5]], [s.v[1], s.v[2], s.v[3]]);
    let col = Stencil1::new([s.u[1], s.u[4], s.u[7]], [s.w[0], s.w[2], s.w[4]]);
    (
        modify_first_moment(&row, gamma, eps),
        modify_first_moment(&col, gamma, eps),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::EPSILON;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Exact scaled moments of `x^a y^b` (physical coordinates) on the block
    /// around `(xc, yc)`.
    fn poly_stencil(terms: &[(f64, i32, i32)], xc: f64, yc: f64, dx: f64, dy: f64) -> [f64; 19] {
        let anti = |p: i32, lo: f64, hi: f64| (hi.powi(p + 1) - lo.powi(p + 1)) / f64::from(p + 1);
        let mut s = [0.0; 19];
        for &(coef, a, b) in terms {
            for k in 0..9 {
                let (di, dj) = OFFSETS[k];
                let cx = xc + f64::from(di) * dx;
                let cy = yc + f64::from(dj) * dy;
                let (x0, x1, y0, y1) = (cx - dx / 2.0, cx + dx / 2.0, cy - dy / 2.0, cy + dy / 2.0);
                let ix = anti(a, x0, x1);
                let iy = anti(b, y0, y1);
                let u = ix * iy / (dx * dy);
                let vx = (anti(a + 1, x0, x1) - cx * ix) * iy / (dx * dx * dy);
                let wy = ix * (anti(b + 1, y0, y1) - cy * iy) / (dx * dy * dy);
                s[k] += coef * u;
                if let Some(slot) = FIRST_LABELS.iter().position(|&l| l == k + 1) {
                    s[9 + slot] += coef * vx;
                    s[14 + slot] += coef * wy;
                }
            }
        }
        s
    }

    fn poly_value(terms: &[(f64, i32, i32)], x: f64, y: f64) -> f64 {
        terms
            .iter()
            .map(|&(c, a, b)| c * x.powi(a) * y.powi(b))
            .sum()
    }

    fn sine_stencil(xc: f64, yc: f64, h: f64) -> [f64; 19] {
        // u = sin(pi x) cos(pi y) by 5-point tensor Gauss (error ~ h^10)
        let g = crate::physics::GAUSS_5;
        let mut s = [0.0; 19];
        for k in 0..9 {
            let (di, dj) = OFFSETS[k];
            let cx = xc + f64::from(di) * h;
            let cy = yc + f64::from(dj) * h;
            let (mut u, mut v, mut w) = (0.0, 0.0, 0.0);
            for a in 0..5 {
                for b in 0..5 {
                    let wt = g.weights[a] * g.weights[b];
                    let f = (PI * (cx + g.nodes[a] * h)).sin() * (PI * (cy + g.nodes[b] * h)).cos();
                    u += wt * f;
                    v += wt * f * g.nodes[a];
                    w += wt * f * g.nodes[b];
                }
            }
            s[k] = u;
            if let Some(slot) = FIRST_LABELS.iter().position(|&l| l == k + 1) {
                s[9 + slot] = v;
                s[14 + slot] = w;
            }
        }
        s
    }

    fn eval_coeffs(c: &[f64], xi: f64, eta: f64) -> f64 {
        c.iter()
            .enumerate()
            .map(|(m, a)| a * monomial_at(m, GaussPoint { xi, eta }))
            .sum()
    }

    /// beta by tensor Gauss quadrature of the defining derivative sums,
    /// derivatives by exact term-wise differentiation.
    fn beta_oracle(c: &[f64], ratio: f64) -> f64 {
        let g = crate::physics::GAUSS_5;
        let n = c.len();
        let max_deg = MONOMIALS[..n].iter().map(|(a, b)| a + b).max().unwrap();
        let mut total = 0.0;
        for r in 1..=max_deg {
            for l1 in 0..=r {
                let l2 = r - l1;
                let fac = ratio.powi(l1 - l2);
                for a in 0..5 {
                    for b in 0..5 {
                        let (xi, eta) = (g.nodes[a], g.nodes[b]);
                        let mut d = 0.0;
                        for (m, &(p, q)) in MONOMIALS[..n].iter().enumerate() {
                            if p >= l1 && q >= l2 {
                                d += c[m]
                                    * falling(p, l1)
                                    * falling(q, l2)
                                    * xi.powi(p - l1)
                                    * eta.powi(q - l2);
                            }
                        }
                        total += fac * g.weights[a] * g.weights[b] * d * d;
                    }
                }
            }
        }
        total
    }

    fn kernel() -> Kernel2 {
        Kernel2::new(0.1, 0.1).unwrap()
    }

    #[test]
    fn constants_everywhere() {
        let k = kernel();
        let mut s = [0.0; 19];
        s[..9].fill(3.25);
        for v in k.linear_all(&s) {
            assert!((v - 3.25).abs() < 1e-13);
        }
        let g = LinearWeights::<5>::standard();
        for p in 0..N_POINTS_2D {
            assert!((k.hweno_point(&s, p, &g, EPSILON) - 3.25).abs() < 1e-13);
        }
        for b in k.smoothness(&s) {
            assert!(b.abs() < 1e-24);
        }
    }

    #[test]
    fn quartic_exact_on_degree_four() {
        let (dx, dy) = (0.1, 0.07);
        let k = Kernel2::new(dx, dy).unwrap();
        let (xc, yc) = (0.35, -0.2);
        let cases: [&[(f64, i32, i32)]; 4] = [
            &[(1.0, 4, 0)],
            &[(1.0, 2, 2)],
            &[(1.0, 0, 3)],
            &[
                (0.7, 3, 1),
                (-1.3, 1, 3),
                (0.4, 0, 4),
                (2.0, 1, 1),
                (-0.5, 0, 0),
            ],
        ];
        let pts = gauss_points();
        for terms in cases {
            let s = poly_stencil(terms, xc, yc, dx, dy);
            let scale: f64 = s.iter().map(|x| x.abs()).fold(1e-300, f64::max);
            for (p, pt) in pts.iter().enumerate() {
                let exact = poly_value(terms, xc + pt.xi * dx, yc + pt.eta * dy);
                let got = k.linear_point(&s, p);
                assert!(
                    (got - exact).abs() < 1e-11 * scale.max(1.0),
                    "{terms:?} point {p}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn small_stencils_exact_on_quadratics() {
        let (dx, dy) = (0.2, 0.1);
        let k = Kernel2::new(dx, dy).unwrap();
        let (xc, yc) = (1.0, 0.5);
        for terms in [
            &[(1.0, 1, 1)][..],
            &[(1.0, 1, 0)],
            &[(2.0, 2, 0), (-1.0, 0, 2), (0.5, 0, 1)],
        ] {
            let s = poly_stencil(terms, xc, yc, dx, dy);
            let c = k.candidates(&s);
            for (p, pt) in gauss_points().iter().enumerate() {
                let exact = poly_value(terms, xc + pt.xi * dx, yc + pt.eta * dy);
                let vals = k.candidate_values(&c, p);
                for v in vals {
                    assert!(
                        (v - exact).abs() < 1e-12,
                        "{terms:?} at {p}: {vals:?} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn small_stencil_smoothness_for_linear_field() {
        // u = x gives p_n = xc + dx*xi, so beta_n = (dy/dx)*1*... : int (dP/dxi)^2 = dx^2,
        // scaled by dy/dx
        let (dx, dy) = (0.2, 0.1);
        let k = Kernel2::new(dx, dy).unwrap();
        let s = poly_stencil(&[(1.0, 1, 0)], 0.3, 0.3, dx, dy);
        let b = k.smoothness(&s);
        for n in 0..5 {
            assert!(
                (b[n] - dx * dx * dy / dx).abs() < 1e-14,
                "beta {n} = {}",
                b[n]
            );
        }
    }

    fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
                .unwrap();
            a.swap(c, p);
            b.swap(c, p);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    #[test]
    fn quartic_matches_lagrange_multiplier_solution() {
        // KKT system [A^T A  C^T; C  0] [c; lambda] = [A^T e; d]
        let k = kernel();
        let s: [f64; 19] = std::array::from_fn(|i| ((i * 7 + 3) % 11) as f64 * 0.1 - 0.4);
        let mut c_rows: Vec<(Vec<f64>, f64)> = (0..9)
            .map(|j| {
                (
                    (0..15)
                        .map(|m| monomial_moment(m, Moment::Zeroth, OFFSETS[j]))
                        .collect(),
                    s[j],
                )
            })
            .collect();
        c_rows.push((
            (0..15)
                .map(|m| monomial_moment(m, Moment::FirstX, (0, 0)))
                .collect(),
            s[V5],
        ));
        c_rows.push((
            (0..15)
                .map(|m| monomial_moment(m, Moment::FirstY, (0, 0)))
                .collect(),
            s[W5],
        ));
        let mut a_rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for (slot, &label) in FIRST_LABELS.iter().enumerate() {
            if label == 5 {
                continue;
            }
            let off = OFFSETS[label - 1];
            a_rows.push((
                (0..15)
                    .map(|m| monomial_moment(m, Moment::FirstX, off))
                    .collect(),
                s[9 + slot],
            ));
            a_rows.push((
                (0..15)
                    .map(|m| monomial_moment(m, Moment::FirstY, off))
                    .collect(),
                s[14 + slot],
            ));
        }
        let n = 15 + c_rows.len();
        let mut kkt = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        for i in 0..15 {
            for j in 0..15 {
                kkt[i][j] = a_rows.iter().map(|(r, _)| r[i] * r[j]).sum();
            }
            rhs[i] = a_rows.iter().map(|(r, e)| r[i] * e).sum();
        }
        for (q, (r, d)) in c_rows.iter().enumerate() {
            for i in 0..15 {
                kkt[15 + q][i] = r[i];
                kkt[i][15 + q] = r[i];
            }
            rhs[15 + q] = *d;
        }
        let oracle = solve(kkt, rhs);
        let got = k.candidates(&s).quartic;
        for m in 0..15 {
            assert!(
                (got[m] - oracle[m]).abs() < 1e-10,
                "coef {m}: {} vs {}",
                got[m],
                oracle[m]
            );
        }
    }

    #[test]
    fn modify_moments_linear_and_constant() {
        let g = LinearWeights::standard();
        let c = Stencil2 {
            u: [1.5; 9],
            v: [0.0; 5],
            w: [0.0; 5],
        };
        let (v, w) = modify_moments_2d(&c, &g, EPSILON);
        assert!(v.abs() < 1e-15 && w.abs() < 1e-15);
        let s = Stencil2::from_inputs(&poly_stencil(&[(1.0, 1, 0)], 0.0, 0.0, 0.1, 0.1));
        let (v, w) = modify_moments_2d(&s, &g, EPSILON);
        assert!((v - 0.1 / 12.0).abs() < 1e-15 && w.abs() < 1e-15, "{v} {w}");
    }

    #[test]
    fn modified_moments_converge_at_fifth_order() {
        let g = LinearWeights::standard();
        let mut errs = Vec::new();
        for n in [10, 20, 40, 80] {
            let h = 2.0 / n as f64;
            let mut e: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let s = sine_stencil((i as f64 + 0.5) * h, (j as f64 + 0.5) * h, h);
                    let (v, w) = modify_moments_2d(&Stencil2::from_inputs(&s), &g, EPSILON);
                    e = e.max((v - s[V5]).abs()).max((w - s[W5]).abs());
                }
            }
            errs.push(e);
        }
        let order = (errs[2] / errs[3]).log2();
        assert!(order > 4.5, "order {order}: {errs:?}");
    }

    #[test]
    fn interface_accuracy_independent_of_linear_weights() {
        let ga = LinearWeights::standard();
        let gb = LinearWeights::uniform();
        let mut ea = Vec::new();
        let mut eb = Vec::new();
        let mut diff = Vec::new();
        for n in [10, 20, 40, 80] {
            let h = 2.0 / n as f64;
            let k = Kernel2::new(h, h).unwrap();
            let pts = gauss_points();
            let (mut a, mut b, mut d) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..n {
                let (xc, yc) = ((i as f64 + 0.5) * h, 0.3 + (i as f64 + 0.5) * h / 3.0);
                let s = sine_stencil(xc, yc, h);
                for p in [LEFT, RIGHT + 2, BOTTOM + 1, TOP] {
                    let exact =
                        (PI * (xc + pts[p].xi * h)).sin() * (PI * (yc + pts[p].eta * h)).cos();
                    let va = k.hweno_point(&s, p, &ga, EPSILON);
                    let vb = k.hweno_point(&s, p, &gb, EPSILON);
                    a = a.max((va - exact).abs());
                    b = b.max((vb - exact).abs());
                    d = d.max((va - vb).abs());
                }
            }
            ea.push(a);
            eb.push(b);
            diff.push(d);
        }
        for e in [&ea, &eb] {
            let order = (e[2] / e[3]).log2();
            assert!(order > 4.4, "order {order}: {e:?}");
        }
        // the gap shrinks at least at fourth order until it reaches roundoff
        for pair in diff.windows(2) {
            assert!(
                pair[1] < 1e-13 || (pair[0] / pair[1]).log2() >= 4.0,
                "{diff:?}"
            );
        }
    }

    #[test]
    fn scale_invariance() {
        let s: [f64; 19] = std::array::from_fn(|i| (i as f64 * 0.37).sin());
        let a = Kernel2::new(0.1, 0.05).unwrap();
        let b = Kernel2::new(0.3, 0.15).unwrap();
        let g = LinearWeights::standard();
        for p in 0..N_POINTS_2D {
            assert!((a.linear_point(&s, p) - b.linear_point(&s, p)).abs() < 1e-13);
            assert!(
                (a.hweno_point(&s, p, &g, EPSILON) - b.hweno_point(&s, p, &g, EPSILON)).abs()
                    < 1e-13
            );
        }
    }

    fn inputs() -> impl Strategy<Value = [f64; 19]> {
        proptest::collection::vec(-1.0..1.0f64, 19).prop_map(|v| {
            let mut s = [0.0; 19];
            s.copy_from_slice(&v);
            s
        })
    }

    proptest! {
        #[test]
        fn betas_match_quadrature_oracle(s in inputs(), ratio in 0.5..2.0f64) {
            let k = Kernel2::new(0.1, 0.1 * ratio).unwrap();
            let c = k.candidates(&s);
            let o = beta_oracle(&c.quartic, ratio);
            prop_assert!((c.beta[0] - o).abs() <= 1e-10 * o.max(1.0), "{} vs {}", c.beta[0], o);
            for n in 0..4 {
                let o = beta_oracle(&c.quadratic[n], ratio);
                prop_assert!((c.beta[n + 1] - o).abs() <= 1e-10 * o.max(1.0));
            }
        }

        #[test]
        fn random_quartics_reproduced(coef in proptest::collection::vec(-1.0..1.0f64, 15)) {
            let (dx, dy) = (0.25, 0.2);
            let k = Kernel2::new(dx, dy).unwrap();
            let terms: Vec<(f64, i32, i32)> =
                MONOMIALS.iter().zip(&coef).map(|(&(a, b), &c)| (c, a, b)).collect();
            let s = poly_stencil(&terms, 0.0, 0.0, dx, dy);
            let c = k.candidates(&s);
            for (p, pt) in gauss_points().iter().enumerate() {
                let exact = poly_value(&terms, pt.xi * dx, pt.eta * dy);
                prop_assert!((eval_coeffs(&c.quartic, pt.xi, pt.eta) - exact).abs() < 1e-11);
                prop_assert!((k.linear_point(&s, p) - exact).abs() < 1e-11);
            }
        }

        #[test]
        fn diagonal_swap_symmetry(s in inputs()) {
            // transposing the block (x <-> y) transposes the point values
            let k = Kernel2::new(0.1, 0.1).unwrap();
            let mut t = [0.0; 19];
            for (k_in, &(di, dj)) in OFFSETS.iter().enumerate() {
                let k_out = OFFSETS.iter().position(|&o| o == (dj, di)).unwrap();
                t[k_out] = s[k_in];
            }
            // first-moment labels 2,4,5,6,8 map to 4,2,5,8,6
            let perm = [1, 0, 2, 4, 3];
            for a in 0..5 {
                t[9 + perm[a]] = s[14 + a];
                t[14 + perm[a]] = s[9 + a];
            }
            let g = LinearWeights::new([0.9, 0.02, 0.03, 0.01, 0.04]).unwrap();
            let swap = |p: usize| match p {
                p if p < RIGHT => BOTTOM + p,
                p if p < BOTTOM => TOP + p - RIGHT,
                p if p < TOP => LEFT + p - BOTTOM,
                p if p < INTERIOR => RIGHT + p - TOP,
                p => { let q = p - INTERIOR; INTERIOR + 3 * (q % 3) + q / 3 }
            };
            // small stencils 2 and 3 trade places under the transpose
            let gt = LinearWeights::new([0.9, 0.02, 0.01, 0.03, 0.04]).unwrap();
            for p in 0..N_POINTS_2D {
                let a = k.linear_point(&s, p);
                let b = k.linear_point(&t, swap(p));
                prop_assert!((a - b).abs() < 1e-12);
                let a = k.hweno_point(&s, p, &g, EPSILON);
                let b = k.hweno_point(&t, swap(p), &gt, EPSILON);
                prop_assert!((a - b).abs() < 1e-12, "point {}: {} vs {}", p, a, b);
            }
        }

        #[test]
        fn weights_are_convex(s in inputs()) {
            let k = kernel();
            let c = k.candidates(&s);
            let g = LinearWeights::<5>::standard();
            let w = nonlinear_weights(&c.beta, &g, EPSILON);
            prop_assert!(w.iter().all(|&x| x >= 0.0));
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
