//! Exact solutions used as error references.

use std::f64::consts::PI;

use crate::error::{HwenoError, Result};

/// Entropy solution of `u_t + (u^2/2)_x = 0` with `u(x,0) = 0.5 + sin(pi x)`
/// on a period of length 2, for any `t >= 0`.
///
/// In the frame moving with speed 0.5 the data is odd about 0 and the shock
/// (after `t = 1/pi`) sits at `x = 1 mod 2`. For `0 < x < 1` the foot of the
/// characteristic is the unique `xi` in `(0, xi_c)` on the rising branch of
/// `xi + t sin(pi xi)`; negative `x` follows from oddness.
pub fn burgers_sine(x: f64, t: f64) -> f64 {
    let s = (x - 0.5 * t + 1.0).rem_euclid(2.0) - 1.0;
    0.5 + odd_branch(s.abs(), t).copysign(s)
}

fn odd_branch(x: f64, t: f64) -> f64 {
    if x == 0.0 || x >= 1.0 {
        return 0.0;
    }
    // end of the rising branch: 1 + t pi cos(pi xi) = 0
    let hi = if t * PI > 1.0 {
        (-1.0 / (t * PI)).acos() / PI
    } else {
        1.0
    };
    let g = |xi: f64| xi + t * (PI * xi).sin() - x;
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
        if b - a < 1e-16 {
            break;
        }
    }
    let mut xi = 0.5 * (a + b);
    for _ in 0..2 {
        let d = 1.0 + t * PI * (PI * xi).cos();
        if d.abs() > 1e-3 {
            xi -= g(xi) / d;
        }
    }
    (PI * xi).sin()
}

/// 2D Burgers with `u(x,y,0) = 0.5 + sin(pi (x+y)/2)` reduces to the 1D
/// problem in `(x+y)/2`.
pub fn burgers_sine_2d(x: f64, y: f64, t: f64) -> f64 {
    burgers_sine(0.5 * (x + y), t)
}

/// Primitive state `(rho, u, p)`.
pub type Primitive = (f64, f64, f64);

/// Exact solution of the 1D Euler Riemann problem for an ideal gas.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
}

impl RiemannSolution {
    pub fn new(left: Primitive, right: Primitive, gamma: f64) -> Result<Self> {
        let g = gamma;
        let (cl, cr) = ((g * left.2 / left.0).sqrt(), (g * right.2 / right.0).sqrt());
        if 2.0 / (g - 1.0) * (cl + cr) <= right.1 - left.1 {
            return Err(HwenoError::config("Riemann data generates vacuum"));
        }
        let wave = |p: f64, (rho, _, pk): Primitive, c: f64| -> (f64, f64) {
            if p > pk {
                let a = 2.0 / ((g + 1.0) * rho);
                let b = (g - 1.0) / (g + 1.0) * pk;
                let q = (a / (p + b)).sqrt();
                ((p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (p + b)))
            } else {
                let r = (p / pk).powf((g - 1.0) / (2.0 * g));
                (2.0 * c / (g - 1.0) * (r - 1.0), r / (rho * c) * pk / p)
            }
        };
        let du = right.1 - left.1;
        let mut p = (0.5 * (left.2 + right.2)).max(1e-8);
        for _ in 0..100 {
            let (fl, dl) = wave(p, left, cl);
            let (fr, dr) = wave(p, right, cr);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-12);
            let done = (next - p).abs() < 1e-15 * (next + p);
            p = next;
            if done {
                break;
            }
        }
        let (fl, _) = wave(p, left, cl);
        let (fr, _) = wave(p, right, cr);
        let u_star = 0.5 * (left.1 + right.1) + 0.5 * (fr - fl);
        Ok(RiemannSolution {
            left,
            right,
            gamma,
            p_star: p,
            u_star,
        })
    }

    /// State at similarity coordinate `s = (x - x0) / t`.
    pub fn sample(&self, s: f64) -> Primitive {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        // reflect the right side onto the left so one code path serves both
        let (side, sign, s) = if s <= us {
            (self.left, 1.0, s)
        } else {
            (self.right, -1.0, -s)
        };
        let (rho, u, p) = (side.0, sign * side.1, side.2);
        let us = sign * us;
        let c = (g * p / rho).sqrt();
        let out = if ps > p {
            let ratio = ps / p;
            let speed = u - c * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
            if s <= speed {
                (rho, u, p)
            } else {
                let gm = (g - 1.0) / (g + 1.0);
                (rho * (ratio + gm) / (gm * ratio + 1.0), us, ps)
            }
        } else {
            let head = u - c;
            let cs = c * (ps / p).powf((g - 1.0) / (2.0 * g));
            let tail = us - cs;
            if s <= head {
                (rho, u, p)
            } else if s >= tail {
                (rho * (ps / p).powf(1.0 / g), us, ps)
            } else {
                let cf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * (u - s));
                let uf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * u + s);
                (
                    rho * (cf / c).powf(2.0 / (g - 1.0)),
                    uf,
                    p * (cf / c).powf(2.0 * g / (g - 1.0)),
                )
            }
        };
        (out.0, sign * out.1, out.2)
    }

    pub fn at(&self, x: f64, x0: f64, t: f64) -> Primitive {
        if t <= 0.0 {
            return if x < x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }
}
