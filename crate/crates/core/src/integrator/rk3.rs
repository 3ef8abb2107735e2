//! Three-stage TVD Runge-Kutta.

use crate::error::{HwenoError, Result};
use crate::state::RkState;

/// One step `u <- u(t + dt)`.
///
/// `stage(u, k)` evaluates the spatial operator on stage `k` (0, 1, 2). It
/// may modify its argument first (moment limiting), and the modified state
/// is what enters the stage combinations.
pub fn step_rk3<S, F>(u: &mut S, dt: f64, t: f64, mut stage: F) -> Result<()>
where
    S: RkState,
    F: FnMut(&mut S, usize) -> Result<S>,
{
    let check = |s: &S, k: usize| match s.first_non_finite() {
        Some(cell) => Err(HwenoError::NonFinite {
            stage: k,
            cell,
            time: t,
        }),
        None => Ok(()),
    };

    let l0 = stage(u, 0)?;
    let mut u1 = u.clone();
    u1.axpy(dt, &l0);
    check(&u1, 1)?;

    let l1 = stage(&mut u1, 1)?;
    let mut u2 = u.clone();
    u2.scale(0.75);
    u2.axpy(0.25, &u1);
    u2.axpy(0.25 * dt, &l1);
    check(&u2, 2)?;

    let l2 = stage(&mut u2, 2)?;
    u.scale(1.0 / 3.0);
    u.axpy(2.0 / 3.0, &u2);
    u.axpy(2.0 / 3.0 * dt, &l2);
    check(u, 3)
}
