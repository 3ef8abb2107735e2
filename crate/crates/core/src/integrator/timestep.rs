//! CFL time-step selection.

/// `Production` is the plain CFL step. `Accuracy` multiplies it by
/// `(h / reference)^(2/3)` so the step scales like `h^(5/3)` and third-order
/// time error keeps pace with fifth-order spatial error under refinement.
/// With `reference = 1` the step is the absolute `cfl * h^(5/3) / alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DtMode {
    #[default]
    Production,
    Accuracy {
        reference: f64,
    },
}

impl DtMode {
    fn factor(self, h: f64) -> f64 {
        match self {
            DtMode::Production => 1.0,
            DtMode::Accuracy { reference } => (h / reference).powf(2.0 / 3.0),
        }
    }
}

/// Time step in 1D from the global wave speed `alpha`. `None` when
/// `alpha = 0` (nothing moves; the caller jumps to the final time).
pub fn dt_1d(alpha: f64, dx: f64, cfl: f64, mode: DtMode) -> Option<f64> {
    if alpha <= 0.0 {
        return None;
    }
    Some(cfl * dx / alpha * mode.factor(dx))
}

pub fn dt_2d(alpha: f64, beta: f64, dx: f64, dy: f64, cfl: f64, mode: DtMode) -> Option<f64> {
    let rate = alpha / dx + beta / dy;
    if rate <= 0.0 {
        return None;
    }
    Some(cfl / rate * mode.factor(dx.max(dy)))
}

/// Clamp so that the last step lands on `t_end`. Returns the step and
/// whether it is the last one; the caller then sets `t = t_end` exactly.
pub fn clamp_dt(t: f64, dt: Option<f64>, t_end: f64) -> (f64, bool) {
    let left = t_end - t;
    match dt {
        // avoid a sliver of a final step
        Some(dt) if dt < left && left - dt > 1e-12 * t_end.abs().max(1.0) => (dt, false),
        _ => (left, true),
    }
}
