use super::model::State;

/// Lax-Friedrichs flux `(f(u-) + f(u+))/2 - alpha/2 (u+ - u-)`.
#[inline]
pub fn lax_friedrichs<const N: usize>(
    u_minus: &State<N>,
    u_plus: &State<N>,
    flux: impl Fn(&State<N>) -> State<N>,
    alpha: f64,
) -> State<N> {
    let fm = flux(u_minus);
    let fp = flux(u_plus);
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = 0.5 * (fm[k] + fp[k]) - 0.5 * alpha * (u_plus[k] - u_minus[k]);
    }
    out
}
