use crate::error::{HwenoError, Result};
use rand::Rng;

/// Regularization in the nonlinear weights.
pub const EPSILON: f64 = 1e-6;

/// Positive weights summing to one. Index 0 belongs to the high-degree
/// candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWeights<const K: usize>([f64; K]);

impl<const K: usize> LinearWeights<K> {
    pub fn new(gamma: [f64; K]) -> Result<Self> {
        if gamma.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(HwenoError::config(format!(
                "linear weights must be positive: {gamma:?}"
            )));
        }
        let sum: f64 = gamma.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(HwenoError::config(format!(
                "linear weights sum to {sum}, not 1"
            )));
        }
        Ok(LinearWeights(gamma))
    }

    /// Every low-degree candidate gets `low`, the high-degree one the rest.
    pub fn low_degree(low: f64) -> Result<Self> {
        let mut g = [low; K];
        g[0] = 1.0 - low * (K - 1) as f64;
        Self::new(g)
    }

    /// 0.01 for each low-degree polynomial.
    pub fn standard() -> Self {
        Self::low_degree(0.01).expect("0.01 weights are valid")
    }

    pub fn uniform() -> Self {
        let mut g = [1.0 / K as f64; K];
        let rest: f64 = g[1..].iter().sum();
        g[0] = 1.0 - rest;
        LinearWeights(g)
    }

    /// Independent uniform draws on `(0, 1]`, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut g = [0.0; K];
        for x in g.iter_mut() {
            *x = 1.0 - rng.random::<f64>();
        }
        let sum: f64 = g.iter().sum();
        for x in g.iter_mut() {
            *x /= sum;
        }
        let rest: f64 = g[1..].iter().sum();
        g[0] = 1.0 - rest;
        LinearWeights(g)
    }

    #[inline]
    pub fn get(&self) -> &[f64; K] {
        &self.0
    }
}

/// Nonlinear weights `w_n = g_n (1 + tau/(beta_n + eps))`, normalized, with
/// `tau` the squared mean of `|beta_0 - beta_n|` over the low-degree
/// candidates.
#[inline]
pub fn nonlinear_weights<const K: usize>(
    beta: &[f64; K],
    gamma: &LinearWeights<K>,
    eps: f64,
) -> [f64; K] {
    let mean_diff = beta[1..].iter().map(|b| (beta[0] - b).abs()).sum::<f64>() / (K - 1) as f64;
    let tau = mean_diff * mean_diff;
    let mut w = [0.0; K];
    let mut sum = 0.0;
    for n in 0..K {
        w[n] = gamma.0[n] * (1.0 + tau / (beta[n] + eps));
        sum += w[n];
    }
    for x in w.iter_mut() {
        *x /= sum;
    }
    w
}

/// `w_0 (p_0/g_0 - sum g_n/g_0 p_n) + sum w_n p_n`.
#[inline]
pub fn combine<const K: usize>(
    values: &[f64; K],
    omega: &[f64; K],
    gamma: &LinearWeights<K>,
) -> f64 {
    let g = &gamma.0;
    let mut high = values[0];
    let mut low = 0.0;
    for n in 1..K {
        high -= g[n] * values[n];
        low += omega[n] * values[n];
    }
    omega[0] * high / g[0] + low
}
