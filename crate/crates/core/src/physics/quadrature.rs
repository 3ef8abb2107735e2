//! Quadrature rules on the reference cell `[-1/2, 1/2]`.
//!
//! Nodes are offsets from the cell center in units of the cell width and the
//! weights are normalized to sum to one, so `sum w_k f(x_i + s_k dx)` is the
//! cell average of `f`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule<const K: usize> {
    pub nodes: [f64; K],
    pub weights: [f64; K],
}

/// sqrt(5)/10
pub const SQRT5_10: f64 = 0.223_606_797_749_978_97;
/// sqrt(15)/10
pub const SQRT15_10: f64 = 0.387_298_334_620_741_7;

/// Four-point Gauss-Lobatto rule used for the in-cell flux integral in 1D.
/// Exact through degree 5.
pub const GAUSS_LOBATTO_4: QuadratureRule<4> = QuadratureRule {
    nodes: [-0.5, -SQRT5_10, SQRT5_10, 0.5],
    weights: [1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0],
};

/// Three-point Gauss rule for edge and volume integrals in 2D. Exact through
/// degree 5.
pub const GAUSS_3: QuadratureRule<3> = QuadratureRule {
    nodes: [-SQRT15_10, 0.0, SQRT15_10],
    weights: [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
};

/// Five-point Gauss-Legendre rule for initial data and exact cell averages.
/// Exact through degree 9.
pub const GAUSS_5: QuadratureRule<5> = QuadratureRule {
    nodes: [
        -0.453_089_922_969_332_0,
        -0.269_234_655_052_841_55,
        0.0,
        0.269_234_655_052_841_55,
        0.453_089_922_969_332_0,
    ],
    weights: [
        0.118_463_442_528_094_54,
        0.239_314_335_249_683_23,
        0.284_444_444_444_444_45,
        0.239_314_335_249_683_23,
        0.118_463_442_528_094_54,
    ],
};

impl<const K: usize> QuadratureRule<K> {
    /// Cell average of `f` over `[center - width/2, center + width/2]`.
    pub fn average(&self, center: f64, width: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w * f(center + s * width))
            .sum()
    }
}
