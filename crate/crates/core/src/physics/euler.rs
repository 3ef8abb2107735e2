use super::model::{Axis, Eigensystem, EquationModel, State};
use crate::error::{HwenoError, Result};

pub const GAMMA_AIR: f64 = 1.4;

/// 1D compressible Euler equations, variables `(rho, rho*u, E)`.
#[derive(Debug, Clone, Copy)]
pub struct Euler1d {
    pub gamma: f64,
}

/// 2D compressible Euler equations, variables `(rho, rho*u, rho*v, E)`.
#[derive(Debug, Clone, Copy)]
pub struct Euler2d {
    pub gamma: f64,
}

impl Default for Euler1d {
    fn default() -> Self {
        Euler1d { gamma: GAMMA_AIR }
    }
}

impl Default for Euler2d {
    fn default() -> Self {
        Euler2d { gamma: GAMMA_AIR }
    }
}

impl Euler1d {
    pub fn pressure(&self, u: &State<3>) -> f64 {
        (self.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
    }

    /// Conserved state from `(rho, velocity, pressure)`.
    pub fn conserved(&self, rho: f64, vel: f64, p: f64) -> State<3> {
        [
            rho,
            rho * vel,
            p / (self.gamma - 1.0) + 0.5 * rho * vel * vel,
        ]
    }

    pub fn primitive(&self, u: &State<3>) -> (f64, f64, f64) {
        (u[0], u[1] / u[0], self.pressure(u))
    }
}

impl Euler2d {
    pub fn pressure(&self, u: &State<4>) -> f64 {
        (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }

    pub fn conserved(&self, rho: f64, vx: f64, vy: f64, p: f64) -> State<4> {
        [
            rho,
            rho * vx,
            rho * vy,
            p / (self.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy),
        ]
    }

    pub fn primitive(&self, u: &State<4>) -> (f64, f64, f64, f64) {
        (u[0], u[1] / u[0], u[2] / u[0], self.pressure(u))
    }
}

fn sound_speed(gamma: f64, rho: f64, p: f64) -> f64 {
    (gamma * p.max(0.0) / rho).sqrt()
}

fn check_average(rho: f64, p: f64) -> Result<()> {
    if !(rho > 0.0 && p > 0.0) {
        return Err(HwenoError::NumericalState(format!(
            "interface average has rho = {rho:e}, p = {p:e}"
        )));
    }
    Ok(())
}

/// Eigenvectors in the rotated frame `(rho, m_normal, m_tangential, E)`.
fn eigensystem_normal(
    gamma: f64,
    un: f64,
    ut: f64,
    h: f64,
    c: f64,
) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let q2 = un * un + ut * ut;
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = 0.5 * b1 * q2;
    let right = [
        [1.0, 1.0, 0.0, 1.0],
        [un - c, un, 0.0, un + c],
        [ut, ut, 1.0, ut],
        [h - un * c, 0.5 * q2, ut, h + un * c],
    ];
    let left = [
        [
            0.5 * (b2 + un / c),
            -0.5 * (b1 * un + 1.0 / c),
            -0.5 * b1 * ut,
            0.5 * b1,
        ],
        [1.0 - b2, b1 * un, b1 * ut, -b1],
        [-ut, 0.0, 1.0, 0.0],
        [
            0.5 * (b2 - un / c),
            -0.5 * (b1 * un - 1.0 / c),
            -0.5 * b1 * ut,
            0.5 * b1,
        ],
    ];
    (left, right)
}

impl EquationModel<3> for Euler1d {
    fn name(&self) -> &'static str {
        "euler1d"
    }

    #[inline]
    fn flux(&self, u: &State<3>, _axis: Axis) -> State<3> {
        let vel = u[1] / u[0];
        let p = self.pressure(u);
        [u[1], u[1] * vel + p, vel * (u[2] + p)]
    }

    #[inline]
    fn spectral_radius(&self, u: &State<3>, _axis: Axis) -> f64 {
        let (rho, vel, p) = self.primitive(u);
        vel.abs() + sound_speed(self.gamma, rho, p)
    }

    fn eigensystem(&self, ul: &State<3>, ur: &State<3>, _axis: Axis) -> Result<Eigensystem<3>> {
        let avg = [
            0.5 * (ul[0] + ur[0]),
            0.5 * (ul[1] + ur[1]),
            0.5 * (ul[2] + ur[2]),
        ];
        let (rho, vel, p) = self.primitive(&avg);
        check_average(rho, p)?;
        let c = sound_speed(self.gamma, rho, p);
        let h = (avg[2] + p) / rho;
        let (l4, r4) = eigensystem_normal(self.gamma, vel, 0.0, h, c);
        // drop the shear wave and the tangential momentum
        const KEEP: [usize; 3] = [0, 1, 3];
        let mut left = [[0.0; 3]; 3];
        let mut right = [[0.0; 3]; 3];
        for (a, &ra) in KEEP.iter().enumerate() {
            for (b, &rb) in KEEP.iter().enumerate() {
                left[a][b] = l4[ra][rb];
                right[a][b] = r4[ra][rb];
            }
        }
        Ok(Eigensystem { left, right })
    }

    fn indicator_variables(&self) -> &'static [usize] {
        &[0, 2]
    }

    #[inline]
    fn transport_velocity(&self, u: &State<3>, _axis: Axis) -> f64 {
        u[1] / u[0]
    }

    fn reflection_signs(&self, _axis: Axis) -> State<3> {
        [1.0, -1.0, 1.0]
    }

    fn is_admissible(&self, u: &State<3>) -> bool {
        u[0] > 0.0 && self.pressure(u) > 0.0
    }

    fn density_pressure(&self, u: &State<3>) -> Option<(f64, f64)> {
        Some((u[0], self.pressure(u)))
    }
}

impl EquationModel<4> for Euler2d {
    fn name(&self) -> &'static str {
        "euler2d"
    }

    #[inline]
    fn flux(&self, u: &State<4>, axis: Axis) -> State<4> {
        let p = self.pressure(u);
        match axis {
            Axis::X => {
                let vx = u[1] / u[0];
                [u[1], u[1] * vx + p, u[2] * vx, vx * (u[3] + p)]
            }
            Axis::Y => {
                let vy = u[2] / u[0];
                [u[2], u[1] * vy, u[2] * vy + p, vy * (u[3] + p)]
            }
        }
    }

    #[inline]
    fn spectral_radius(&self, u: &State<4>, axis: Axis) -> f64 {
        let (rho, vx, vy, p) = self.primitive(u);
        let vn = match axis {
            Axis::X => vx,
            Axis::Y => vy,
        };
        vn.abs() + sound_speed(self.gamma, rho, p)
    }

    fn eigensystem(&self, ul: &State<4>, ur: &State<4>, axis: Axis) -> Result<Eigensystem<4>> {
        let avg = [
            0.5 * (ul[0] + ur[0]),
            0.5 * (ul[1] + ur[1]),
            0.5 * (ul[2] + ur[2]),
            0.5 * (ul[3] + ur[3]),
        ];
        let (rho, vx, vy, p) = self.primitive(&avg);
        check_average(rho, p)?;
        let c = sound_speed(self.gamma, rho, p);
        let h = (avg[3] + p) / rho;
        match axis {
            Axis::X => {
                let (left, right) = eigensystem_normal(self.gamma, vx, vy, h, c);
                Ok(Eigensystem { left, right })
            }
            Axis::Y => {
                // rotated frame swaps the two momentum components
                let (lr, rr) = eigensystem_normal(self.gamma, vy, vx, h, c);
                const P: [usize; 4] = [0, 2, 1, 3];
                let mut left = [[0.0; 4]; 4];
                let mut right = [[0.0; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        left[a][b] = lr[a][P[b]];
                        right[a][b] = rr[P[a]][b];
                    }
                }
                Ok(Eigensystem { left, right })
            }
        }
    }

    fn indicator_variables(&self) -> &'static [usize] {
        &[0, 3]
    }

    #[inline]
    fn transport_velocity(&self, u: &State<4>, axis: Axis) -> f64 {
        match axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        }
    }

    fn reflection_signs(&self, axis: Axis) -> State<4> {
        match axis {
            Axis::X => [1.0, -1.0, 1.0, 1.0],
            Axis::Y => [1.0, 1.0, -1.0, 1.0],
        }
    }

    fn is_admissible(&self, u: &State<4>) -> bool {
        u[0] > 0.0 && self.pressure(u) > 0.0
    }

    fn density_pressure(&self, u: &State<4>) -> Option<(f64, f64)> {
        Some((u[0], self.pressure(u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::model::wavespeed_bound;

    fn matmul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
        let mut c = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                c[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    fn assert_identity<const N: usize>(m: &[[f64; N]; N], tol: f64) {
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < tol, "({i},{j}) = {v}");
            }
        }
    }

    /// Central-difference Jacobian of the flux, independent of the
    /// closed-form eigenvectors.
    fn fd_jacobian<M: EquationModel<N>, const N: usize>(
        model: &M,
        u: &State<N>,
        axis: Axis,
    ) -> [[f64; N]; N] {
        let mut jac = [[0.0; N]; N];
        for b in 0..N {
            let h = 1e-6 * u[b].abs().max(1.0);
            let mut up = *u;
            let mut um = *u;
            up[b] += h;
            um[b] -= h;
            let fp = model.flux(&up, axis);
            let fm = model.flux(&um, axis);
            for a in 0..N {
                jac[a][b] = (fp[a] - fm[a]) / (2.0 * h);
            }
        }
        jac
    }

    fn check_diagonalizes<M: EquationModel<N>, const N: usize>(
        model: &M,
        u: &State<N>,
        axis: Axis,
    ) {
        let es = model.eigensystem(u, u, axis).unwrap();
        assert_identity(&matmul(&es.left, &es.right), 1e-12);
        let jac = fd_jacobian(model, u, axis);
        // L A R must be diagonal
        let d = matmul(&es.left, &matmul(&jac, &es.right));
        let scale = model.spectral_radius(u, axis).max(1.0);
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    assert!(
                        d[i][j].abs() < 1e-7 * scale,
                        "off-diagonal ({i},{j}) = {}",
                        d[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn euler1d_flux_of_rest_state() {
        let m = Euler1d::default();
        let u = [1.0, 1.0, 2.5];
        // p = 0.4 * (2.5 - 0.5) = 0.8
        let p = 0.4 * (2.5 - 0.5);
        let f = m.flux(&u, Axis::X);
        assert!((f[0] - 1.0).abs() < 1e-15);
        assert!((f[1] - (1.0 + p)).abs() < 1e-15);
        assert!((f[2] - (2.5 + p)).abs() < 1e-15);
    }

    #[test]
    fn euler1d_eigenvalues_at_rest() {
        let m = Euler1d::default();
        let u = m.conserved(1.0, 0.0, 1.0);
        let es = m.eigensystem(&u, &u, Axis::X).unwrap();
        let jac = fd_jacobian(&m, &u, Axis::X);
        let d = matmul(&es.left, &matmul(&jac, &es.right));
        let c = 1.4_f64.sqrt();
        assert!((d[0][0] + c).abs() < 1e-8);
        assert!(d[1][1].abs() < 1e-8);
        assert!((d[2][2] - c).abs() < 1e-8);
    }

    #[test]
    fn euler_eigensystems_diagonalize_jacobian() {
        let m1 = Euler1d::default();
        let m2 = Euler2d::default();
        let samples = [
            (1.0, 0.3, -0.7, 1.0),
            (0.445, 0.698, 0.1, 3.528),
            (8.0, 7.1447, -4.125, 116.5),
            (0.2, -2.0, 1.5, 0.05),
        ];
        for &(rho, vx, vy, p) in &samples {
            check_diagonalizes(&m1, &m1.conserved(rho, vx, p), Axis::X);
            check_diagonalizes(&m2, &m2.conserved(rho, vx, vy, p), Axis::X);
            check_diagonalizes(&m2, &m2.conserved(rho, vx, vy, p), Axis::Y);
        }
    }

    #[test]
    fn characteristic_round_trip() {
        let m = Euler2d::default();
        let a = m.conserved(1.2, 0.4, -0.3, 2.0);
        let b = m.conserved(0.9, -0.1, 0.6, 1.5);
        let es = m.eigensystem(&a, &b, Axis::Y).unwrap();
        let q = [0.3, -1.7, 2.2, 5.0];
        let back = es.to_physical(&es.to_characteristic(&q));
        for k in 0..4 {
            assert!((back[k] - q[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn non_physical_average_is_rejected() {
        let m = Euler1d::default();
        let bad = [1.0, 0.0, -1.0];
        assert!(matches!(
            m.eigensystem(&bad, &bad, Axis::X),
            Err(HwenoError::NumericalState(_))
        ));
        let vacuum = [-1.0, 0.0, 1.0];
        assert!(m.eigensystem(&vacuum, &vacuum, Axis::X).is_err());
    }

    #[test]
    fn euler_wavespeed() {
        let m = Euler1d::default();
        let u = m.conserved(1.0, 1.0, 1.0);
        let a = wavespeed_bound([&u], &m, Axis::X).unwrap();
        assert!((a - (1.0 + 1.4_f64.sqrt())).abs() < 1e-14);
    }
}
