use crate::error::{HwenoError, Result};

/// Ghost layers on every side. The reconstruction stencil reaches one
/// neighbor; the second layer lets ghost cells be reconstructed too.
pub const GHOST_DEPTH: usize = 2;

/// Uniform 1D mesh on `[x_lo, x_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1 {
    pub n_cells: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub dx: f64,
    pub n_ghost: usize,
}

impl Grid1 {
    pub fn new(n_cells: usize, x_lo: f64, x_hi: f64) -> Result<Self> {
        if n_cells == 0 {
            return Err(HwenoError::config("grid needs at least one cell"));
        }
        let dx = (x_hi - x_lo) / n_cells as f64;
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(HwenoError::config(format!(
                "invalid extent [{x_lo}, {x_hi}]"
            )));
        }
        Ok(Grid1 {
            n_cells,
            x_lo,
            x_hi,
            dx,
            n_ghost: GHOST_DEPTH,
        })
    }

    /// Total storage length including ghosts.
    #[inline]
    pub fn len(&self) -> usize {
        self.n_cells + 2 * self.n_ghost
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Storage index of interior cell `i` (may be negative or `>= n` for
    /// ghosts).
    #[inline]
    pub fn idx(&self, i: isize) -> usize {
        (i + self.n_ghost as isize) as usize
    }

    /// Center of (possibly ghost) cell `i`.
    #[inline]
    pub fn center(&self, i: isize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        self.n_ghost..self.n_ghost + self.n_cells
    }
}

/// Uniform 2D mesh on `[x_lo, x_hi] x [y_lo, y_hi]`, stored row-major with
/// `x` fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub nx: usize,
    pub ny: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub dx: f64,
    pub dy: f64,
    pub n_ghost: usize,
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(HwenoError::config(
                "grid needs at least one cell per direction",
            ));
        }
        let dx = (x.1 - x.0) / nx as f64;
        let dy = (y.1 - y.0) / ny as f64;
        if !(dx > 0.0 && dy > 0.0) || !(dx.is_finite() && dy.is_finite()) {
            return Err(HwenoError::config("invalid 2D extent"));
        }
        Ok(Grid2 {
            nx,
            ny,
            x_lo: x.0,
            x_hi: x.1,
            y_lo: y.0,
            y_hi: y.1,
            dx,
            dy,
            n_ghost: GHOST_DEPTH,
        })
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * self.n_ghost
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.stride() * (self.ny + 2 * self.n_ghost)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.n_ghost as isize;
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }

    /// Inverse of [`Grid2::idx`].
    #[inline]
    pub fn ij(&self, k: usize) -> (isize, isize) {
        let g = self.n_ghost as isize;
        let s = self.stride();
        ((k % s) as isize - g, (k / s) as isize - g)
    }

    #[inline]
    pub fn center(&self, i: isize, j: isize) -> (f64, f64) {
        (
            self.x_lo + (i as f64 + 0.5) * self.dx,
            self.y_lo + (j as f64 + 0.5) * self.dy,
        )
    }

    #[inline]
    pub fn is_interior(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}
