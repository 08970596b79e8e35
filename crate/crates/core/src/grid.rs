use crate::error::{Error, Result};

/// Coordinate direction of a face normal or a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    /// Zero-based tensor index (0 for x, 1 for y).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// Uniform periodic 2D grid.
///
/// Cell `(p, q)` has its center at `(x0 + (p + 1/2) dx, y0 + (q + 1/2) dy)`.
/// Vertex index `(a, b)` sits at `(x0 + a dx, y0 + b dy)`, so the upper-right
/// corner of cell `(p, q)` is vertex `(p + 1, q + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    pub ghost: usize,
}

/// Ghost width needed by the MUSCL stencil.
pub const DEFAULT_GHOST: usize = 2;

impl Grid2D {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, x0: f64, y0: f64, ghost: usize) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::InvalidGrid("at least 4 cells per axis are required"));
        }
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidGrid("cell sizes must be positive and finite"));
        }
        if ghost < DEFAULT_GHOST {
            return Err(Error::InvalidGrid("ghost width below stencil requirement"));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            x0,
            y0,
            ghost,
        })
    }

    /// `nx` by `ny` cells on the periodic unit square.
    pub fn unit_square(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, 1.0 / nx as f64, 1.0 / ny as f64, 0.0, 0.0, DEFAULT_GHOST)
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy
    }

    #[inline]
    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
        }
    }

    #[inline]
    pub fn cell_center(&self, p: usize, q: usize) -> (f64, f64) {
        (
            self.x0 + (p as f64 + 0.5) * self.dx,
            self.y0 + (q as f64 + 0.5) * self.dy,
        )
    }

    #[inline]
    pub fn vertex(&self, a: usize, b: usize) -> (f64, f64) {
        (self.x0 + a as f64 * self.dx, self.y0 + b as f64 * self.dy)
    }

    /// Periodic wrap of a signed cell index along x.
    #[inline]
    pub fn wrap_x(&self, p: isize) -> usize {
        p.rem_euclid(self.nx as isize) as usize
    }

    #[inline]
    pub fn wrap_y(&self, q: isize) -> usize {
        q.rem_euclid(self.ny as isize) as usize
    }

    /// Padded extents including ghost layers.
    #[inline]
    pub fn padded(&self) -> (usize, usize) {
        (self.nx + 2 * self.ghost, self.ny + 2 * self.ghost)
    }

    pub fn min_spacing(&self) -> f64 {
        self.dx.min(self.dy)
    }
}
