use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid2D;

/// Component offsets inside a cell vector.
pub mod comp {
    pub const RHO: usize = 0;
    pub const MOM: usize = 1;
    pub const J: usize = 4;
    pub const PSI: usize = 7;
    pub const PHI: usize = 10;
}

/// Largest component count of any formulation.
pub const MAX_COMP: usize = 11;

/// Cell-centered conserved variables with periodic ghost layers.
///
/// Storage is cell-major: the `ncomp` components of one cell are contiguous,
/// cells run fastest along x. Extents are `(nx + 2 ghost) x (ny + 2 ghost)`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    nx: usize,
    ny: usize,
    ghost: usize,
    ncomp: usize,
    data: Vec<f64>,
}

impl State {
    pub fn zeros(grid: &Grid2D, ncomp: usize) -> Self {
        assert!((1..=MAX_COMP).contains(&ncomp));
        let (px, py) = grid.padded();
        Self {
            nx: grid.nx,
            ny: grid.ny,
            ghost: grid.ghost,
            ncomp,
            data: vec![0.0; px * py * ncomp],
        }
    }

    /// Fills interior cells from `f(p, q, out)` and refreshes ghosts.
    pub fn from_fn(grid: &Grid2D, ncomp: usize, mut f: impl FnMut(usize, usize, &mut [f64])) -> Self {
        let mut s = Self::zeros(grid, ncomp);
        for q in 0..grid.ny {
            for p in 0..grid.nx {
                f(p, q, s.cell_mut(p, q));
            }
        }
        s.fill_ghosts();
        s
    }

    #[inline]
    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    #[inline]
    pub fn ghost(&self) -> usize {
        self.ghost
    }

    #[inline]
    pub fn stride_y(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    pub fn matches(&self, grid: &Grid2D, ncomp: usize) -> Result<()> {
        let (px, py) = grid.padded();
        let expected = px * py * ncomp;
        if self.nx != grid.nx || self.ny != grid.ny || self.ghost != grid.ghost || self.ncomp != ncomp {
            return Err(Error::LayoutMismatch {
                expected,
                found: self.data.len(),
            });
        }
        Ok(())
    }

    /// Offset of padded cell `(a, b)`.
    #[inline]
    pub fn padded_offset(&self, a: usize, b: usize) -> usize {
        (b * self.stride_y() + a) * self.ncomp
    }

    #[inline]
    pub fn padded_cell(&self, a: usize, b: usize) -> &[f64] {
        let o = self.padded_offset(a, b);
        &self.data[o..o + self.ncomp]
    }

    #[inline]
    pub fn cell(&self, p: usize, q: usize) -> &[f64] {
        self.padded_cell(p + self.ghost, q + self.ghost)
    }

    #[inline]
    pub fn cell_mut(&mut self, p: usize, q: usize) -> &mut [f64] {
        let o = self.padded_offset(p + self.ghost, q + self.ghost);
        &mut self.data[o..o + self.ncomp]
    }

    /// Raw padded storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Copies periodic images into the ghost layers.
    pub fn fill_ghosts(&mut self) {
        let (nx, ny, g, n) = (self.nx, self.ny, self.ghost, self.ncomp);
        let (px, py) = (nx + 2 * g, ny + 2 * g);
        for b in 0..py {
            let src_b = (b + ny - g % ny) % ny + g;
            for a in 0..px {
                let interior = a >= g && a < nx + g && b >= g && b < ny + g;
                if interior {
                    continue;
                }
                let src_a = (a + nx - g % nx) % nx + g;
                let src = self.padded_offset(src_a, src_b);
                let dst = self.padded_offset(a, b);
                self.data.copy_within(src..src + n, dst);
            }
        }
    }

    /// Sum of one component over interior cells.
    pub fn interior_sum(&self, c: usize) -> f64 {
        let mut s = 0.0;
        for q in 0..self.ny {
            for p in 0..self.nx {
                s += self.cell(p, q)[c];
            }
        }
        s
    }

    /// Iterator over interior cell vectors in `(p, q)` order, x fastest.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, &[f64])> + '_ {
        (0..self.ny).flat_map(move |q| (0..self.nx).map(move |p| (p, q, self.cell(p, q))))
    }

    /// Interior values of one component as a dense `nx * ny` vector.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.interior().map(|(_, _, v)| v[c]).collect()
    }

    /// Rotates interior data by whole cells (periodic shift).
    pub fn shifted(&self, grid: &Grid2D, sx: isize, sy: isize) -> Self {
        let mut out = Self::zeros(grid, self.ncomp);
        for q in 0..self.ny {
            for p in 0..self.nx {
                let tp = grid.wrap_x(p as isize + sx);
                let tq = grid.wrap_y(q as isize + sy);
                out.cell_mut(tp, tq).copy_from_slice(self.cell(p, q));
            }
        }
        out.fill_ghosts();
        out
    }
}
