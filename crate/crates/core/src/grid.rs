//! Uniform mesh on `[0, L]`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 8;

/// Uniform grid with nodes `x_i = i * dx`, `i = 0..=N`.
///
/// Only the `N - 1` interior nodes carry unknowns; `x_0 = 0` and `x_N = L`
/// are Dirichlet nodes whose values are identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    length: T,
    n_cells: usize,
    dx: T,
}

impl<T: Real> Grid<T> {
    pub fn new(length: T, n_cells: usize) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::NonPositiveLength(length.to_f64_lossy()));
        }
        if n_cells < MIN_CELLS {
            return Err(Error::TooFewCells {
                got: n_cells,
                min: MIN_CELLS,
            });
        }
        Ok(Self {
            length,
            n_cells,
            dx: length / T::from_count(n_cells),
        })
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    /// Number of unknowns, `N - 1`.
    #[inline]
    pub fn interior_len(&self) -> usize {
        self.n_cells - 1
    }

    /// Coordinate of grid node `i` (`0..=N`).
    #[inline]
    pub fn node(&self, i: usize) -> T {
        T::from_count(i) * self.dx
    }

    /// Coordinates of the interior nodes `x_1 .. x_{N-1}`.
    pub fn interior_nodes(&self) -> impl ExactSizeIterator<Item = T> + '_ {
        (1..self.n_cells).map(move |i| self.node(i))
    }

    /// The same domain with twice as many cells.
    pub fn refined(&self) -> Self {
        Self {
            length: self.length,
            n_cells: 2 * self.n_cells,
            dx: self.length / T::from_count(2 * self.n_cells),
        }
    }
}

/// Builds a grid on `[0, length]` with `n_cells` cells.
pub fn make_grid<T: Real>(length: T, n_cells: usize) -> Result<Grid<T>> {
    Grid::new(length, n_cells)
}
