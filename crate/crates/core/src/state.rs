use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Real;

/// Interior nodal values of `y(t, .)` on a grid.
///
/// The boundary values `y_0 = y_N = 0` are implicit and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    grid: Grid<T>,
    values: Vec<T>,
    time: T,
}

impl<T: Real> State<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>, time: T) -> Result<Self> {
        if values.len() != grid.interior_len() {
            return Err(Error::SampleLengthMismatch {
                expected: grid.interior_len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        if !(time >= T::zero()) {
            return Err(Error::ConfigInvalid(format!(
                "state time must be non-negative, got {time}"
            )));
        }
        Ok(Self { grid, values, time })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            values: vec![T::zero(); grid.interior_len()],
            grid,
            time: T::zero(),
        }
    }

    /// Samples `f` at the interior nodes.
    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.interior_nodes().map(f).collect();
        Self::new(grid, values, T::zero())
    }

    /// Crate-internal constructor for values already known to be finite.
    pub(crate) fn from_parts_unchecked(grid: Grid<T>, values: Vec<T>, time: T) -> Self {
        debug_assert_eq!(values.len(), grid.interior_len());
        Self { grid, values, time }
    }

    #[inline]
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn time(&self) -> T {
        self.time
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn with_time(mut self, time: T) -> Self {
        self.time = time;
        self
    }

    /// New state on the same grid and time stamp with `f` applied nodewise.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            time: self.time,
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        self.map(|v| c * v)
    }

    /// `self - other`, keeping the time stamp of `self`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
            time: self.time,
        })
    }

    /// dx-weighted inner product over interior nodes.
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.check_same_len(other)?;
        Ok(weighted_dot(self.grid.dx(), &self.values, &other.values))
    }

    /// dx-weighted squared L2 norm.
    pub fn norm_sq(&self) -> T {
        weighted_dot(self.grid.dx(), &self.values, &self.values)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub(crate) fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn weighted_dot<T: Real>(dx: T, a: &[T], b: &[T]) -> T {
    dx * a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>()
}

pub(crate) fn weighted_norm<T: Real>(dx: T, a: &[T]) -> T {
    weighted_dot(dx, a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        let g = Grid::new(1.0, 8).unwrap();
        assert_eq!(
            State::new(g, vec![0.0; 8], 0.0),
            Err(Error::SampleLengthMismatch {
                expected: 7,
                got: 8
            })
        );
        let mut v = vec![0.0; 7];
        v[3] = f64::INFINITY;
        assert_eq!(
            State::new(g, v, 0.0),
            Err(Error::NonFiniteValue { index: 3 })
        );
    }

    #[test]
    fn weighted_norm_of_constant() {
        let g = Grid::new(1.0f64, 10).unwrap();
        let s = State::new(g, vec![2.0; 9], 0.0).unwrap();
        assert!((s.norm_sq() - 0.1 * 9.0 * 4.0).abs() < 1e-14);
    }
}
