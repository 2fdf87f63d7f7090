//! Critical domain lengths and the spectrum of the discrete generator.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::discretization::generator;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Real;

/// Largest operator dimension accepted by [`spectrum`].
pub const MAX_DENSE_DIM: usize = 2048;

/// Relative tolerance for merging coincident critical lengths.
const DEDUP_TOL: f64 = 1e-12;

/// A length `2 pi sqrt((k^2 + k l + l^2) / 3)` with `k <= l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLength<T> {
    pub k: u32,
    pub l: u32,
    pub length: T,
}

pub fn critical_length<T: Real>(k: u32, l: u32) -> T {
    let (k, l) = (T::lit(k as f64), T::lit(l as f64));
    T::TAU() * ((k * k + k * l + l * l) / T::lit(3.0)).sqrt()
}

/// All critical lengths up to `max_length`, ascending.
///
/// Pairs that produce the same length (e.g. `(1, 9)` and `(5, 6)`) are
/// reported once, under the pair with the smaller `k`.
pub fn critical_lengths<T: Real>(max_length: T) -> Result<Vec<CriticalLength<T>>> {
    if !(max_length >= T::TAU()) {
        return Err(Error::MaxLengthTooSmall(max_length.to_f64_lossy()));
    }
    // k^2 + k l + l^2 >= l^2, so l <= sqrt(3) * max_length / (2 pi)
    let l_max = (T::lit(3.0).sqrt() * max_length / T::TAU())
        .floor()
        .to_u32()
        .unwrap_or(u32::MAX);
    let mut found = Vec::new();
    for l in 1..=l_max {
        for k in 1..=l {
            let length = critical_length::<T>(k, l);
            if length > max_length {
                break;
            }
            found.push(CriticalLength { k, l, length });
        }
    }
    found.sort_by(|a, b| {
        a.length
            .partial_cmp(&b.length)
            .expect("finite lengths")
            .then(a.k.cmp(&b.k))
    });
    let tol = T::lit(DEDUP_TOL);
    let mut out: Vec<CriticalLength<T>> = Vec::with_capacity(found.len());
    for c in found {
        match out.last() {
            Some(prev) if (c.length - prev.length).abs() <= tol * prev.length => {}
            _ => out.push(c),
        }
    }
    Ok(out)
}

/// The first critical length within `tol` of `length`, if any.
pub fn is_critical<T: Real>(length: T, tol: T) -> Option<CriticalLength<T>> {
    let reach = length + tol;
    if !(reach >= T::TAU()) {
        return None;
    }
    critical_lengths(reach)
        .ok()?
        .into_iter()
        .find(|c| (c.length - length).abs() <= tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    /// Eigenvalues of `L_h`, ascending in magnitude.
    pub eigenvalues: Vec<Complex<T>>,
    /// Eigenvector of the smallest-magnitude eigenvalue with unit dx-weighted
    /// norm, rotated to be real and given a positive mean.
    pub leading_mode: Vec<T>,
    pub dx: T,
    pub length: T,
}

impl<T: Real> SpectrumResult<T> {
    pub fn min_magnitude(&self) -> T {
        self.eigenvalues[0].norm_sqr().sqrt()
    }

    pub fn max_real_part(&self) -> T {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(T::neg_infinity(), T::max)
    }
}

/// Dense eigen-decomposition of the generator on `grid`.
pub fn spectrum<T: Real + RealField>(grid: &Grid<T>) -> Result<SpectrumResult<T>> {
    let op = generator(grid);
    let eigenvalues = dense_eigenvalues(op.dim(), &op.to_dense())?;
    let leading = eigenvalues[0];
    let mode = eigenvector(op.dim(), &op.to_dense(), leading)?;
    let dx = grid.dx();
    let norm = Float::sqrt(dx * mode.iter().map(|&v| v * v).sum::<T>());
    let sign = if mode.iter().copied().sum::<T>() < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    Ok(SpectrumResult {
        eigenvalues,
        leading_mode: mode.iter().map(|&v| sign * v / norm).collect(),
        dx,
        length: grid.length(),
    })
}

/// Eigenvalues of a row-major `dim x dim` matrix, ascending in magnitude
/// (ties broken by imaginary part).
pub fn dense_eigenvalues<T: Real + RealField>(
    dim: usize,
    row_major: &[T],
) -> Result<Vec<Complex<T>>> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::TooLarge {
            dim,
            max: MAX_DENSE_DIM,
        });
    }
    if dim == 0 {
        return Err(Error::EigensolveFailure("empty matrix".into()));
    }
    let m = DMatrix::from_row_slice(dim, dim, row_major);
    let schur = nalgebra::linalg::Schur::try_new(m, T::default_epsilon(), 100 * dim)
        .ok_or_else(|| Error::EigensolveFailure("Schur iteration did not converge".into()))?;
    let mut values: Vec<Complex<T>> = schur.complex_eigenvalues().iter().copied().collect();
    if values
        .iter()
        .any(|z| !Float::is_finite(z.re) || !Float::is_finite(z.im))
    {
        return Err(Error::EigensolveFailure("non-finite eigenvalue".into()));
    }
    values.sort_by(|a, b| {
        a.norm_sqr()
            .partial_cmp(&b.norm_sqr())
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(values)
}

/// Inverse iteration at a computed eigenvalue, returned rotated to be real.
fn eigenvector<T: Real + RealField>(
    dim: usize,
    row_major: &[T],
    lambda: Complex<T>,
) -> Result<Vec<T>> {
    let scale = row_major
        .iter()
        .map(|&v| Float::abs(v))
        .fold(T::zero(), Float::max);
    // nudge off the exact eigenvalue so the shifted matrix stays invertible
    let shift = lambda + Complex::new(T::lit(1e-10) * (T::one() + scale), T::zero());
    let mut shifted = DMatrix::from_fn(dim, dim, |i, j| {
        Complex::new(row_major[i * dim + j], T::zero())
    });
    for i in 0..dim {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut v = DVector::from_element(dim, Complex::new(T::one(), T::zero()));
    for _ in 0..3 {
        v = lu
            .solve(&v)
            .ok_or_else(|| Error::EigensolveFailure("singular shifted matrix".into()))?;
        let n = Float::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<T>());
        if !(Float::is_finite(n) && n > T::zero()) {
            return Err(Error::EigensolveFailure(
                "inverse iteration broke down".into(),
            ));
        }
        v.iter_mut().for_each(|z| *z = z.unscale(n));
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
        .unwrap();
    let phase = pivot.conj().unscale(Float::sqrt(pivot.norm_sqr()));
    Ok(v.iter().map(|z| (z * phase).re).collect())
}
