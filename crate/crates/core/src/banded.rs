//! Square band matrices and their LU factorization with partial pivoting.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square matrix with `lower` sub-diagonals and `upper` super-diagonals.
///
/// Stored row by row: entry `(i, j)` lives at `i * width + (j + lower - i)`
/// with `width = lower + upper + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix<T> {
    dim: usize,
    lower: usize,
    upper: usize,
    data: Vec<T>,
}

impl<T: Real> BandedMatrix<T> {
    pub fn zeros(dim: usize, lower: usize, upper: usize) -> Self {
        Self {
            dim,
            lower,
            upper,
            data: vec![T::zero(); dim * (lower + upper + 1)],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 0, 0);
        m.data.iter_mut().for_each(|v| *v = T::one());
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn lower_bandwidth(&self) -> usize {
        self.lower
    }

    #[inline]
    pub fn upper_bandwidth(&self) -> usize {
        self.upper
    }

    #[inline]
    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.dim && j < self.dim && j + self.lower >= i && j <= i + self.upper
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[i * self.width() + j + self.lower - i]
        } else {
            T::zero()
        }
    }

    /// Adds `value` to entry `(i, j)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn add_to(&mut self, i: usize, j: usize, value: T) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band ({}, {})",
            self.lower,
            self.upper
        );
        let w = self.width();
        self.data[i * w + j + self.lower - i] = self.data[i * w + j + self.lower - i] + value;
    }

    /// Nonzero pattern as `(i, j, value)` triples, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.dim - 1);
            (lo..=hi).map(move |j| (i, j, self.get(i, j)))
        })
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `out = self * x`
    pub fn mul_vec_into(&self, x: &[T], out: &mut [T]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        let w = self.width();
        for (i, o) in out.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.dim - 1);
            let row = &self.data[i * w..(i + 1) * w];
            let mut acc = T::zero();
            for j in lo..=hi {
                acc = acc + row[j + self.lower - i] * x[j];
            }
            *o = acc;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        self.mul_vec_into(x, &mut out);
        out
    }

    /// `alpha * self + beta * other`, with the union of both bands.
    pub fn linear_combination(&self, alpha: T, other: &Self, beta: T) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zeros(
            self.dim,
            self.lower.max(other.lower),
            self.upper.max(other.upper),
        );
        for (i, j, v) in self.entries() {
            out.add_to(i, j, alpha * v);
        }
        for (i, j, v) in other.entries() {
            out.add_to(i, j, beta * v);
        }
        out
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            data: self.data.iter().map(|&v| c * v).collect(),
            ..self.clone()
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<T> {
        let mut dense = vec![T::zero(); self.dim * self.dim];
        for (i, j, v) in self.entries() {
            dense[i * self.dim + j] = v;
        }
        dense
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim, self.upper, self.lower);
        for (i, j, v) in self.entries() {
            t.add_to(j, i, v);
        }
        t
    }

    pub fn factorize(&self) -> Result<BandedLu<T>> {
        BandedLu::new(self)
    }
}

/// LU factors of a band matrix, row pivoting restricted to the band.
///
/// Pivoting widens the upper band of `U` to `lower + upper`.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    dim: usize,
    lower: usize,
    /// Upper bandwidth of `U`.
    u_upper: usize,
    /// `U` row by row, columns `i ..= i + u_upper`.
    u: Vec<T>,
    /// Multipliers of elimination step `k`, rows `k+1 ..= k+lower`.
    l: Vec<T>,
    pivots: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    fn new(a: &BandedMatrix<T>) -> Result<Self> {
        let n = a.dim;
        let kl = a.lower;
        let ku = kl + a.upper;
        // working rows hold columns i - kl ..= i + ku
        let w = 2 * kl + a.upper + 1;
        let at = |i: usize, j: usize| i * w + j + kl - i;
        let mut work = vec![T::zero(); n * w];
        for (i, j, v) in a.entries() {
            work[at(i, j)] = v;
        }
        let mut l = vec![T::zero(); n * kl];
        let mut pivots = vec![0; n];

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + ku).min(n - 1);

            let mut p = k;
            let mut best = work[at(k, k)].abs();
            for r in k + 1..=last_row {
                let cand = work[at(r, k)].abs();
                if cand > best {
                    best = cand;
                    p = r;
                }
            }
            if !(best > T::zero()) || !best.is_finite() {
                return Err(Error::SingularMatrix { column: k });
            }
            pivots[k] = p;
            if p != k {
                for j in k..=last_col {
                    work.swap(at(k, j), at(p, j));
                }
            }

            let pivot = work[at(k, k)];
            for r in k + 1..=last_row {
                let m = work[at(r, k)] / pivot;
                l[k * kl + (r - k - 1)] = m;
                work[at(r, k)] = T::zero();
                if m != T::zero() {
                    for j in k + 1..=last_col {
                        work[at(r, j)] = work[at(r, j)] - m * work[at(k, j)];
                    }
                }
            }
        }

        let mut u = vec![T::zero(); n * (ku + 1)];
        for i in 0..n {
            for j in i..=(i + ku).min(n - 1) {
                u[i * (ku + 1) + j - i] = work[at(i, j)];
            }
        }
        Ok(Self {
            dim: n,
            lower: kl,
            u_upper: ku,
            u,
            l,
            pivots,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Overwrites `b` with the solution of `A x = b`.
    pub fn solve_in_place(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.dim);
        let n = self.dim;
        let kl = self.lower;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != T::zero() {
                let end = (k + kl).min(n - 1);
                let multipliers = &self.l[k * kl..];
                for (br, &m) in b[k + 1..=end].iter_mut().zip(multipliers) {
                    *br = *br - m * bk;
                }
            }
        }
        let w = self.u_upper + 1;
        for i in (0..n).rev() {
            let row = &self.u[i * w..(i + 1) * w];
            let mut acc = b[i];
            for j in i + 1..=(i + self.u_upper).min(n - 1) {
                acc = acc - row[j - i] * b[j];
            }
            b[i] = acc / row[0];
        }
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
