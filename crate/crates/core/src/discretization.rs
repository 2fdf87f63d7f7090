//! Finite-difference operators on the interior unknowns.
//!
//! All three operators act on `y_1 .. y_{N-1}` with `y_0 = y_N = 0`.
//! The third-derivative stencil reaches one ghost node past each end:
//!
//! * `y_{-1} = -y_1` (odd reflection about `x = 0`, consistent with `y(0) = 0`)
//! * `y_{N+1} = y_{N-1}` (even reflection about `x = L`, consistent with `y_x(L) = 0`)
//!
//! With this closure the symmetric part of the generator is
//! `-diag(1, 0, .., 0, 1) / (2 dx^3)`, so `<L_h u, u> = -(u_1^2 + u_{N-1}^2) / (2 dx^2)`,
//! the discrete counterpart of the `-|u'(0)|^2 / 2` boundary dissipation.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Real;
use crate::state::State;

pub type BandedOperator<T> = BandedMatrix<T>;

/// Central difference `(y_{i+1} - y_{i-1}) / (2 dx)`.
pub fn first_derivative_matrix<T: Real>(grid: &Grid<T>) -> BandedOperator<T> {
    let n = grid.interior_len();
    let c = T::one() / (T::lit(2.0) * grid.dx());
    let mut m = BandedMatrix::zeros(n, 1, 1);
    for r in 0..n {
        if r > 0 {
            m.add_to(r, r - 1, -c);
        }
        if r + 1 < n {
            m.add_to(r, r + 1, c);
        }
    }
    m
}

/// Central difference `(-y_{i-2} + 2 y_{i-1} - 2 y_{i+1} + y_{i+2}) / (2 dx^3)`
/// with the reflection closure described in the module docs.
pub fn third_derivative_matrix<T: Real>(grid: &Grid<T>) -> BandedOperator<T> {
    let n = grid.interior_len();
    let big_n = grid.n_cells() as isize;
    let dx = grid.dx();
    let c = T::one() / (T::lit(2.0) * dx * dx * dx);
    let stencil: [(isize, T); 4] = [
        (-2, -c),
        (-1, T::lit(2.0) * c),
        (1, T::lit(-2.0) * c),
        (2, c),
    ];
    let mut m = BandedMatrix::zeros(n, 2, 2);
    for r in 0..n {
        let i = r as isize + 1;
        for &(offset, w) in &stencil {
            let j = i + offset;
            match j {
                -1 => m.add_to(r, 0, -w),
                j if j == big_n + 1 => m.add_to(r, n - 1, w),
                j if j >= 1 && j < big_n => m.add_to(r, (j - 1) as usize, w),
                // y_0 and y_N vanish
                _ => {}
            }
        }
    }
    m
}

/// `L_h = -(D1 + D3)`, the discrete `w -> -w' - w'''`.
pub fn generator<T: Real>(grid: &Grid<T>) -> BandedOperator<T> {
    let d1 = first_derivative_matrix(grid);
    let d3 = third_derivative_matrix(grid);
    d1.linear_combination(-T::one(), &d3, -T::one())
}

/// Matrix-vector product; the time stamp is carried over.
pub fn apply<T: Real>(op: &BandedOperator<T>, state: &State<T>) -> Result<State<T>> {
    if op.dim() != state.len() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: state.len(),
        });
    }
    let out = op.mul_vec(state.values());
    State::new(*state.grid(), out, state.time())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{init_profile, ProfileKind};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_err(a: &[f64], b: impl Iterator<Item = f64>) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn first_derivative_is_second_order_on_sine() {
        let len = 3.0;
        let k = 2.0 * PI / len;
        let err = |n: usize| {
            let g = Grid::new(len, n).unwrap();
            let y = State::from_fn(g, |x| (k * x).sin()).unwrap();
            let d = apply(&first_derivative_matrix(&g), &y).unwrap();
            max_err(d.values(), g.interior_nodes().map(|x| k * (k * x).cos()))
        };
        for n in [32, 64, 128] {
            let ratio = err(n) / err(2 * n);
            assert!(ratio >= 3.5, "N = {n}: ratio {ratio}");
        }
    }

    #[test]
    fn first_derivative_kills_constants_away_from_boundary() {
        let g = Grid::new(1.0, 16).unwrap();
        let ones = State::new(g, vec![1.0; 15], 0.0).unwrap();
        let d = apply(&first_derivative_matrix(&g), &ones).unwrap();
        assert!(d.values()[1..14].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        let z = State::zeros(g);
        for op in [
            first_derivative_matrix(&g),
            third_derivative_matrix(&g),
            generator(&g),
        ] {
            assert!(apply(&op, &z).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn third_derivative_of_cubic_is_exact_inside() {
        // z = x (L - x)^2 = x^3 - 2 L x^2 + L^2 x, so z''' = 6
        let len: f64 = 1.5;
        let g = Grid::new(len, 64).unwrap();
        let z = State::from_fn(g, |x| x * (len - x).powi(2)).unwrap();
        let d = apply(&third_derivative_matrix(&g), &z).unwrap();
        for v in &d.values()[1..d.len() - 1] {
            assert!((v - 6.0).abs() < 1e-7, "{v}");
        }
    }

    #[test]
    fn third_derivative_of_stationary_mode_tends_to_minus_sine() {
        // rows from the second one on; row 1 carries the O(1/dx) closure defect
        let err = |n: usize| {
            let g = Grid::new(2.0 * PI, n).unwrap();
            let y = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
            let d = apply(&third_derivative_matrix(&g), &y).unwrap();
            max_err(
                &d.values()[1..],
                g.interior_nodes().skip(1).map(|x| -x.sin()),
            )
        };
        let (e1, e2) = (err(128), err(256));
        assert!(e2 < 1e-3 && e1 / e2 > 3.5, "{e1} {e2}");
    }

    #[test]
    fn generator_annihilates_stationary_mode_under_refinement() {
        let interior_residual = |n: usize| {
            let g = Grid::new(2.0 * PI, n).unwrap();
            let y = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
            let r = apply(&generator(&g), &y).unwrap();
            (g.dx() * r.values()[1..].iter().map(|v| v * v).sum::<f64>()).sqrt()
        };
        let mut prev = interior_residual(64);
        for n in [128, 256, 512] {
            let cur = interior_residual(n);
            assert!(cur < prev / 3.5, "N = {n}: {cur} vs {prev}");
            prev = cur;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn stationary_mode_row_one_defect_matches_closure() {
        // odd reflection assumes y''(0) = 0 but 1 - cos has y''(0) = 1
        let g = Grid::new(2.0 * PI, 256).unwrap();
        let y = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
        let r = apply(&generator(&g), &y).unwrap();
        let dx = g.dx();
        let predicted = -y.values()[0] / (dx * dx * dx);
        assert!((r.values()[0] - predicted).abs() < 1e-3 * predicted.abs());
    }

    #[test]
    fn operator_and_linearity() {
        let g = Grid::new(2.0f64, 32).unwrap();
        let id = BandedMatrix::identity(31);
        let y = State::from_fn(g, |x| x * (2.0 - x) * x.exp()).unwrap();
        assert_eq!(apply(&id, &y).unwrap(), y);

        let d1 = first_derivative_matrix(&g);
        let twice = d1.linear_combination(1.0, &d1, 1.0);
        let a = apply(&twice, &y).unwrap();
        let b = apply(&d1.scaled(2.0), &y).unwrap();
        assert_eq!(a, b);

        let short = State::zeros(Grid::new(2.0, 16).unwrap());
        assert_eq!(
            apply(&d1, &short),
            Err(Error::DimensionMismatch {
                expected: 31,
                got: 15
            })
        );
    }

    #[test]
    fn first_derivative_is_exactly_antisymmetric() {
        let g = Grid::new(1.0, 20).unwrap();
        let d1 = first_derivative_matrix(&g);
        for (i, j, v) in d1.entries() {
            assert_eq!(v, -d1.get(j, i));
        }
    }

    #[test]
    fn bandwidths_at_most_two() {
        let g = Grid::new(1.0, 20).unwrap();
        for op in [
            first_derivative_matrix(&g),
            third_derivative_matrix(&g),
            generator(&g),
        ] {
            assert!(op.lower_bandwidth() <= 2 && op.upper_bandwidth() <= 2);
            assert!(op.all_finite());
        }
    }

    #[test]
    fn symmetric_part_is_boundary_diagonal() {
        let g = Grid::new(2.0 * PI, 32).unwrap();
        let l = generator(&g);
        let t = l.transpose();
        let c = 1.0 / (2.0 * g.dx().powi(3));
        let n = g.interior_len();
        for i in 0..n {
            for j in 0..n {
                let s = 0.5 * (l.get(i, j) + t.get(i, j));
                let expected = if i == j && (i == 0 || i == n - 1) {
                    -c
                } else {
                    0.0
                };
                assert!((s - expected).abs() <= 1e-9 * c, "({i},{j}) {s}");
            }
        }
    }

    fn quad_form(n_cells: usize, u: &[f64]) -> (f64, f64) {
        let g = Grid::new(2.0 * PI, n_cells).unwrap();
        let dx = g.dx();
        let lu = generator(&g).mul_vec(u);
        let q = dx * lu.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
        (q, dx * u.iter().map(|v| v * v).sum::<f64>())
    }

    proptest! {
        #[test]
        fn generator_is_dissipative(u in proptest::collection::vec(-10.0f64..10.0, 63)) {
            let (q, nsq) = quad_form(64, &u);
            prop_assert!(q <= 1e-9 * nsq, "{} vs {}", q, nsq);
            let dx = 2.0 * PI / 64.0;
            let exact = -(u[0] * u[0] + u[62] * u[62]) / (2.0 * dx * dx);
            prop_assert!((q - exact).abs() <= 1e-9 * (exact.abs() + nsq / (dx * dx)));
        }
    }
}
