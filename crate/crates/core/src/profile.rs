//! Initial conditions.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Real;
use crate::state::State;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind<T> {
    /// `1 - cos(2 pi x / L)`; the stationary mode when `L = 2 pi`.
    OneMinusCos,
    /// `sin(2 pi k x / L)`
    SineMode(u32),
    /// Explicit interior samples `y_1 .. y_{N-1}`.
    Samples(Vec<T>),
}

/// Samples `amplitude * profile` at the interior nodes, at `t = 0`.
///
/// For [`ProfileKind::Samples`] the supplied values are multiplied by
/// `amplitude`.
pub fn init_profile<T: Real>(
    grid: &Grid<T>,
    kind: &ProfileKind<T>,
    amplitude: T,
) -> Result<State<T>> {
    // TAU / L is exactly one when L == TAU, so the default domain samples cos(x) itself.
    let wavenumber = T::TAU() / grid.length();
    match kind {
        ProfileKind::OneMinusCos => {
            State::from_fn(*grid, |x| amplitude * (T::one() - (wavenumber * x).cos()))
        }
        ProfileKind::SineMode(k) => {
            let k = T::from_u32(*k).expect("mode number fits the float type");
            State::from_fn(*grid, |x| amplitude * (k * wavenumber * x).sin())
        }
        ProfileKind::Samples(values) => {
            if values.len() != grid.interior_len() {
                return Err(Error::SampleLengthMismatch {
                    expected: grid.interior_len(),
                    got: values.len(),
                });
            }
            State::new(
                *grid,
                values.iter().map(|&v| amplitude * v).collect(),
                T::zero(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saturation::{sat_state, SaturationLevels};
    use std::f64::consts::PI;

    #[test]
    fn one_minus_cos_peaks_at_pi() {
        let g = Grid::new(2.0 * PI, 256).unwrap();
        let s = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
        // node 128 sits at x = pi
        assert!((s.values()[127] - 2.0).abs() < 1e-15);
        assert_eq!(s.time(), 0.0);
    }

    #[test]
    fn default_domain_samples_cos_x_exactly() {
        let g = Grid::new(2.0 * PI, 200).unwrap();
        let s = init_profile(&g, &ProfileKind::OneMinusCos, 100.0).unwrap();
        for (x, v) in g.interior_nodes().zip(s.values()) {
            assert_eq!(*v, 100.0 * (1.0 - x.cos()));
        }
    }

    #[test]
    fn zero_amplitude_gives_zero_state() {
        let g = Grid::new(3.0, 32).unwrap();
        let s = init_profile(&g, &ProfileKind::SineMode(2), 0.0).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn samples_length_checked() {
        let g = Grid::new(1.0, 8).unwrap();
        let err = init_profile(&g, &ProfileKind::Samples(vec![1.0; 3]), 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::SampleLengthMismatch {
                expected: 7,
                got: 3
            }
        );
        let ok = init_profile(&g, &ProfileKind::Samples(vec![1.0; 7]), 2.0).unwrap();
        assert!(ok.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn saturating_the_large_profile_clips_where_oracle_says() {
        let g = Grid::new(2.0 * PI, 256).unwrap();
        let s = init_profile(&g, &ProfileKind::OneMinusCos, 100.0).unwrap();
        let c = sat_state(&s, &SaturationLevels::symmetric(3.0).unwrap());
        for (x, v) in g.interior_nodes().zip(c.values()) {
            let raw = 100.0 * (1.0 - x.cos());
            let expected = raw.min(3.0);
            assert_eq!(*v, expected);
            if 1.0 - x.cos() > 0.03 {
                assert_eq!(*v, 3.0);
            }
        }
    }

    #[test]
    fn profiles_vanish_at_boundary_nodes_for_any_length() {
        for &len in &[1.0, 2.5, 2.0 * PI, 9.5977] {
            let g = Grid::new(len, 64).unwrap();
            let f = |x: f64| 1.0 - (2.0 * PI * x / len).cos();
            assert!(f(g.node(0)).abs() < 1e-14);
            assert!(f(g.node(g.n_cells())).abs() < 1e-12);
        }
    }
}
