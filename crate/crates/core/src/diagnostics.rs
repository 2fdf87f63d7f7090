//! Lyapunov energy, decay-rate fits, and discrete checks of the
//! integration-by-parts identities and inner-product inequalities.
//!
//! All inner products and norms are dx-weighted sums over interior nodes.

use crate::discretization::{first_derivative_matrix, generator, third_derivative_matrix};
use crate::error::{Error, Result};
use crate::saturation::{sat, SaturationLevels};
use crate::scalar::Real;
use crate::state::{weighted_dot, State};

/// Energies below this are dropped from decay fits.
pub const LOG_FLOOR: f64 = 1e-30;

/// Sampled `E(t)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyTrace<T> {
    times: Vec<T>,
    energies: Vec<T>,
}

impl<T: Real> EnergyTrace<T> {
    pub fn new(times: Vec<T>, energies: Vec<T>) -> Result<Self> {
        if times.len() != energies.len() {
            return Err(Error::InvalidTrace(format!(
                "{} times but {} energies",
                times.len(),
                energies.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrace("times must increase strictly".into()));
        }
        if energies.iter().any(|e| !e.is_finite() || *e < T::zero()) {
            return Err(Error::InvalidTrace(
                "energies must be finite and non-negative".into(),
            ));
        }
        Ok(Self { times, energies })
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            energies: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(&mut self, time: T, energy: T) {
        debug_assert!(self.times.last().is_none_or(|&t| time > t));
        self.times.push(time);
        self.energies.push(energy);
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times
            .iter()
            .copied()
            .zip(self.energies.iter().copied())
    }

    /// First sampled time with `E(t) <= fraction * E(0)`.
    pub fn first_time_below(&self, fraction: T) -> Option<T> {
        let e0 = *self.energies.first()?;
        self.iter()
            .find(|&(_, e)| e <= fraction * e0)
            .map(|(t, _)| t)
    }

    /// Largest `E^{n+1} / E^n` over consecutive samples with `E^n > 0`.
    pub fn max_step_ratio(&self) -> Option<T> {
        self.energies
            .windows(2)
            .filter(|w| w[0] > T::zero())
            .map(|w| w[1] / w[0])
            .reduce(T::max)
    }
}

/// `E = 1/2 * integral of y^2`.
pub fn energy<T: Real>(state: &State<T>) -> T {
    T::lit(0.5) * state.norm_sq()
}

/// Negated least-squares slope of `ln E` over samples with `t_start <= t <= t_end`.
///
/// Positive results mean decay.
pub fn fit_decay_rate<T: Real>(trace: &EnergyTrace<T>, t_start: T, t_end: T) -> Result<T> {
    let window: Vec<(T, T)> = trace
        .iter()
        .filter(|&(t, _)| t >= t_start && t <= t_end)
        .collect();
    if window.len() < 2 {
        return Err(Error::EmptyWindow {
            t_start: t_start.to_f64_lossy(),
            t_end: t_end.to_f64_lossy(),
        });
    }
    let floor = T::lit(LOG_FLOOR);
    let usable: Vec<(T, T)> = window
        .iter()
        .filter(|&&(_, e)| e > floor)
        .map(|&(t, e)| (t, e.ln()))
        .collect();
    if usable.len() < 2 {
        let bad = window.iter().find(|&&(_, e)| e <= floor).unwrap();
        return Err(Error::NonPositiveEnergyInWindow {
            time: bad.0.to_f64_lossy(),
        });
    }
    let n = T::from_count(usable.len());
    let t_mean = usable.iter().map(|p| p.0).sum::<T>() / n;
    let y_mean = usable.iter().map(|p| p.1).sum::<T>() / n;
    let sxy = usable
        .iter()
        .map(|&(t, y)| (t - t_mean) * (y - y_mean))
        .sum::<T>();
    let sxx = usable.iter().map(|&(t, _)| (t - t_mean).powi(2)).sum::<T>();
    if sxx == T::zero() {
        return Err(Error::EmptyWindow {
            t_start: t_start.to_f64_lossy(),
            t_end: t_end.to_f64_lossy(),
        });
    }
    Ok(T::zero() - sxy / sxx)
}

/// `-gain * integral of y sat(y)`, the bound on `dE/dt` under saturated feedback.
pub fn sector_gap<T: Real>(state: &State<T>, levels: &SaturationLevels<T>, gain: T) -> T {
    let s = state
        .values()
        .iter()
        .map(|&y| y * sat(y, levels))
        .sum::<T>();
    T::zero() - gain * state.grid().dx() * s
}

/// `<A_h u - A_h v, u - v>` with `A_h w = L_h w - gain * sat(w)`.
pub fn dissipativity_residual<T: Real>(
    u: &State<T>,
    v: &State<T>,
    gain: T,
    levels: &SaturationLevels<T>,
) -> Result<T> {
    u.check_same_len(v)?;
    let l = generator(u.grid());
    let diff = u.difference(v)?;
    let ld = l.mul_vec(diff.values());
    let dx = u.grid().dx();
    let linear = weighted_dot(dx, &ld, diff.values());
    let nonlinear = dx
        * u.values()
            .iter()
            .zip(v.values())
            .map(|(&a, &b)| (sat(a, levels) - sat(b, levels)) * (a - b))
            .sum::<T>();
    Ok(linear - gain * nonlinear)
}

/// A discrete identity or inequality evaluated on both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> InequalityCheck<T> {
    /// `|lhs - rhs| / |rhs|`; zero when both sides vanish.
    pub fn relative_error(&self) -> T {
        let diff = (self.lhs - self.rhs).abs();
        if diff == T::zero() {
            T::zero()
        } else {
            diff / self.rhs.abs()
        }
    }

    /// `lhs <= rhs * (1 + rel_tol)`
    pub fn holds(&self, rel_tol: T) -> bool {
        self.lhs <= self.rhs * (T::one() + rel_tol)
    }
}

/// `integral of x z z'''` against `3/2 * ||z'||^2`.
pub fn identity_check_xzzppp<T: Real>(z: &State<T>) -> InequalityCheck<T> {
    let g = z.grid();
    let d3z = third_derivative_matrix(g).mul_vec(z.values());
    let d1z = first_derivative_matrix(g).mul_vec(z.values());
    let dx = g.dx();
    InequalityCheck {
        lhs: x_weighted(z, &d3z),
        rhs: T::lit(1.5) * weighted_dot(dx, &d1z, &d1z),
    }
}

/// `integral of x z z'` against `-1/2 * ||z||^2`.
pub fn identity_check_xzzp<T: Real>(z: &State<T>) -> InequalityCheck<T> {
    let d1z = first_derivative_matrix(z.grid()).mul_vec(z.values());
    InequalityCheck {
        lhs: x_weighted(z, &d1z),
        rhs: T::lit(-0.5) * z.norm_sq(),
    }
}

/// `||u'||^2` against `2 ||u' + u'''||^2 + (8 L^2 / 5) ||u||^2`.
pub fn graph_bound_check<T: Real>(u: &State<T>) -> InequalityCheck<T> {
    let g = u.grid();
    let dx = g.dx();
    let d1u = first_derivative_matrix(g).mul_vec(u.values());
    let d3u = third_derivative_matrix(g).mul_vec(u.values());
    let sum: Vec<T> = d1u.iter().zip(&d3u).map(|(&a, &b)| a + b).collect();
    let len = g.length();
    InequalityCheck {
        lhs: weighted_dot(dx, &d1u, &d1u),
        rhs: T::lit(2.0) * weighted_dot(dx, &sum, &sum)
            + T::lit(8.0 / 5.0) * len * len * u.norm_sq(),
    }
}

fn x_weighted<T: Real>(z: &State<T>, w: &[T]) -> T {
    let g = z.grid();
    g.dx()
        * g.interior_nodes()
            .zip(z.values())
            .zip(w)
            .map(|((x, &zi), &wi)| x * zi * wi)
            .sum::<T>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::profile::{init_profile, ProfileKind};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cubic(len: f64, n: usize) -> State<f64> {
        State::from_fn(Grid::new(len, n).unwrap(), |x| x * (len - x).powi(2)).unwrap()
    }

    #[test]
    fn energy_of_stationary_mode_tends_to_three_pi_over_two() {
        // integral over [0, 2 pi] of (1 - cos x)^2 is 3 pi
        let exact = 1.5 * PI;
        for n in [64, 256, 1024] {
            let g = Grid::new(2.0 * PI, n).unwrap();
            let y = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
            assert!((energy(&y) - exact).abs() < 1e-10, "N = {n}");
            let big = init_profile(&g, &ProfileKind::OneMinusCos, 100.0).unwrap();
            assert!((energy(&big) - 1e4 * exact).abs() < 1e-6);
        }
        assert_eq!(energy(&State::zeros(Grid::new(1.0, 8).unwrap())), 0.0);
    }

    #[test]
    fn decay_fit_on_exact_exponential() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let trace = EnergyTrace::new(
            times.clone(),
            times.iter().map(|t| (-2.0 * t).exp()).collect(),
        )
        .unwrap();
        let rate = fit_decay_rate(&trace, 0.0, 10.0).unwrap();
        assert!((rate - 2.0).abs() < 1e-6);

        let flat = EnergyTrace::new(times, vec![3.0; 200]).unwrap();
        assert!(fit_decay_rate(&flat, 0.0, 10.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn decay_fit_errors() {
        let trace = EnergyTrace::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            fit_decay_rate(&trace, 5.0, 6.0),
            Err(Error::EmptyWindow { .. })
        ));
        assert_eq!(
            fit_decay_rate(&trace, 0.0, 2.0),
            Err(Error::NonPositiveEnergyInWindow { time: 1.0 })
        );
    }

    #[test]
    fn trace_validation() {
        assert!(EnergyTrace::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(EnergyTrace::new(vec![0.0], vec![-1.0]).is_err());
        assert!(EnergyTrace::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let t = EnergyTrace::new(vec![0.0, 1.0, 2.0], vec![10.0, 5.0, 0.05]).unwrap();
        assert_eq!(t.first_time_below(0.01), Some(2.0));
        assert_eq!(t.max_step_ratio(), Some(0.5));
    }

    #[test]
    fn sector_gap_cases() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        let l = SaturationLevels::symmetric(1.0).unwrap();
        assert_eq!(sector_gap(&State::zeros(g), &l, 1.0), 0.0);
        let small = State::from_fn(g, |x| 0.5 * x.sin()).unwrap();
        let expected = -3.0 * 2.0 * energy(&small);
        assert!((sector_gap(&small, &l, 3.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn dissipativity_residual_trivial_cases() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        let l = SaturationLevels::symmetric(1.0).unwrap();
        let u = State::from_fn(g, |x| 5.0 * x.sin() * x).unwrap();
        assert_eq!(dissipativity_residual(&u, &u, 1.0, &l).unwrap(), 0.0);
        let short = State::zeros(Grid::new(2.0 * PI, 32).unwrap());
        assert!(matches!(
            dissipativity_residual(&u, &short, 1.0, &l),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn xzzppp_identity_on_cubic() {
        let c = identity_check_xzzppp(&cubic(1.0, 512));
        assert!(c.relative_error() < 1e-2, "{c:?}");
        // analytic: 3/2 * ||z'||^2 = 3/2 * L^5 * 2/15 = L^5 / 5 on the continuum
        assert!((c.rhs - 0.2).abs() < 1e-2);
    }

    #[test]
    fn identities_converge_under_refinement() {
        for len in [1.0, 2.0 * PI] {
            for n in [128, 256, 512] {
                let a = identity_check_xzzppp(&cubic(len, n)).relative_error();
                let b = identity_check_xzzppp(&cubic(len, 2 * n)).relative_error();
                assert!(a / b >= 1.8, "xzz''' L={len} N={n}: {a} {b}");
                let a = identity_check_xzzp(&cubic(len, n)).relative_error();
                let b = identity_check_xzzp(&cubic(len, 2 * n)).relative_error();
                assert!(a / b >= 1.8, "xzz' L={len} N={n}: {a} {b}");
            }
        }
    }

    #[test]
    fn xzzp_identity_cases() {
        assert!(identity_check_xzzp(&cubic(1.0, 512)).relative_error() < 1e-2);
        let g = Grid::new(1.0, 512).unwrap();
        let s = init_profile(&g, &ProfileKind::SineMode(1), 1.0).unwrap();
        assert!(identity_check_xzzp(&s).relative_error() < 1e-2);
        let z = identity_check_xzzp(&State::zeros(g));
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        let z = identity_check_xzzppp(&State::zeros(g));
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
    }

    #[test]
    fn graph_bound_cases() {
        assert!(graph_bound_check(&cubic(2.0 * PI, 512)).holds(0.0));

        let g = Grid::new(2.0 * PI, 512).unwrap();
        let y = init_profile(&g, &ProfileKind::OneMinusCos, 1.0).unwrap();
        let c = graph_bound_check(&y);
        assert!(c.holds(0.0));
        // ||u'||^2 = pi and ||u||^2 = 3 pi on the continuum
        assert!((c.lhs - PI).abs() < 1e-3);
        let floor = 8.0 * (2.0 * PI).powi(2) / 5.0 * 3.0 * PI;
        assert!(c.rhs >= floor * (1.0 - 1e-6));

        let z = graph_bound_check(&State::zeros(g));
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
    }

    proptest! {
        #[test]
        fn energy_is_quadratic(vals in proptest::collection::vec(-100.0f64..100.0, 31),
                               k in -6i32..6, negative in any::<bool>()) {
            let g = Grid::new(1.0, 32).unwrap();
            let s = State::new(g, vals, 0.0).unwrap();
            // powers of two keep the scaling exact
            let c = if negative { -1.0 } else { 1.0 } * 2f64.powi(k);
            prop_assert_eq!(energy(&s.scaled(c)), c * c * energy(&s));
        }

        #[test]
        fn sector_gap_never_positive(vals in proptest::collection::vec(-50.0f64..50.0, 31),
                                     gain in 0.0f64..10.0, u0 in 0.01f64..10.0) {
            let g = Grid::new(3.0, 32).unwrap();
            let s = State::new(g, vals, 0.0).unwrap();
            let l = SaturationLevels::symmetric(u0).unwrap();
            prop_assert!(sector_gap(&s, &l, gain) <= 0.0);
        }
    }
}
