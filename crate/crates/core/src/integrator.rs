//! Crank–Nicolson time stepping of `y_t = L_h y - f(y)`.
//!
//! The linear generator is treated implicitly. Linear feedback is folded
//! into the implicit operator (`A_cl = L_h - a I`); saturated feedback is
//! evaluated once per step at the old state.

use crate::banded::{BandedLu, BandedMatrix};
use crate::diagnostics::{energy, EnergyTrace};
use crate::discretization::generator;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::saturation::{sat, FeedbackLaw};
use crate::scalar::Real;
use crate::state::State;

/// Upper limit on `gain * dt` for the feedback source term.
pub const MAX_GAIN_DT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T> {
    pub dt: T,
    pub t_final: T,
    /// Record a snapshot every this many steps.
    pub snapshot_stride: usize,
    /// Record the energy every this many steps.
    pub energy_stride: usize,
}

impl<T: Real> SimConfig<T> {
    pub fn new(dt: T, t_final: T) -> Self {
        Self {
            dt,
            t_final,
            snapshot_stride: 1,
            energy_stride: 1,
        }
    }

    pub fn with_strides(mut self, snapshot_stride: usize, energy_stride: usize) -> Self {
        self.snapshot_stride = snapshot_stride;
        self.energy_stride = energy_stride;
        self
    }

    pub fn validate(&self, feedback: &FeedbackLaw<T>) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::ConfigInvalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(Error::ConfigInvalid(format!(
                "t_final must be at least dt = {}, got {}",
                self.dt, self.t_final
            )));
        }
        if self.snapshot_stride == 0 || self.energy_stride == 0 {
            return Err(Error::ConfigInvalid("strides must be at least 1".into()));
        }
        feedback.validate()?;
        let gain_dt = feedback.gain() * self.dt;
        if gain_dt > T::lit(MAX_GAIN_DT) {
            return Err(Error::ConfigInvalid(format!(
                "gain * dt = {gain_dt} exceeds {MAX_GAIN_DT}"
            )));
        }
        Ok(())
    }

    /// Steps needed to reach `t_final`, rounding up unless `t_final / dt`
    /// is an integer to within rounding.
    pub fn n_steps(&self) -> usize {
        let q = (self.t_final / self.dt).to_f64_lossy();
        let r = q.round();
        if (q - r).abs() <= 1e-9 * q.max(1.0) {
            r as usize
        } else {
            q.ceil() as usize
        }
    }
}

/// Factorized Crank–Nicolson matrices for a fixed grid and time step.
#[derive(Debug, Clone)]
pub struct Stepper<T> {
    grid: Grid<T>,
    feedback: FeedbackLaw<T>,
    dt: T,
    /// `I + dt/2 A_cl`
    explicit: BandedMatrix<T>,
    /// LU of `I - dt/2 A_cl`
    implicit: BandedLu<T>,
}

pub fn make_stepper<T: Real>(
    grid: &Grid<T>,
    feedback: FeedbackLaw<T>,
    config: &SimConfig<T>,
) -> Result<Stepper<T>> {
    config.validate(&feedback)?;
    let dim = grid.interior_len();
    let mut a_cl = generator(grid);
    if let FeedbackLaw::Linear { gain } = feedback {
        for i in 0..dim {
            a_cl.add_to(i, i, -gain);
        }
    }
    let half = config.dt * T::lit(0.5);
    let identity = BandedMatrix::identity(dim);
    let explicit = identity.linear_combination(T::one(), &a_cl, half);
    let implicit = identity
        .linear_combination(T::one(), &a_cl, -half)
        .factorize()?;
    Ok(Stepper {
        grid: *grid,
        feedback,
        dt: config.dt,
        explicit,
        implicit,
    })
}

impl<T: Real> Stepper<T> {
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn feedback(&self) -> &FeedbackLaw<T> {
        &self.feedback
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Advances `state` by one time step.
    pub fn step(&self, state: &State<T>) -> Result<State<T>> {
        let time = state.time() + self.dt;
        let values = self.advance(state.values())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState {
                time: time.to_f64_lossy(),
            });
        }
        Ok(State::from_parts_unchecked(self.grid, values, time))
    }

    fn advance(&self, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.explicit.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.explicit.dim(),
                got: y.len(),
            });
        }
        let mut rhs = self.explicit.mul_vec(y);
        if let FeedbackLaw::Saturated { gain, levels } = &self.feedback {
            let c = *gain * self.dt;
            for (r, &v) in rhs.iter_mut().zip(y) {
                *r = *r - c * sat(v, levels);
            }
        }
        self.implicit.solve_in_place(&mut rhs);
        Ok(rhs)
    }
}

/// Recorded output of [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// Snapshots in increasing time, starting at `t = 0`; each carries its time stamp.
    pub snapshots: Vec<State<T>>,
    pub energy_trace: EnergyTrace<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> &State<T> {
        self.snapshots
            .last()
            .expect("trajectory holds the initial state")
    }
}

/// Integrates from `y0` (taken at `t = 0`) until `t >= t_final`.
///
/// Snapshots and energies are recorded on their strides; the initial and
/// final states are always recorded.
pub fn simulate<T: Real>(
    y0: &State<T>,
    feedback: FeedbackLaw<T>,
    config: &SimConfig<T>,
) -> Result<Trajectory<T>> {
    let stepper = make_stepper(y0.grid(), feedback, config)?;
    simulate_with(&stepper, y0, config)
}

/// [`simulate`] with a prebuilt stepper.
pub fn simulate_with<T: Real>(
    stepper: &Stepper<T>,
    y0: &State<T>,
    config: &SimConfig<T>,
) -> Result<Trajectory<T>> {
    let n_steps = config.n_steps();
    let mut y = y0.clone().with_time(T::zero());
    let mut snapshots = Vec::with_capacity(n_steps / config.snapshot_stride + 2);
    let mut trace = EnergyTrace::with_capacity(n_steps / config.energy_stride + 2);
    snapshots.push(y.clone());
    trace.push(T::zero(), energy(&y));

    for k in 1..=n_steps {
        // time stamps from the step count, not by accumulation
        let t = T::from_count(k) * stepper.dt;
        y = stepper.step(&y).map_err(|e| match e {
            Error::NonFiniteState { .. } => Error::NonFiniteState {
                time: t.to_f64_lossy(),
            },
            other => other,
        })?;
        y = y.with_time(t);
        let last = k == n_steps;
        if k % config.snapshot_stride == 0 || last {
            snapshots.push(y.clone());
        }
        if k % config.energy_stride == 0 || last {
            trace.push(t, energy(&y));
        }
    }
    Ok(Trajectory {
        snapshots,
        energy_trace: trace,
    })
}
