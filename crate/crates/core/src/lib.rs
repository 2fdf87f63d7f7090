//! Linear Korteweg–de Vries equation on `[0, L]` under distributed feedback.
//!
//! The closed-loop system is
//!
//! ```text
//! y_t + y_xxx + y_x + f(y) = 0,    y(t, 0) = y(t, L) = y_x(t, L) = 0
//! ```
//!
//! with `f` either absent, linear (`a y`), or saturated (`a sat(y)`).
//! The crate provides a dissipative finite-difference discretization, a
//! Crank–Nicolson time stepper, Lyapunov-energy diagnostics, critical-length
//! and spectral analysis of the generator, and a fixed-point solver for the
//! nonlinear resolvent problem.
//!
//! Every numeric routine is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the precision to `f64` for everyday use.

// `!(x > 0)` style guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod grid;
pub mod integrator;
pub mod profile;
pub mod resolvent;
pub mod saturation;
pub mod scalar;
pub mod spectral;
pub mod state;

pub use banded::{BandedLu, BandedMatrix};
pub use diagnostics::{
    dissipativity_residual, energy, fit_decay_rate, graph_bound_check, identity_check_xzzp,
    identity_check_xzzppp, sector_gap, EnergyTrace, InequalityCheck,
};
pub use discretization::{
    apply, first_derivative_matrix, generator, third_derivative_matrix, BandedOperator,
};
pub use error::{Error, Result};
pub use grid::{make_grid, Grid, MIN_CELLS};
pub use integrator::{make_stepper, simulate, SimConfig, Stepper, Trajectory};
pub use profile::{init_profile, ProfileKind};
pub use resolvent::{
    apriori_bound_check, h1_bound_check, resolvent_fixed_point, solve_linear_bvp, AprioriBound,
    ResolventProblem, ResolventSolution, ShiftedGenerator,
};
pub use saturation::{sat, sat_state, FeedbackLaw, SaturationLevels};
pub use scalar::Real;
pub use spectral::{
    critical_length, critical_lengths, is_critical, spectrum, CriticalLength, SpectrumResult,
    MAX_DENSE_DIM,
};
pub use state::State;

pub type Grid64 = Grid<f64>;
pub type State64 = State<f64>;
pub type SaturationLevels64 = SaturationLevels<f64>;
pub type FeedbackLaw64 = FeedbackLaw<f64>;
pub type ProfileKind64 = ProfileKind<f64>;
pub type BandedOperator64 = BandedOperator<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type Stepper64 = Stepper<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type EnergyTrace64 = EnergyTrace<f64>;
pub type SpectrumResult64 = SpectrumResult<f64>;
pub type CriticalLength64 = CriticalLength<f64>;
pub type ResolventProblem64 = ResolventProblem<f64>;
pub type ResolventSolution64 = ResolventSolution<f64>;

pub type Grid32 = Grid<f32>;
pub type State32 = State<f32>;
pub type SimConfig32 = SimConfig<f32>;
pub type Trajectory32 = Trajectory<f32>;
