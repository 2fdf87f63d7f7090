//! Fixed-point solver for the nonlinear resolvent problem
//!
//! ```text
//! lt * w + w''' + w' + a sat(w) = lt * u,    w(0) = w(L) = w'(L) = 0
//! ```
//!
//! with `lt = 1 / lambda > 0`. Each Picard step solves the linear problem
//! `(lt I - L_h) w_{k+1} = lt u - a sat(w_k)` with a factorization computed
//! once per problem.

use crate::banded::{BandedLu, BandedMatrix};
use crate::diagnostics::InequalityCheck;
use crate::discretization::{first_derivative_matrix, generator};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::saturation::{sat, SaturationLevels};
use crate::scalar::Real;
use crate::state::{weighted_dot, weighted_norm, State};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventProblem<T> {
    lambda_tilde: T,
    gain: T,
    levels: SaturationLevels<T>,
    rhs: State<T>,
}

impl<T: Real> ResolventProblem<T> {
    /// `gain = 0` is accepted and reduces the problem to a linear solve.
    pub fn new(
        lambda_tilde: T,
        gain: T,
        levels: SaturationLevels<T>,
        rhs: State<T>,
    ) -> Result<Self> {
        if !(lambda_tilde > T::zero()) || !lambda_tilde.is_finite() {
            return Err(Error::ConfigInvalid(format!(
                "lambda_tilde must be positive, got {lambda_tilde}"
            )));
        }
        if !(gain >= T::zero()) || !gain.is_finite() {
            return Err(Error::InvalidGain(gain.to_f64_lossy()));
        }
        Ok(Self {
            lambda_tilde,
            gain,
            levels,
            rhs,
        })
    }

    pub fn lambda_tilde(&self) -> T {
        self.lambda_tilde
    }

    pub fn gain(&self) -> T {
        self.gain
    }

    pub fn levels(&self) -> &SaturationLevels<T> {
        &self.levels
    }

    pub fn rhs(&self) -> &State<T> {
        &self.rhs
    }

    pub fn grid(&self) -> &Grid<T> {
        self.rhs.grid()
    }

    /// `a / lt`, an upper bound for the Picard contraction factor.
    pub fn contraction_bound(&self) -> T {
        self.gain / self.lambda_tilde
    }

    /// `g(w) = lt u - a sat(w)`
    fn source(&self, w: &[T]) -> Vec<T> {
        self.rhs
            .values()
            .iter()
            .zip(w)
            .map(|(&u, &wi)| self.lambda_tilde * u - self.gain * sat(wi, &self.levels))
            .collect()
    }

    /// dx-weighted norm of `lt w - L_h w + a sat(w) - lt u`.
    pub fn residual_norm(&self, w: &State<T>) -> Result<T> {
        self.rhs.check_same_len(w)?;
        let lw = generator(self.grid()).mul_vec(w.values());
        let r: Vec<T> = w
            .values()
            .iter()
            .zip(&lw)
            .zip(self.rhs.values())
            .map(|((&wi, &lwi), &ui)| {
                self.lambda_tilde * wi - lwi + self.gain * sat(wi, &self.levels)
                    - self.lambda_tilde * ui
            })
            .collect();
        Ok(weighted_norm(self.grid().dx(), &r))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSolution<T> {
    pub solution: State<T>,
    pub residual_norm: T,
    pub iterations: usize,
    /// `||w_{k+1} - w_k||` for every Picard step taken.
    pub step_norms: Vec<T>,
}

/// Factorization of `lt I - L_h`, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct ShiftedGenerator<T> {
    grid: Grid<T>,
    lambda_tilde: T,
    matrix: BandedMatrix<T>,
    lu: BandedLu<T>,
}

impl<T: Real> ShiftedGenerator<T> {
    pub fn new(grid: &Grid<T>, lambda_tilde: T) -> Result<Self> {
        if !(lambda_tilde > T::zero()) {
            return Err(Error::ConfigInvalid(format!(
                "lambda_tilde must be positive, got {lambda_tilde}"
            )));
        }
        let l = generator(grid);
        let matrix =
            BandedMatrix::identity(l.dim()).linear_combination(lambda_tilde, &l, -T::one());
        let lu = matrix.factorize()?;
        Ok(Self {
            grid: *grid,
            lambda_tilde,
            matrix,
            lu,
        })
    }

    pub fn lambda_tilde(&self) -> T {
        self.lambda_tilde
    }

    pub fn matrix(&self) -> &BandedMatrix<T> {
        &self.matrix
    }

    pub fn solve(&self, g: &[T]) -> Result<Vec<T>> {
        if g.len() != self.lu.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.lu.dim(),
                got: g.len(),
            });
        }
        Ok(self.lu.solve(g))
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }
}

/// Solves `(lt I - L_h) z = g`, i.e. `lt z + z''' + z' = g` under the boundary closure.
pub fn solve_linear_bvp<T: Real>(lambda_tilde: T, g: &State<T>) -> Result<State<T>> {
    let op = ShiftedGenerator::new(g.grid(), lambda_tilde)?;
    State::new(*g.grid(), op.solve(g.values())?, g.time())
}

/// Picard iteration from `w_0 = 0`.
///
/// Stops once the residual of the nonlinear equation drops below `tol`.
/// Each Picard step leaves a residual of `a ||sat(w_{k+1}) - sat(w_k)||`,
/// at most `a` times the step norm.
pub fn resolvent_fixed_point<T: Real>(
    problem: &ResolventProblem<T>,
    tol: T,
    max_iter: usize,
) -> Result<ResolventSolution<T>> {
    if !(tol > T::zero()) || max_iter == 0 {
        return Err(Error::ConfigInvalid(
            "tol must be positive and max_iter at least 1".into(),
        ));
    }
    if problem.contraction_bound() >= T::one() {
        log::warn!(
            "a / lambda_tilde = {} >= 1: Picard iteration may fail to contract",
            problem.contraction_bound()
        );
    }
    let grid = *problem.grid();
    let dx = grid.dx();
    let op = ShiftedGenerator::new(&grid, problem.lambda_tilde)?;
    let mut w = vec![T::zero(); grid.interior_len()];
    let mut step_norms = Vec::new();
    let mut residual = T::infinity();
    for k in 1..=max_iter {
        let next = op.solve(&problem.source(&w))?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence {
                iterations: k,
                residual: f64::INFINITY,
            });
        }
        let step: Vec<T> = next.iter().zip(&w).map(|(&a, &b)| a - b).collect();
        step_norms.push(weighted_norm(dx, &step));
        // residual of w_{k+1} is a * (sat(w_{k+1}) - sat(w_k))
        let sat_jump: Vec<T> = next
            .iter()
            .zip(&w)
            .map(|(&a, &b)| problem.gain * (sat(a, &problem.levels) - sat(b, &problem.levels)))
            .collect();
        w = next;
        residual = weighted_norm(dx, &sat_jump);
        if residual < tol {
            let solution = State::new(grid, w, T::zero())?;
            // report the directly evaluated residual, not the recurrence
            let residual_norm = problem.residual_norm(&solution)?;
            if residual_norm < tol {
                return Ok(ResolventSolution {
                    solution,
                    residual_norm,
                    iterations: k,
                    step_norms,
                });
            }
            residual = residual_norm;
            w = solution.into_values();
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: residual.to_f64_lossy(),
    })
}

/// The a-priori bound on `||w||^2` from testing the equation against `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBound<T> {
    pub lhs: T,
    pub rhs: T,
    pub alpha: T,
}

impl<T: Real> AprioriBound<T> {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// `||w||^2 <= a eps1 L u0^2 / alpha + lt eps2 ||u||^2 / alpha` with
/// `alpha = lt - a / eps1 - lt / eps2`.
///
/// `u0` is the larger of the two saturation levels.
pub fn apriori_bound_check<T: Real>(
    problem: &ResolventProblem<T>,
    sol: &ResolventSolution<T>,
    eps1: T,
    eps2: T,
) -> Result<AprioriBound<T>> {
    let lt = problem.lambda_tilde;
    let a = problem.gain;
    if !(eps1 > T::zero() && eps2 > T::zero()) {
        return Err(Error::ConfigInvalid(
            "eps1 and eps2 must be positive".into(),
        ));
    }
    let alpha = lt - a / eps1 - lt / eps2;
    if !(alpha > T::zero()) {
        return Err(Error::AlphaNotPositive(alpha.to_f64_lossy()));
    }
    let u0 = problem.levels.bound();
    let len = problem.grid().length();
    Ok(AprioriBound {
        lhs: sol.solution.norm_sq(),
        rhs: a * eps1 * len * u0 * u0 / alpha + lt * eps2 / alpha * problem.rhs.norm_sq(),
        alpha,
    })
}

/// `||w'||^2` against `||w||^2 + (L^2 / 2) ||g||^2` with `g = lt u - a sat(w)`.
pub fn h1_bound_check<T: Real>(
    problem: &ResolventProblem<T>,
    sol: &ResolventSolution<T>,
) -> InequalityCheck<T> {
    let grid = problem.grid();
    let dx = grid.dx();
    let dw = first_derivative_matrix(grid).mul_vec(sol.solution.values());
    let g = problem.source(sol.solution.values());
    let len = grid.length();
    InequalityCheck {
        lhs: weighted_dot(dx, &dw, &dw),
        rhs: sol.solution.norm_sq() + T::lit(0.5) * len * len * weighted_dot(dx, &g, &g),
    }
}
