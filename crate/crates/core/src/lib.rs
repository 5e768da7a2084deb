//! Minimax optimization under the two-sided Polyak-Łojasiewicz condition.
//!
//! This crate implements alternating gradient descent ascent (AGDA), its
//! stochastic variant (Stoc-AGDA), a variance-reduced variant (VR-AGDA) for
//! finite-sum objectives, and a randomized-output AGDA for one-sided PL
//! problems, together with the exact potential-function diagnostics that make
//! their convergence behaviour checkable on concrete problem instances:
//!
//! * [`problems`] — problem oracles (a nonconvex-nonconcave toy function, a
//!   logistic-bilinear game, robust least squares with an M-seminorm) with
//!   exact best responses, `g(x) = max_y f(x, y)`, and analytic smoothness /
//!   PL constants where available;
//! * [`schedule`] — constant and diminishing stepsize schedules plus the
//!   theoretical presets for each solver;
//! * [`solvers`] — the iteration schemes themselves;
//! * [`diagnostics`] — potential metrics, numerical PL certification on a
//!   grid, per-iteration contraction and sublinear decay checks, saddle
//!   probing, and rate fitting.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod iterate;
pub mod problems;
pub mod schedule;
pub mod solvers;
pub mod trace;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use iterate::Iterate;
pub use problems::MinimaxProblem;
pub use schedule::{ScheduleKind, StepSchedule};
pub use solvers::{GradientNoise, RunResult, RunStatus};
pub use trace::TraceRecord;
