//! Iteration schemes: deterministic AGDA and SGDA, stochastic AGDA,
//! variance-reduced AGDA, and the randomized-output AGDA for one-sided PL
//! problems.
//!
//! All runners are deterministic given their seed, guard against divergence
//! (any coordinate above [`DIVERGENCE_LIMIT`] in magnitude, or a non-finite
//! step, aborts with [`RunStatus::Diverged`] — a valid experimental outcome,
//! not an error), and record a [`TraceRecord`] every
//! `SolverConfig::metrics_every` iterations plus one final checkpoint.
//!
//! Gradient-evaluation accounting: a full gradient on an `n`-component
//! problem costs `n` component evaluations per side, so one deterministic
//! step costs `2n` and one stochastic/inner step costs `2`. Diagnostics are
//! free. `rng_draws` counts every random draw a runner makes: two per
//! stochastic iteration (the two half-steps never share a draw), plus one
//! uniform selection per VR-AGDA epoch or randomized-output run.

mod recorder;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::problems::MinimaxProblem;
use crate::schedule::{g_smoothness, ScheduleKind, StepSchedule};
use crate::trace::TraceRecord;

use recorder::Recorder;

/// Runs abort as diverged once a coordinate magnitude exceeds this.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Diverged,
}

/// Outcome of a solver run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_iterate: Iterate,
    pub trace: Vec<TraceRecord>,
    /// Total random draws consumed (indices, noise vectors, selections).
    pub rng_draws: u64,
    /// Randomized-output algorithms only: the uniformly selected iterate.
    pub selected: Option<Iterate>,
    /// Flat index of the last uniform selection, when one was made.
    pub selected_index: Option<u64>,
    pub status: RunStatus,
}

/// Gradient-noise model for Stoc-AGDA.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GradientNoise {
    /// Noiseless full gradients (reduces Stoc-AGDA to AGDA).
    Exact,
    /// Uniform single-component sampling; one independent index per half-step.
    ComponentSampling,
    /// Full gradient plus isotropic Gaussian noise with total variance
    /// `sigma^2` per query (each coordinate gets variance `sigma^2 / d`).
    Additive { sigma: f64 },
}

/// One alternating step: `x+ = x - tau1 grad_x f(x, y)`, then the ascent step
/// `y+ = y + tau2 grad_y f(x+, y)` at the already-updated `x`.
///
/// The output is not finiteness-checked; run loops translate non-finite or
/// oversized iterates into [`RunStatus::Diverged`].
pub fn agda_step(
    p: &dyn MinimaxProblem,
    it: &Iterate,
    tau1: f64,
    tau2: f64,
) -> Result<Iterate> {
    p.check_dims(it)?;
    let (gx, _) = p.grad(it)?;
    let half = Iterate {
        x: &it.x - tau1 * gx,
        y: it.y.clone(),
    };
    let (_, gy) = p.grad(&half)?;
    Ok(Iterate {
        y: &half.y + tau2 * gy,
        x: half.x,
    })
}

/// One simultaneous step: both gradients taken at the old iterate.
pub fn sgda_step(
    p: &dyn MinimaxProblem,
    it: &Iterate,
    tau1: f64,
    tau2: f64,
) -> Result<Iterate> {
    p.check_dims(it)?;
    let (gx, gy) = p.grad(it)?;
    Ok(Iterate {
        x: &it.x - tau1 * gx,
        y: &it.y + tau2 * gy,
    })
}

/// Adopt `next` unless it is non-finite; report whether the run may continue.
fn advance(cur: &mut Iterate, next: Iterate) -> bool {
    if !next.all_finite() {
        return false;
    }
    let ok = next.max_abs() <= DIVERGENCE_LIMIT;
    *cur = next;
    ok
}

fn check_taus(tau1: f64, tau2: f64) -> Result<()> {
    if !(tau1.is_finite() && tau1 > 0.0 && tau2.is_finite() && tau2 > 0.0) {
        return Err(Error::invalid(format!(
            "stepsizes must be strictly positive, got ({tau1}, {tau2})"
        )));
    }
    Ok(())
}

fn deterministic_run(
    p: &dyn MinimaxProblem,
    schedule: &StepSchedule,
    it0: &Iterate,
    cfg: &SolverConfig,
    alternating: bool,
) -> Result<RunResult> {
    cfg.validate()?;
    p.check_dims(it0)?;
    let pair_cost = 2 * p.n_components() as u64;
    let mut rec = Recorder::new(p, cfg.potential_weight, cfg.metrics_every);
    let mut it = it0.clone();
    let mut grad_evals = 0u64;
    let mut status = RunStatus::Completed;
    let mut end_iter = cfg.max_iters;
    for t in 0..cfg.max_iters {
        rec.maybe(t, grad_evals, &it)?;
        let (t1, t2) = schedule.at(t);
        let next = if alternating {
            agda_step(p, &it, t1, t2)?
        } else {
            sgda_step(p, &it, t1, t2)?
        };
        grad_evals += pair_cost;
        if !advance(&mut it, next) {
            status = RunStatus::Diverged;
            end_iter = t + 1;
            break;
        }
    }
    rec.force(end_iter, grad_evals, &it)?;
    Ok(RunResult {
        final_iterate: it,
        trace: rec.into_trace(),
        rng_draws: 0,
        selected: None,
        selected_index: None,
        status,
    })
}

/// Deterministic AGDA with a (usually constant) schedule.
pub fn agda_run(
    p: &dyn MinimaxProblem,
    schedule: &StepSchedule,
    it0: &Iterate,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    deterministic_run(p, schedule, it0, cfg, true)
}

/// Deterministic SGDA (simultaneous updates).
pub fn sgda_run(
    p: &dyn MinimaxProblem,
    schedule: &StepSchedule,
    it0: &Iterate,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    deterministic_run(p, schedule, it0, cfg, false)
}

fn add_isotropic_noise(g: &mut DVector<f64>, sigma: f64, rng: &mut ChaCha8Rng) {
    let scale = sigma / (g.len() as f64).sqrt();
    for v in g.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *v += scale * z;
    }
}

fn validate_diminishing_caps(p: &dyn MinimaxProblem, s: &StepSchedule) -> Result<()> {
    let l = p.analytic_l().ok_or_else(|| {
        Error::invalid("diminishing schedule requires the problem's analytic l for the cap check")
    })?;
    let mu2 = p.analytic_mu2().ok_or_else(|| {
        Error::invalid("diminishing schedule requires the problem's analytic mu2 for the cap check")
    })?;
    let (t1, t2) = s.at(0);
    let cap1 = (1.0 / g_smoothness(l, mu2)).min(mu2 * mu2 / (18.0 * l * l));
    if t1 > cap1 * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "initial tau1 = {t1} exceeds the cap min(1/L, mu2^2/(18 l^2)) = {cap1}"
        )));
    }
    let cap2 = 1.0 / l;
    if t2 > cap2 * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "initial tau2 = {t2} exceeds 1/l = {cap2}"
        )));
    }
    Ok(())
}

/// Stochastic AGDA: two independent gradient queries per iteration, the
/// second taken at the already-updated `x`.
///
/// Diminishing schedules are validated against the problem's analytic
/// constants (initial-stepsize caps); problems lacking those constants are
/// rejected.
pub fn stoc_agda_run(
    p: &dyn MinimaxProblem,
    schedule: &StepSchedule,
    it0: &Iterate,
    cfg: &SolverConfig,
    noise: GradientNoise,
) -> Result<RunResult> {
    cfg.validate()?;
    p.check_dims(it0)?;
    if schedule.kind == ScheduleKind::Diminishing {
        validate_diminishing_caps(p, schedule)?;
    }
    if let GradientNoise::Additive { sigma } = noise {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::invalid(format!("sigma must be nonnegative, got {sigma}")));
        }
    }
    let n_comp = p.n_components();
    let half_cost = match noise {
        GradientNoise::ComponentSampling => 1,
        _ => n_comp as u64,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rec = Recorder::new(p, cfg.potential_weight, cfg.metrics_every);
    let mut it = it0.clone();
    let mut grad_evals = 0u64;
    let mut rng_draws = 0u64;
    let mut status = RunStatus::Completed;
    let mut end_iter = cfg.max_iters;

    for t in 0..cfg.max_iters {
        rec.maybe(t, grad_evals, &it)?;
        let (t1, t2) = schedule.at(t);

        let gx = match noise {
            GradientNoise::Exact => p.grad(&it)?.0,
            GradientNoise::ComponentSampling => {
                let i = rng.random_range(0..n_comp);
                rng_draws += 1;
                p.component_grad(i, &it)?.0
            }
            GradientNoise::Additive { sigma } => {
                let mut g = p.grad(&it)?.0;
                add_isotropic_noise(&mut g, sigma, &mut rng);
                rng_draws += 1;
                g
            }
        };
        grad_evals += half_cost;
        let half = Iterate {
            x: &it.x - t1 * gx,
            y: it.y.clone(),
        };

        let gy = match noise {
            GradientNoise::Exact => p.grad(&half)?.1,
            GradientNoise::ComponentSampling => {
                let i = rng.random_range(0..n_comp);
                rng_draws += 1;
                p.component_grad(i, &half)?.1
            }
            GradientNoise::Additive { sigma } => {
                let mut g = p.grad(&half)?.1;
                add_isotropic_noise(&mut g, sigma, &mut rng);
                rng_draws += 1;
                g
            }
        };
        grad_evals += half_cost;
        let next = Iterate {
            y: &half.y + t2 * gy,
            x: half.x,
        };

        if !advance(&mut it, next) {
            status = RunStatus::Diverged;
            end_iter = t + 1;
            break;
        }
    }
    rec.force(end_iter, grad_evals, &it)?;
    Ok(RunResult {
        final_iterate: it,
        trace: rec.into_trace(),
        rng_draws,
        selected: None,
        selected_index: None,
        status,
    })
}

/// Variance-reduced AGDA with epoch restarts.
///
/// Loop structure per epoch: `T` outer iterations each recompute both full
/// gradients at the snapshot and run `N` alternating inner steps with
/// SVRG-style corrections (two independent component indices per inner step;
/// the y-half uses the already-updated `x` and the same snapshot). After the
/// outer loop one of the `N*T` inner iterates is selected uniformly at random
/// and becomes the next epoch's start.
///
/// Inner-iterate metrics are sampled every `cfg.metrics_every` inner steps
/// (computing `g` at every inner iterate would dominate runtime); the
/// selected iterate is always recorded at each epoch boundary.
pub fn vr_agda_run(
    p: &dyn MinimaxProblem,
    tau1: f64,
    tau2: f64,
    it0: &Iterate,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    cfg.validate()?;
    p.check_dims(it0)?;
    check_taus(tau1, tau2)?;
    let n_comp = p.n_components();
    if n_comp == 0 {
        return Err(Error::invalid("vr-agda requires a finite-sum problem with n >= 1"));
    }
    let (inner_n, outer_t, epochs) = (cfg.vr_inner_n, cfg.vr_outer_t, cfg.vr_epochs_k);
    let cells = (inner_n as u64) * (outer_t as u64);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rec = Recorder::new(p, cfg.potential_weight, cfg.metrics_every);
    let mut state = it0.clone();
    let mut grad_evals = 0u64;
    let mut rng_draws = 0u64;
    let mut status = RunStatus::Completed;
    let mut iter = 0u64;
    let mut last_sel_index = None;

    'epochs: for _k in 0..epochs {
        let sel = rng.random_range(0..cells);
        rng_draws += 1;
        last_sel_index = Some(sel);
        let mut selected: Option<Iterate> = None;
        let mut pos = 0u64;
        for _t in 0..outer_t {
            let snapshot = state.clone();
            let (fgx, fgy) = p.grad(&snapshot)?;
            grad_evals += 2 * n_comp as u64;
            for _j in 0..inner_n {
                rec.maybe(iter, grad_evals, &state)?;
                if pos == sel {
                    selected = Some(state.clone());
                }

                let i1 = rng.random_range(0..n_comp);
                rng_draws += 1;
                let (cgx, _) = p.component_grad(i1, &state)?;
                let (sgx, _) = p.component_grad(i1, &snapshot)?;
                let dir_x = cgx - sgx + &fgx;
                let half = Iterate {
                    x: &state.x - tau1 * dir_x,
                    y: state.y.clone(),
                };

                let i2 = rng.random_range(0..n_comp);
                rng_draws += 1;
                let (_, cgy) = p.component_grad(i2, &half)?;
                let (_, sgy) = p.component_grad(i2, &snapshot)?;
                let dir_y = cgy - sgy + &fgy;
                let next = Iterate {
                    y: &state.y + tau2 * dir_y,
                    x: half.x,
                };
                grad_evals += 2;
                iter += 1;
                pos += 1;

                if !advance(&mut state, next) {
                    status = RunStatus::Diverged;
                    break 'epochs;
                }
            }
        }
        state = selected.expect("selection index lies within the epoch");
        rec.force(iter, grad_evals, &state)?;
    }
    rec.force(iter, grad_evals, &state)?;
    let selected = match status {
        RunStatus::Completed => Some(state.clone()),
        RunStatus::Diverged => None,
    };
    Ok(RunResult {
        final_iterate: state,
        trace: rec.into_trace(),
        rng_draws,
        selected,
        selected_index: last_sel_index,
        status,
    })
}

/// Deterministic AGDA for `t_iters` steps with a uniformly random output:
/// `selected` is drawn from all produced iterates `(x_0, y_0), ..., (x_T, y_T)`.
pub fn one_sided_agda_run(
    p: &dyn MinimaxProblem,
    tau1: f64,
    tau2: f64,
    t_iters: u64,
    it0: &Iterate,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    cfg.validate()?;
    p.check_dims(it0)?;
    check_taus(tau1, tau2)?;
    let pair_cost = 2 * p.n_components() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rec = Recorder::new(p, cfg.potential_weight, cfg.metrics_every);
    let mut iterates = Vec::with_capacity(t_iters as usize + 1);
    iterates.push(it0.clone());
    let mut it = it0.clone();
    let mut grad_evals = 0u64;
    let mut status = RunStatus::Completed;
    let mut end_iter = t_iters;
    for t in 0..t_iters {
        rec.maybe(t, grad_evals, &it)?;
        let next = agda_step(p, &it, tau1, tau2)?;
        grad_evals += pair_cost;
        if !next.all_finite() {
            status = RunStatus::Diverged;
            end_iter = t + 1;
            break;
        }
        it = next;
        // Only realized finite states enter the selection pool.
        iterates.push(it.clone());
        if it.max_abs() > DIVERGENCE_LIMIT {
            status = RunStatus::Diverged;
            end_iter = t + 1;
            break;
        }
    }
    rec.force(end_iter, grad_evals, &it)?;
    let sel = rng.random_range(0..iterates.len() as u64);
    let selected = iterates[sel as usize].clone();
    Ok(RunResult {
        final_iterate: it,
        trace: rec.into_trace(),
        rng_draws: 1,
        selected: Some(selected),
        selected_index: Some(sel),
        status,
    })
}
