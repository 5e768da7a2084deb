//! Exact potential metrics, numerical PL certification, convergence-bound
//! checkers, and rate estimation.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::problems::MinimaxProblem;
use crate::trace::TraceRecord;

/// Ratio denominators below this are treated as vacuous in the PL grid (the
/// inequality holds trivially at near-optimal points, and rounding would
/// otherwise produce spurious 0/0 estimates).
pub const PL_DENOM_CUTOFF: f64 = 1e-12;

/// Axis-aligned box for grid diagnostics on 1x1-dimensional problems.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRegion {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Grid lower-bound evidence for the two-sided PL constants on a region.
#[derive(Clone, Copy, Debug)]
pub struct PlEstimate {
    pub mu1_hat: f64,
    pub mu2_hat: f64,
    /// Grid point achieving the `mu1_hat` ratio minimum.
    pub argmin_mu1: (f64, f64),
    /// Grid point achieving the `mu2_hat` ratio minimum.
    pub argmin_mu2: (f64, f64),
    pub region: GridRegion,
    pub resolution: usize,
}

/// Least-squares fit of `log P_t` against `t` over an iteration window.
#[derive(Clone, Copy, Debug)]
pub struct RateFit {
    /// `exp(slope)`: the fitted per-iteration contraction factor.
    pub rho_hat: f64,
    pub r_squared: f64,
    /// Inclusive iteration window used for the fit.
    pub window: (u64, u64),
    pub points: usize,
}

/// Exact inaccuracy measures at an iterate:
/// `a = g(x) - g*`, `b = g(x) - f(x, y)`, `P = a + weight * b`.
pub fn potential(
    p: &dyn MinimaxProblem,
    it: &Iterate,
    weight: f64,
) -> Result<(f64, f64, f64)> {
    p.check_dims(it)?;
    if !(weight > 0.0) {
        return Err(Error::invalid(format!("weight must be positive, got {weight}")));
    }
    let g = p.g_value(&it.x)?;
    let g_star = p.g_star()?;
    let f = p.value(it)?;
    let a = g - g_star;
    let b = g - f;
    Ok((a, b, a + weight * b))
}

/// Estimate the two-sided PL constants on a grid:
/// `mu1_hat = min ||grad_x f||^2 / (2 (f - min_x f))` and the analogous
/// `mu2_hat` with `max_y f - f`, skipping vacuous denominators.
///
/// Requires a problem with `d1 = d2 = 1` and exact inner optima
/// (`min_x_value` and `g_value`). Estimates are lower-bound evidence on the
/// region, not global certificates.
pub fn pl_estimate_grid(
    p: &dyn MinimaxProblem,
    region: GridRegion,
    resolution: usize,
) -> Result<PlEstimate> {
    if p.d1() != 1 || p.d2() != 1 {
        return Err(p.unsupported("pl_estimate_grid (requires d1 = d2 = 1)"));
    }
    if resolution < 2 {
        return Err(Error::invalid("resolution must be at least 2"));
    }
    if !(region.x_min < region.x_max) || !(region.y_min < region.y_max) {
        return Err(Error::invalid("degenerate region"));
    }
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
    let mut mu1_hat = f64::INFINITY;
    let mut mu2_hat = f64::INFINITY;
    let mut argmin_mu1 = (f64::NAN, f64::NAN);
    let mut argmin_mu2 = (f64::NAN, f64::NAN);
    for i in 0..resolution {
        let x = step(region.x_min, region.x_max, i);
        let gx_of_x = p.g_value(&DVector::from_element(1, x))?;
        for j in 0..resolution {
            let y = step(region.y_min, region.y_max, j);
            let it = Iterate {
                x: DVector::from_element(1, x),
                y: DVector::from_element(1, y),
            };
            let f = p.value(&it)?;
            let (gx, gy) = p.grad(&it)?;
            let d1 = f - p.min_x_value(&it.y)?;
            if d1 > PL_DENOM_CUTOFF {
                let ratio = gx.norm_squared() / (2.0 * d1);
                if ratio < mu1_hat {
                    mu1_hat = ratio;
                    argmin_mu1 = (x, y);
                }
            }
            let d2 = gx_of_x - f;
            if d2 > PL_DENOM_CUTOFF {
                let ratio = gy.norm_squared() / (2.0 * d2);
                if ratio < mu2_hat {
                    mu2_hat = ratio;
                    argmin_mu2 = (x, y);
                }
            }
        }
    }
    Ok(PlEstimate {
        mu1_hat,
        mu2_hat,
        argmin_mu1,
        argmin_mu2,
        region,
        resolution,
    })
}

fn potentials_of(trace: &[TraceRecord]) -> Result<Vec<(u64, f64)>> {
    trace
        .iter()
        .map(|r| r.potential.map(|p| (r.iter, p)).ok_or(Error::MissingPotential))
        .collect()
}

/// Check the per-step contraction `P_{t+1} <= rho P_t + delta` on a trace of
/// consecutive iterations; returns the iterations `t` where it fails (with a
/// `1e-12` absolute slack for floating-point error).
pub fn contraction_check(
    trace: &[TraceRecord],
    rho: f64,
    delta: f64,
) -> Result<Vec<u64>> {
    if trace.len() < 2 {
        return Err(Error::TraceTooShort {
            need: 2,
            got: trace.len(),
        });
    }
    let ps = potentials_of(trace)?;
    for w in ps.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(Error::NonConsecutiveTrace);
        }
    }
    Ok(ps
        .windows(2)
        .filter(|w| w[1].1 > rho * w[0].1 + delta + 1e-12)
        .map(|w| w[0].0)
        .collect())
}

/// Check the sublinear bound `P_t <= nu / (gamma + t)` with 5% slack
/// (`nu` is estimated, not known); returns the violating iterations.
pub fn sublinear_check(trace: &[TraceRecord], nu: f64, gamma: f64) -> Result<Vec<u64>> {
    if trace.len() < 2 {
        return Err(Error::TraceTooShort {
            need: 2,
            got: trace.len(),
        });
    }
    let ps = potentials_of(trace)?;
    Ok(ps
        .into_iter()
        .filter(|&(t, p)| p > nu / (gamma + t as f64) * 1.05)
        .map(|(t, _)| t)
        .collect())
}

/// Estimate `nu` as the maximum of `P_t (gamma + t)` over the trailing 20% of
/// the trace (the asymptotic regime, where the bound is tight).
pub fn estimate_nu_from_tail(trace: &[TraceRecord], gamma: f64) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::TraceTooShort { need: 1, got: 0 });
    }
    let ps = potentials_of(trace)?;
    let start = ps.len() - (ps.len() / 5).max(1);
    Ok(ps[start..]
        .iter()
        .map(|&(t, p)| p * (gamma + t as f64))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `||grad g(x)|| = ||grad_x f(x, y*(x))||`; the stationarity measure of `g`.
pub fn stationarity_of_g(p: &dyn MinimaxProblem, x: &DVector<f64>) -> Result<f64> {
    let y_star = p.best_response_y(x)?;
    let it = Iterate {
        x: x.clone(),
        y: y_star,
    };
    let (gx, _) = p.grad(&it)?;
    Ok(gx.norm())
}

fn sample_unit_ball(dim: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let mut v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = v.norm();
    if norm > 0.0 {
        let radius: f64 = rng.random_range(0.0..1.0f64).powf(1.0 / dim as f64);
        v *= radius / norm;
    }
    v
}

/// Probe whether `it` behaves like a saddle point up to `epsilon`: for
/// `n_probes` random perturbations in the unit ball, `f(x*, y) <= f(x*, y*) + eps`
/// and `f(x, y*) >= f(x*, y*) - eps`. Vacuously true for `n_probes = 0`.
pub fn saddle_probe(
    p: &dyn MinimaxProblem,
    it: &Iterate,
    epsilon: f64,
    n_probes: usize,
    seed: u64,
) -> Result<bool> {
    p.check_dims(it)?;
    let f0 = p.value(it)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_probes {
        let dy = sample_unit_ball(p.d2(), &mut rng);
        let f_y = p.value(&Iterate {
            x: it.x.clone(),
            y: &it.y + dy,
        })?;
        if f_y > f0 + epsilon {
            return Ok(false);
        }
        let dx = sample_unit_ball(p.d1(), &mut rng);
        let f_x = p.value(&Iterate {
            x: &it.x + dx,
            y: it.y.clone(),
        })?;
        if f_x < f0 - epsilon {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fit `log P_t ~ slope * t + intercept` over the inclusive iteration window
/// and report `rho_hat = exp(slope)` with the fit's `r^2`.
///
/// Needs at least 10 checkpoints with strictly positive potential inside the
/// window.
pub fn rate_fit(trace: &[TraceRecord], window: (u64, u64)) -> Result<RateFit> {
    let ps = potentials_of(trace)?;
    let pts: Vec<(f64, f64)> = ps
        .into_iter()
        .filter(|&(t, _)| t >= window.0 && t <= window.1)
        .map(|(t, p)| {
            if p > 0.0 {
                Ok((t as f64, p.ln()))
            } else {
                Err(Error::NonpositivePotential)
            }
        })
        .collect::<Result<_>>()?;
    if pts.len() < 10 {
        return Err(Error::TraceTooShort {
            need: 10,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_l = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_l).powi(2)).sum();
    // A constant sequence only deviates by accumulated roundoff; report it as
    // a perfect horizontal fit rather than dividing noise by noise.
    let degenerate = ss_tot <= 1e-18 * n * mean_l.abs().max(1.0).powi(2);
    let (slope, r_squared) = if degenerate {
        (0.0, 1.0)
    } else {
        let sxx: f64 = pts.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_l)).sum();
        let slope = sxy / sxx;
        let intercept = mean_l - slope * mean_t;
        let ss_res: f64 = pts
            .iter()
            .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
            .sum();
        (slope, (1.0 - ss_res / ss_tot).clamp(0.0, 1.0))
    };
    Ok(RateFit {
        rho_hat: slope.exp(),
        r_squared,
        window,
        points: pts.len(),
    })
}

/// Worst relative error (per coordinate, relative to `max(1, |grad_i|)`)
/// between central finite differences of `value` and the analytic gradients.
pub fn fd_gradient_check(p: &dyn MinimaxProblem, it: &Iterate, h: f64) -> Result<f64> {
    p.check_dims(it)?;
    if !(h > 0.0) {
        return Err(Error::invalid(format!("h must be positive, got {h}")));
    }
    let (gx, gy) = p.grad(it)?;
    let mut worst = 0.0_f64;
    for k in 0..p.d1() {
        let mut plus = it.clone();
        let mut minus = it.clone();
        plus.x[k] += h;
        minus.x[k] -= h;
        let fd = (p.value(&plus)? - p.value(&minus)?) / (2.0 * h);
        worst = worst.max((fd - gx[k]).abs() / gx[k].abs().max(1.0));
    }
    for k in 0..p.d2() {
        let mut plus = it.clone();
        let mut minus = it.clone();
        plus.y[k] += h;
        minus.y[k] -= h;
        let fd = (p.value(&plus)? - p.value(&minus)?) / (2.0 * h);
        worst = worst.max((fd - gy[k]).abs() / gy[k].abs().max(1.0));
    }
    Ok(worst)
}
