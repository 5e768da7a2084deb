//! Stepsize schedules and the theoretical parameter presets.
//!
//! A [`StepSchedule`] produces the stepsize pair `(tau1_t, tau2_t)` used at
//! iteration `t`. Constant schedules return their bases unchanged;
//! diminishing schedules decay both components by the shared factor
//! `1/(gamma + t)`, so the ratio `tau1_t / tau2_t` is constant in `t`.
//!
//! Presets never clamp silently: out-of-range constants are rejected with an
//! error so misconfigured experiments fail loudly.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Diminishing,
}

/// Time-indexed stepsize pair.
///
/// For `Diminishing`, `tau1_base` is the numerator `beta` of
/// `tau1_t = beta / (gamma + t)` and `tau2_base` is the numerator of the
/// matching `tau2_t` (the theoretical construction uses
/// `18 l^2 beta / mu2^2`). `gamma_offset` is ignored by `Constant`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSchedule {
    pub kind: ScheduleKind,
    pub tau1_base: f64,
    pub tau2_base: f64,
    pub gamma_offset: f64,
}

impl StepSchedule {
    pub fn constant(tau1: f64, tau2: f64) -> Result<Self> {
        require_positive(tau1, "tau1")?;
        require_positive(tau2, "tau2")?;
        Ok(StepSchedule {
            kind: ScheduleKind::Constant,
            tau1_base: tau1,
            tau2_base: tau2,
            gamma_offset: 1.0,
        })
    }

    pub fn diminishing(beta: f64, tau2_numerator: f64, gamma: f64) -> Result<Self> {
        require_positive(beta, "beta")?;
        require_positive(tau2_numerator, "tau2 numerator")?;
        require_positive(gamma, "gamma")?;
        Ok(StepSchedule {
            kind: ScheduleKind::Diminishing,
            tau1_base: beta,
            tau2_base: tau2_numerator,
            gamma_offset: gamma,
        })
    }

    /// Stepsize pair at iteration `t`. Total on valid schedules.
    pub fn at(&self, t: u64) -> (f64, f64) {
        match self.kind {
            ScheduleKind::Constant => (self.tau1_base, self.tau2_base),
            ScheduleKind::Diminishing => {
                let denom = self.gamma_offset + t as f64;
                (self.tau1_base / denom, self.tau2_base / denom)
            }
        }
    }
}

fn require_positive(v: f64, name: &str) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(format!(
            "{name} must be strictly positive and finite, got {v}"
        )));
    }
    Ok(())
}

fn check_pl_constants(l: f64, mu1: f64, mu2: f64) -> Result<()> {
    require_positive(l, "l")?;
    require_positive(mu1, "mu1")?;
    require_positive(mu2, "mu2")?;
    // Smoothness dominates every PL constant, so mu > l means the constants
    // are inconsistent.
    if mu1 > l || mu2 > l {
        return Err(Error::invalid(format!(
            "PL constants must satisfy mu <= l, got l = {l}, mu1 = {mu1}, mu2 = {mu2}"
        )));
    }
    Ok(())
}

/// Smoothness modulus of `g(x) = max_y f(x, y)`: `L = l + l^2 / mu2`.
pub fn g_smoothness(l: f64, mu2: f64) -> f64 {
    l + l * l / mu2
}

/// Constant-stepsize preset for deterministic AGDA:
/// `tau1 = mu2^2 / (18 l^3)`, `tau2 = 1/l`.
pub fn preset_agda_theoretical(l: f64, mu1: f64, mu2: f64) -> Result<StepSchedule> {
    check_pl_constants(l, mu1, mu2)?;
    let tau1 = mu2 * mu2 / (18.0 * l * l * l);
    StepSchedule::constant(tau1, 1.0 / l)
}

/// Smallest `gamma` accepted by [`preset_stoc_diminishing`] for the given
/// constants, i.e. the value at which the initial stepsizes exactly meet all
/// caps (`tau1_0 <= min(1/L, mu2^2/(18 l^2))` and `tau2_0 <= 1/l`).
pub fn minimal_diminishing_gamma(l: f64, mu1: f64, mu2: f64, beta: f64) -> Result<f64> {
    check_pl_constants(l, mu1, mu2)?;
    require_positive(beta, "beta")?;
    let big_l = g_smoothness(l, mu2);
    let c1 = 18.0 * l * l / (mu2 * mu2);
    // tau2_0 = c1 * beta / gamma <= 1/l  <=>  gamma >= beta * c1 * l
    Ok(beta * big_l.max(c1).max(c1 * l))
}

/// Diminishing-stepsize preset for Stoc-AGDA:
/// `tau1_t = beta/(gamma+t)`, `tau2_t = 18 l^2 beta / (mu2^2 (gamma+t))`.
///
/// Requires `beta > 2/mu1` (strict) and `gamma` large enough that the initial
/// stepsizes satisfy `tau1_0 <= min(1/L, mu2^2/(18 l^2))` and `tau2_0 <= 1/l`.
pub fn preset_stoc_diminishing(
    l: f64,
    mu1: f64,
    mu2: f64,
    beta: f64,
    gamma: f64,
) -> Result<StepSchedule> {
    check_pl_constants(l, mu1, mu2)?;
    require_positive(beta, "beta")?;
    require_positive(gamma, "gamma")?;
    if beta <= 2.0 / mu1 {
        return Err(Error::invalid(format!(
            "beta must exceed 2/mu1 = {}, got {beta}",
            2.0 / mu1
        )));
    }
    let min_gamma = minimal_diminishing_gamma(l, mu1, mu2, beta)?;
    // Tiny relative slack so gamma = minimal_diminishing_gamma(..) is accepted
    // despite rounding in the division below.
    if gamma < min_gamma * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "gamma = {gamma} violates the initial-stepsize cap; need gamma >= {min_gamma}"
        )));
    }
    let tau2_numerator = 18.0 * l * l * beta / (mu2 * mu2);
    StepSchedule::diminishing(beta, tau2_numerator, gamma)
}

/// Constant-stepsize preset for the randomized-output AGDA on one-sided PL
/// problems: `tau1 = 1/(20 kappa^2 l)`, `tau2 = 1/l` with `kappa = l/mu2`.
pub fn preset_one_sided_theoretical(l: f64, mu2: f64) -> Result<StepSchedule> {
    require_positive(l, "l")?;
    require_positive(mu2, "mu2")?;
    if mu2 > l {
        return Err(Error::invalid(format!(
            "PL constant must satisfy mu2 <= l, got l = {l}, mu2 = {mu2}"
        )));
    }
    let kappa = l / mu2;
    StepSchedule::constant(1.0 / (20.0 * kappa * kappa * l), 1.0 / l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VrRegime {
    /// Pick `Regime2` when `n <= kappa^9`, otherwise `Regime1`.
    Auto,
    /// Double-loop setting: `T = 1`, inner length scaling with `kappa^9`.
    Regime1,
    /// Requires `n <= kappa^9`; inner length scales with `n`.
    Regime2,
}

/// VR-AGDA parameters produced by [`preset_vr_agda`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VrPreset {
    pub tau1: f64,
    pub tau2: f64,
    /// Inner-loop length N (clamped to at least 1).
    pub inner_n: usize,
    /// Outer-loop length T.
    pub outer_t: usize,
    /// Condition number used, `kappa = l / min(mu1, mu2)`.
    pub kappa: f64,
}

/// Theoretical VR-AGDA preset.
///
/// `alpha` and `beta` are the free small constants of the convergence
/// analysis (defaults 0.05 both at the call sites). Construction verifies the
/// three smallness conditions the analysis needs, with `k3 = beta kappa^-6`
/// (Regime1) or `k3 = beta n^-2/3` (Regime2):
///
/// 1. `sqrt(k3) + k3^2 <= 1`
/// 2. `k3^2 (k3/28 + 28/sqrt(k3)) / kappa^2 <= 1/4`
/// 3. `2 (e^alpha - 1) k3 <= 1/20`
pub fn preset_vr_agda(
    n: usize,
    l: f64,
    mu1: f64,
    mu2: f64,
    alpha: f64,
    beta: f64,
    regime: VrRegime,
) -> Result<VrPreset> {
    check_pl_constants(l, mu1, mu2)?;
    require_positive(alpha, "alpha")?;
    require_positive(beta, "beta")?;
    if n == 0 {
        return Err(Error::invalid("component count n must be positive"));
    }
    let kappa = l / mu1.min(mu2);
    let kappa9 = kappa.powi(9);
    let nf = n as f64;
    let regime = match regime {
        VrRegime::Auto => {
            if nf <= kappa9 {
                VrRegime::Regime2
            } else {
                VrRegime::Regime1
            }
        }
        VrRegime::Regime2 if nf > kappa9 => {
            return Err(Error::invalid(format!(
                "Regime2 requires n <= kappa^9 (n = {n}, kappa^9 = {kappa9:.6e})"
            )));
        }
        other => other,
    };

    let (tau1, tau2, n_raw, outer_t, k3) = match regime {
        VrRegime::Regime1 => {
            let k3 = beta * kappa.powi(-6);
            let tau1 = beta / (28.0 * kappa.powi(8) * l);
            let tau2 = beta / (l * kappa.powi(6));
            let n_raw = alpha * beta.powf(-2.0 / 3.0) * kappa9
                / (2.0 + 4.0 * beta.sqrt() * kappa.powi(-3));
            (tau1, tau2, n_raw, 1usize, k3)
        }
        VrRegime::Regime2 => {
            // cbrt is exact at perfect cubes, keeping T = 1 at n = kappa^9.
            let n13 = nf.cbrt();
            let n23 = n13 * n13;
            let k3 = beta / n23;
            let tau1 = beta / (28.0 * kappa * kappa * l * n23);
            let tau2 = beta / (l * n23);
            let n_raw = alpha * beta.powf(-2.0 / 3.0) * nf / (2.0 + 4.0 * beta.sqrt() / n13);
            let outer_t = (kappa.powi(3) / n13).ceil() as usize;
            (tau1, tau2, n_raw, outer_t.max(1), k3)
        }
        VrRegime::Auto => unreachable!(),
    };

    check_vr_smallness(alpha, k3, kappa)?;

    Ok(VrPreset {
        tau1,
        tau2,
        inner_n: (n_raw.floor() as usize).max(1),
        outer_t,
        kappa,
    })
}

fn check_vr_smallness(alpha: f64, k3: f64, kappa: f64) -> Result<()> {
    let c1 = k3.sqrt() + k3 * k3;
    if c1 > 1.0 {
        return Err(Error::invalid(format!(
            "vr preset smallness violated: sqrt(k3) + k3^2 = {c1:.6} > 1 (choose smaller beta)"
        )));
    }
    let c2 = k3 * k3 * (k3 / 28.0 + 28.0 / k3.sqrt()) / (kappa * kappa);
    if c2 > 0.25 {
        return Err(Error::invalid(format!(
            "vr preset smallness violated: k3^2 (k1 + 1/k2) / kappa^2 = {c2:.6} > 1/4 (choose smaller beta)"
        )));
    }
    let c3 = 2.0 * (alpha.exp() - 1.0) * k3;
    if c3 > 0.05 {
        return Err(Error::invalid(format!(
            "vr preset smallness violated: 2 (e^alpha - 1) k3 = {c3:.6} > 1/20 (choose smaller alpha)"
        )));
    }
    Ok(())
}
