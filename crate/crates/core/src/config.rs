use crate::error::{Error, Result};

/// Default potential weight for the AGDA / Stoc-AGDA family (`P = a + b/10`).
pub const POTENTIAL_WEIGHT_AGDA: f64 = 0.1;
/// Default potential weight for VR-AGDA (`P = a + b/20`).
pub const POTENTIAL_WEIGHT_VR: f64 = 0.05;

/// Run-level configuration shared by all solvers.
///
/// The `vr_*` fields are only consulted by VR-AGDA.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iters: u64,
    pub seed: u64,
    /// Record a trace checkpoint every this many iterations (>= 1).
    pub metrics_every: u64,
    /// The weight `lambda` in `P = a + lambda * b`, in (0, 1].
    pub potential_weight: f64,
    /// VR-AGDA inner-loop length N.
    pub vr_inner_n: usize,
    /// VR-AGDA outer-loop length T.
    pub vr_outer_t: usize,
    /// VR-AGDA epoch count K.
    pub vr_epochs_k: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 1000,
            seed: 0,
            metrics_every: 1,
            potential_weight: POTENTIAL_WEIGHT_AGDA,
            vr_inner_n: 1,
            vr_outer_t: 1,
            vr_epochs_k: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.metrics_every == 0 {
            return Err(Error::invalid("metrics_every must be positive"));
        }
        if !(self.potential_weight > 0.0 && self.potential_weight <= 1.0) {
            return Err(Error::invalid(format!(
                "potential_weight must lie in (0, 1], got {}",
                self.potential_weight
            )));
        }
        if self.vr_inner_n == 0 || self.vr_outer_t == 0 || self.vr_epochs_k == 0 {
            return Err(Error::invalid("vr_inner_n, vr_outer_t, vr_epochs_k must be positive"));
        }
        Ok(())
    }

    pub fn with_max_iters(mut self, max_iters: u64) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_metrics_every(mut self, every: u64) -> Self {
        self.metrics_every = every;
        self
    }

    pub fn with_potential_weight(mut self, weight: f64) -> Self {
        self.potential_weight = weight;
        self
    }

    pub fn with_vr(mut self, inner_n: usize, outer_t: usize, epochs_k: usize) -> Self {
        self.vr_inner_n = inner_n;
        self.vr_outer_t = outer_t;
        self.vr_epochs_k = epochs_k;
        self
    }
}
